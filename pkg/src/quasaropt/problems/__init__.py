from .datasets import load_csv
from .glm import (GlmInstance, GlmLink, generate_glm, glm_objective,
                  glm_value_grad, link_value_deriv, load_glm, save_glm)
from .lds import (LdsInstance, LdsModelParams, generate_lds, lds_objective,
                  lds_value_grad, load_lds, perturbed_init, save_lds,
                  spectral_radius)
from .piecewise import (PiecewiseQuasarInstance, generate_piecewise,
                        gq_value_grad, load_piecewise, piecewise_objective,
                        save_piecewise)

__all__ = [
    "GlmInstance", "GlmLink", "generate_glm", "glm_objective",
    "glm_value_grad", "link_value_deriv", "load_glm", "save_glm",
    "load_piecewise", "save_piecewise",
    "LdsInstance", "LdsModelParams", "generate_lds", "lds_objective",
    "lds_value_grad", "load_lds", "perturbed_init", "save_lds",
    "spectral_radius",
    "PiecewiseQuasarInstance", "generate_piecewise", "gq_value_grad",
    "piecewise_objective",
    "load_csv",
]
