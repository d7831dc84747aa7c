"""Accelerated first-order methods for smooth quasar-convex finite sums."""

from ._kernels import USING_COMPILED
from .errors import (DimensionMismatchError, DivergenceError, GenerationError,
                     InvalidArgumentError, ParseError, QuasarOptError,
                     SearchFailureError)
from .linesearch import (BisearchResult, BisearchSpec, ExitBranch,
                         SegmentRestriction, bisearch, eval_bound)
from .mirror import (MirrorMap, bregman, diagonal_quadratic_map,
                     euclidean_map, gd_step, mirror_step)
from .oracle import (FiniteSumObjective, Sampler, SvrgAnchor, full_gradient,
                     make_anchor, sample_batch, stochastic_gradient,
                     svrg_estimate)
from .schedules import (QasgdPhase, QuasarParams, StepParams, SvrgOption,
                        params_qagd, params_qasgd, params_qasgd_sgc,
                        params_qasvrg, qasgd_eta, stage_length,
                        svrg_batch_size)
from .solvers import (Method, RunConfig, Trace, accelerated_loop,
                      gd_baseline, multi_stage_qasvrg, run_method,
                      sgd_baseline)

__version__ = "0.1.0"
