"""Generalized linear model square loss.

Component i is (sigma(w^T x_i) - y_i)^2 with labels generated exactly by a
planted weight vector, so the minimum value is zero.  Links: logistic,
quadratic, and leaky ReLU (slope 0.01 below zero, left-derivative at the
kink).
"""

import json
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..errors import InvalidArgumentError
from ..oracle import FiniteSumObjective


class GlmLink(Enum):
    LOGISTIC = "logistic"
    QUADRATIC = "quadratic"
    LEAKY_RELU = "leaky_relu"


LEAKY_SLOPE = 0.01


def link_value_deriv(link: GlmLink, z):
    """Vectorized (sigma(z), sigma'(z)) for the given link."""
    z = np.asarray(z, dtype=float)
    if link is GlmLink.LOGISTIC:
        s = 1.0 / (1.0 + np.exp(-z))
        return s, s * (1.0 - s)
    if link is GlmLink.QUADRATIC:
        return z * z, 2.0 * z
    if link is GlmLink.LEAKY_RELU:
        pos = z > 0
        return np.where(pos, z, LEAKY_SLOPE * z), \
            np.where(pos, 1.0, LEAKY_SLOPE)
    raise InvalidArgumentError(f"unknown link {link!r}")


@dataclass(frozen=True)
class GlmInstance:
    X: np.ndarray       # (n, d)
    w_star: np.ndarray  # (d,)
    y: np.ndarray       # (n,) = sigma(X w_star)
    link: GlmLink

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def d(self) -> int:
        return self.X.shape[1]


def generate_glm(n, d, link: GlmLink, seed) -> GlmInstance:
    """Standard-normal rows and planted weights; labels noise-free."""
    if n < 1 or d < 1:
        raise InvalidArgumentError("n and d must be positive")
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, d))
    w_star = rng.standard_normal(d)
    y, _ = link_value_deriv(link, X @ w_star)
    return GlmInstance(X, w_star, y, link)


def glm_value_grad(inst: GlmInstance, w, i=None):
    """Mean squared link error and its gradient; ``i`` selects one row."""
    w = np.asarray(w, dtype=float)
    X = inst.X if i is None else inst.X[None, i]
    y = inst.y if i is None else inst.y[None, i]
    s, ds = link_value_deriv(inst.link, X @ w)
    r = s - y
    value = float(np.mean(r * r))
    grad = (2.0 * r * ds) @ X / X.shape[0]
    return value, grad


def save_glm(inst: GlmInstance, path):
    blob = {"kind": "glm", "link": inst.link.value, "X": inst.X.tolist(),
            "w_star": inst.w_star.tolist(), "y": inst.y.tolist()}
    with open(path, "w") as fh:
        json.dump(blob, fh)


def load_glm(path) -> GlmInstance:
    with open(path) as fh:
        blob = json.load(fh)
    if blob.get("kind") != "glm":
        raise InvalidArgumentError(f"{path} is not a GLM instance")
    return GlmInstance(np.asarray(blob["X"], dtype=float),
                       np.asarray(blob["w_star"], dtype=float),
                       np.asarray(blob["y"], dtype=float),
                       GlmLink(blob["link"]))


def glm_objective(inst: GlmInstance, smoothness_L=1.0) -> FiniteSumObjective:
    def comp_value(i, w):
        return glm_value_grad(inst, w, i)[0]

    def comp_grad(i, w):
        return glm_value_grad(inst, w, i)[1]

    def batch_value(idx, w):
        s, _ = link_value_deriv(inst.link, inst.X[idx] @ np.asarray(w, float))
        r = s - inst.y[idx]
        return float(np.mean(r * r))

    def batch_grad(idx, w):
        Xb = inst.X[idx]
        s, ds = link_value_deriv(inst.link, Xb @ np.asarray(w, float))
        r = s - inst.y[idx]
        return (2.0 * r * ds) @ Xb / len(idx)

    return FiniteSumObjective(inst.n, inst.d, comp_value, comp_grad,
                              smoothness_L=smoothness_L,
                              batch_value_fn=batch_value,
                              batch_grad_fn=batch_grad)
