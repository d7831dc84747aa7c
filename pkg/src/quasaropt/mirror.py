"""Bregman geometry: mirror maps, divergences, and the two closed-form
update steps of the accelerated iteration.

A mirror map is a strongly convex distance generator h.  The mirror-descent
step minimizes

    <g, u - z> + beta * D_h(u, z) + alpha * D_h(u, x)

whose first-order condition is

    g + beta * (grad_h(u) - grad_h(z)) + alpha * (grad_h(u) - grad_h(x)) = 0,

solved in closed form through the inverse gradient map.  The gradient-descent
step is the Euclidean special case with a single proximal center.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import InvalidArgumentError
from .vectors import check_same_dim


@dataclass(frozen=True)
class MirrorMap:
    """Strongly convex distance generator h.

    ``inv_grad_h`` must be the functional inverse of ``grad_h``; it is a
    required field (rather than solved numerically) so the mirror step stays
    exact and cheap.  ``mu_bar`` is the strong-convexity constant of h.
    """

    value_h: Callable[[np.ndarray], float]
    grad_h: Callable[[np.ndarray], np.ndarray]
    inv_grad_h: Callable[[np.ndarray], np.ndarray]
    mu_bar: float

    def __post_init__(self):
        if self.mu_bar <= 0:
            raise InvalidArgumentError("mu_bar must be positive")


def euclidean_map() -> MirrorMap:
    """h(x) = ||x||^2 / 2; grad_h is the identity and mu_bar = 1."""
    return MirrorMap(
        value_h=lambda x: 0.5 * float(x @ x),
        grad_h=lambda x: x,
        inv_grad_h=lambda g: g,
        mu_bar=1.0,
    )


def diagonal_quadratic_map(weights) -> MirrorMap:
    """h(x) = sum_j w_j x_j^2 / 2 with positive weights; mu_bar = min w_j."""
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or np.any(w <= 0):
        raise InvalidArgumentError("weights must be a 1-D positive vector")
    return MirrorMap(
        value_h=lambda x: 0.5 * float(w @ (x * x)),
        grad_h=lambda x: w * x,
        inv_grad_h=lambda g: g / w,
        mu_bar=float(w.min()),
    )


def bregman(h: MirrorMap, x: np.ndarray, y: np.ndarray) -> float:
    """D_h(x, y) = h(x) - h(y) - <grad_h(y), x - y>."""
    check_same_dim(x, y)
    return float(h.value_h(x) - h.value_h(y) - h.grad_h(y) @ (x - y))


def mirror_step(h: MirrorMap, z: np.ndarray, x_next: np.ndarray,
                grad: np.ndarray, alpha: float, beta: float) -> np.ndarray:
    """Closed-form minimizer of the two-center mirror objective.

    Returns inv_grad_h((beta*grad_h(z) + alpha*grad_h(x_next) - grad)
    / (beta + alpha)).
    """
    if beta <= 0:
        raise InvalidArgumentError("beta must be positive")
    if alpha < 0:
        raise InvalidArgumentError("alpha must be nonnegative")
    check_same_dim(z, x_next, grad)
    dual = beta * h.grad_h(z) - grad
    if alpha > 0:
        dual = dual + alpha * h.grad_h(x_next)
    return h.inv_grad_h(dual / (beta + alpha))


def gd_step(x_next: np.ndarray, grad: np.ndarray, rho: float) -> np.ndarray:
    """Euclidean gradient step x_next - rho * grad (rho may be 0)."""
    if rho < 0:
        raise InvalidArgumentError("rho must be nonnegative")
    check_same_dim(x_next, grad)
    if rho == 0:
        return x_next
    return x_next - rho * grad
