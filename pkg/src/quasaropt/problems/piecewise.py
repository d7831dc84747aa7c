"""Piecewise quasar-convex finite sum with a tunable quasar parameter.

The scalar piece is

    g(x) = (x^gamma - 1)/gamma + 1/2   for x >= 1,
           x^2 / 2                     for 0 <= x <= 1,
           0                           for x <= 0,

continuously differentiable with derivative bounded by max(1, x^{gamma-1}) on
the data range; on unit-normalized rows the sum plus the (mu/2)||x||^2 ridge
has smoothness constant 1 + 0.5 mu.  The ridge makes the origin the unique
minimizer with all components zero there; without it a planted direction with
opposing labels gives a flat minimum at value zero.
"""

import json
from dataclasses import dataclass

import numpy as np

from ..errors import InvalidArgumentError
from ..oracle import FiniteSumObjective


def gq_value_grad(x, gamma):
    """Scalar piece value and derivative, vectorized over x."""
    if not 0 < gamma <= 1:
        raise InvalidArgumentError("gamma must lie in (0, 1]")
    x = np.asarray(x, dtype=float)
    val = np.where(x >= 1.0, (np.power(np.maximum(x, 1.0), gamma) - 1.0) / gamma + 0.5,
                   np.where(x > 0.0, 0.5 * x * x, 0.0))
    der = np.where(x >= 1.0, np.power(np.maximum(x, 1.0), gamma - 1.0),
                   np.where(x > 0.0, x, 0.0))
    if val.ndim == 0:
        return float(val), float(der)
    return val, der


@dataclass(frozen=True)
class PiecewiseQuasarInstance:
    a: np.ndarray         # (n, d), unit rows
    b_labels: np.ndarray  # (n,), +1/-1
    gamma: float
    mu: float
    x_star: np.ndarray | None = None  # known minimizer when available

    @property
    def n(self) -> int:
        return self.a.shape[0]

    @property
    def d(self) -> int:
        return self.a.shape[1]

    @property
    def smoothness_L(self) -> float:
        return 1.0 + 0.5 * self.mu


def generate_piecewise(n, d, gamma, mu, seed,
                       planted=True) -> PiecewiseQuasarInstance:
    """Unit-normalized standard-normal rows.

    ``planted`` chooses labels so a known point w (mu = 0) or the origin
    (mu > 0) zeroes every component; otherwise labels are random signs.
    """
    if n < 1 or d < 1:
        raise InvalidArgumentError("n and d must be positive")
    if mu < 0:
        raise InvalidArgumentError("mu must be nonnegative")
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n, d))
    a /= np.linalg.norm(a, axis=1, keepdims=True)
    if mu > 0:
        b = (rng.integers(0, 2, size=n) * 2 - 1).astype(float)
        return PiecewiseQuasarInstance(a, b, float(gamma), float(mu),
                                       x_star=np.zeros(d))
    if planted:
        w = rng.standard_normal(d)
        margins = a @ w
        b = -np.sign(margins)
        b[b == 0] = 1.0
        return PiecewiseQuasarInstance(a, b, float(gamma), 0.0, x_star=w)
    b = (rng.integers(0, 2, size=n) * 2 - 1).astype(float)
    return PiecewiseQuasarInstance(a, b, float(gamma), 0.0)


def save_piecewise(inst: PiecewiseQuasarInstance, path):
    blob = {"kind": "piecewise", "gamma": inst.gamma, "mu": inst.mu,
            "a": inst.a.tolist(), "b_labels": inst.b_labels.tolist(),
            "x_star": None if inst.x_star is None else inst.x_star.tolist()}
    with open(path, "w") as fh:
        json.dump(blob, fh)


def load_piecewise(path) -> PiecewiseQuasarInstance:
    with open(path) as fh:
        blob = json.load(fh)
    if blob.get("kind") != "piecewise":
        raise InvalidArgumentError(f"{path} is not a piecewise instance")
    x_star = blob.get("x_star")
    return PiecewiseQuasarInstance(
        np.asarray(blob["a"], dtype=float),
        np.asarray(blob["b_labels"], dtype=float),
        float(blob["gamma"]), float(blob["mu"]),
        None if x_star is None else np.asarray(x_star, dtype=float))


def piecewise_objective(inst: PiecewiseQuasarInstance,
                        auto_normalize=False) -> FiniteSumObjective:
    """Finite-sum oracle (1/n) sum g(b_i a_i^T x) + (mu/2)||x||^2.

    The ridge is folded into every component so each f_i keeps the same
    smoothness constant.
    """
    a, b, g, mu = inst.a, inst.b_labels, inst.gamma, inst.mu
    norms = np.linalg.norm(a, axis=1)
    if not np.allclose(norms, 1.0, atol=1e-12):
        if not auto_normalize:
            raise InvalidArgumentError(
                "rows must be unit-normalized (or pass auto_normalize=True)")
        a = a / norms[:, None]

    def margins(idx, x):
        return b[idx] * (a[idx] @ np.asarray(x, dtype=float))

    def comp_value(i, x):
        x = np.asarray(x, dtype=float)
        v, _ = gq_value_grad(float(b[i] * (a[i] @ x)), g)
        return v + 0.5 * mu * float(x @ x)

    def comp_grad(i, x):
        x = np.asarray(x, dtype=float)
        _, der = gq_value_grad(float(b[i] * (a[i] @ x)), g)
        return der * b[i] * a[i] + mu * x

    def batch_value(idx, x):
        x = np.asarray(x, dtype=float)
        v, _ = gq_value_grad(margins(idx, x), g)
        return float(np.mean(v)) + 0.5 * mu * float(x @ x)

    def batch_grad(idx, x):
        x = np.asarray(x, dtype=float)
        _, der = gq_value_grad(margins(idx, x), g)
        return (der * b[idx]) @ a[idx] / len(idx) + mu * x

    return FiniteSumObjective(inst.n, inst.d, comp_value, comp_grad,
                              smoothness_L=inst.smoothness_L,
                              batch_value_fn=batch_value,
                              batch_grad_fn=batch_grad)
