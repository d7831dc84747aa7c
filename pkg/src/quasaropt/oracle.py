"""Finite-sum objectives and the three gradient estimators.

f(x) = (1/n) sum_i f_i(x).  Evaluation counters are component-weighted: one
full pass over the sum counts n, a single component counts 1.  Counters can
be paused for instrumentation (trace objective values, diagnostics) so that
recorded totals reflect only the work an algorithm actually performs.
"""

from contextlib import contextmanager
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError
from .vectors import as_vector


class Sampler:
    """Seeded index stream; identical seeds reproduce identical sequences."""

    def __init__(self, seed: int):
        self.seed = int(seed)
        self.rng = np.random.default_rng(self.seed)

    def index(self, n: int) -> int:
        return int(self.rng.integers(n))

    def batch(self, n: int, b: int) -> np.ndarray:
        return sample_batch(n, b, self)


class FiniteSumObjective:
    """Oracle for f = (1/n) sum f_i with per-component access and counters.

    ``component_value(i, x)`` / ``component_grad(i, x)`` evaluate a single
    component; ``batch_value_fn`` / ``batch_grad_fn`` (optional, vectorized
    over an index array) are fast paths used for full and mini-batch
    evaluation.  ``smoothness_L`` is max_i L_i when known, otherwise a user
    estimate.
    """

    def __init__(self, n, dim, component_value, component_grad, smoothness_L,
                 batch_value_fn=None, batch_grad_fn=None):
        if n < 1 or dim < 1:
            raise InvalidArgumentError("n and dim must be positive")
        if smoothness_L <= 0:
            raise InvalidArgumentError("smoothness_L must be positive")
        self.n = int(n)
        self.dim = int(dim)
        self.smoothness_L = float(smoothness_L)
        self._component_value = component_value
        self._component_grad = component_grad
        self._batch_value = batch_value_fn
        self._batch_grad = batch_grad_fn
        self.fn_evals = 0
        self.grad_evals = 0
        self._paused = False

    @contextmanager
    def counters_paused(self):
        """Evaluate without charging the evaluation counters."""
        prev = self._paused
        self._paused = True
        try:
            yield self
        finally:
            self._paused = prev

    def _charge(self, fn=0, grad=0):
        if not self._paused:
            self.fn_evals += fn
            self.grad_evals += grad

    def component_value(self, i, x) -> float:
        self._charge(fn=1)
        return float(self._component_value(i, x))

    def component_grad(self, i, x) -> np.ndarray:
        self._charge(grad=1)
        return np.asarray(self._component_grad(i, x), dtype=float)

    def batch_value(self, idx, x) -> float:
        """Mean of f_i over the index multiset ``idx``."""
        idx = np.asarray(idx)
        self._charge(fn=len(idx))
        if self._batch_value is not None:
            return float(self._batch_value(idx, x))
        return float(np.mean([self._component_value(i, x) for i in idx]))

    def batch_grad(self, idx, x) -> np.ndarray:
        """Mean of grad f_i over the index multiset ``idx``."""
        idx = np.asarray(idx)
        self._charge(grad=len(idx))
        if self._batch_grad is not None:
            return np.asarray(self._batch_grad(idx, x), dtype=float)
        g = np.zeros(self.dim)
        for i in idx:
            g += np.asarray(self._component_grad(i, x), dtype=float)
        return g / len(idx)

    def value(self, x) -> float:
        return self.batch_value(np.arange(self.n), x)

    def gradient(self, x) -> np.ndarray:
        return self.batch_grad(np.arange(self.n), x)


@dataclass(frozen=True)
class SvrgAnchor:
    """Per-stage anchor: fixed point, its full gradient and objective value."""

    point: np.ndarray
    full_grad: np.ndarray
    value: float


def make_anchor(f: FiniteSumObjective, x) -> SvrgAnchor:
    """One full value + gradient pass at the anchor point (counts 2n)."""
    x = as_vector(x, f.dim)
    return SvrgAnchor(point=x, full_grad=f.gradient(x), value=f.value(x))


def full_gradient(f: FiniteSumObjective, x) -> np.ndarray:
    """(1/n) sum_i grad f_i(x); counts n gradient evaluations."""
    return f.gradient(x)


def stochastic_gradient(f: FiniteSumObjective, x, s: Sampler):
    """grad f_i(x) at a uniformly sampled index i; returns (gradient, i)."""
    i = s.index(f.n)
    return f.component_grad(i, x), i


def sample_batch(n: int, b: int, s: Sampler) -> np.ndarray:
    """b indices i.i.d. uniform on [n] (with replacement)."""
    if b < 1 or b > n:
        raise InvalidArgumentError(f"batch size {b} outside [1, {n}]")
    return s.rng.integers(n, size=b)


def svrg_estimate(f: FiniteSumObjective, x, anchor: SvrgAnchor, batch) -> np.ndarray:
    """Variance-reduced estimate over ``batch`` anchored at ``anchor``.

    (1/b) sum_{i in batch} [grad f_i(x) - grad f_i(anchor)] + anchor full
    gradient; costs 2b component-gradient evaluations.
    """
    batch = np.asarray(batch)
    if batch.size == 0:
        raise InvalidArgumentError("batch must be nonempty")
    g_x = f.batch_grad(batch, x)
    g_anchor = f.batch_grad(batch, anchor.point)
    return g_x - g_anchor + anchor.full_grad
