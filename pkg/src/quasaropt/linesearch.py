"""Bisection search for the momentum weight tau.

The search operates on the 1-D restriction g(tau) = f(tau*y + (1-tau)*z) of a
smooth function along the segment z -> y and returns tau in [0, 1] satisfying
the slackened decrease condition

    c*g(tau) + tau*(g'(tau) - tau*p) <= c*g(1) + eps_tilde,

with p = b*||z - y||^2.  Exit order: accept the caller's guess (tested
against c*g(1) with no additive slack), then tau = 1, then tau = 0, and only
then bisect on [0, delta] with delta = 1 - g'(1)/(L*||z - y||^2), halving
toward whichever half keeps g below g(delta).

Evaluations are memoized per tau so the reported counts reflect distinct
oracle queries; the full gradient behind the last slope query is cached so a
caller can reuse it for the subsequent update steps at no extra cost.
"""

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import InvalidArgumentError, SearchFailureError


class ExitBranch(Enum):
    GUESS = "guess"
    ONE = "one"
    ZERO = "zero"
    SEARCH = "search"


@dataclass(frozen=True)
class BisearchSpec:
    """Search coefficients: quadratic slack b, decrease weight c, additive
    slack eps_tilde, and the smoothness constant L of the restricted function.
    """

    b: float = 0.0
    c: float = 0.0
    eps_tilde: float = 0.0
    L: float = 1.0
    guess: float | None = None
    max_iters: int = 200

    def __post_init__(self):
        if self.b < 0 or self.c < 0 or self.eps_tilde < 0:
            raise InvalidArgumentError("b, c, eps_tilde must be nonnegative")
        if self.b > 0 and self.eps_tilde > 0:
            raise InvalidArgumentError(
                "b and eps_tilde cannot both be positive")
        if self.L <= 0:
            raise InvalidArgumentError("L must be positive")
        if self.guess is not None and not 0 <= self.guess <= 1:
            raise InvalidArgumentError("guess must lie in [0, 1]")
        if self.max_iters < 1:
            raise InvalidArgumentError("max_iters must be positive")


@dataclass
class BisearchResult:
    tau: float
    fn_evals: int
    grad_evals: int
    exit_branch: ExitBranch


class SegmentRestriction:
    """1-D view g(t) = f(z + t*(y - z)) of a vector function.

    ``value_fn``/``grad_fn`` evaluate the underlying function (charging its
    counters); the last full gradient is cached by t so the search's final
    gradient can be reused for the coupling update.
    """

    def __init__(self, value_fn, grad_fn, y, z):
        self.y = np.asarray(y, dtype=float)
        self.z = np.asarray(z, dtype=float)
        self.direction = self.y - self.z
        self._value_fn = value_fn
        self._grad_fn = grad_fn
        self._grad_cache: tuple[float, np.ndarray] | None = None

    def point(self, t: float) -> np.ndarray:
        return self.z + t * self.direction

    def value(self, t: float) -> float:
        return float(self._value_fn(self.point(t)))

    def slope(self, t: float) -> float:
        g = np.asarray(self._grad_fn(self.point(t)), dtype=float)
        self._grad_cache = (t, g)
        return float(g @ self.direction)

    def gradient_at(self, t: float) -> np.ndarray:
        """Full gradient at the segment point t, reusing the slope cache."""
        if self._grad_cache is not None and self._grad_cache[0] == t:
            return self._grad_cache[1]
        self.slope(t)
        return self._grad_cache[1]


def eval_bound(spec: BisearchSpec, gap_sq: float) -> float | None:
    """Worst-case evaluation count for a search over a segment of squared
    length ``gap_sq``; None when both slack regimes are inactive.
    """
    limits = []
    if spec.b > 0:
        limits.append(2.0 * spec.L ** 3 / spec.b ** 3)
    if spec.eps_tilde > 0:
        limits.append(spec.L * gap_sq / (2.0 * spec.eps_tilde))
    if not limits:
        return None
    arg = (4.0 + spec.c) * min(limits)
    log2p = max(math.log2(arg), 1.0) if arg > 0 else 1.0
    return 6 + 3 * math.ceil(log2p)


def bisearch(restriction: SegmentRestriction, spec: BisearchSpec) -> BisearchResult:
    """Run the bisection momentum search on a segment restriction."""
    gap_sq = float(restriction.direction @ restriction.direction)
    if gap_sq == 0.0:
        return BisearchResult(1.0, 0, 0, ExitBranch.ONE)

    p = spec.b * gap_sq
    values: dict[float, float] = {}
    slopes: dict[float, float] = {}

    def g(t):
        if t not in values:
            values[t] = restriction.value(t)
        return values[t]

    def gprime(t):
        if t not in slopes:
            slopes[t] = restriction.slope(t)
        return slopes[t]

    def condition_lhs(t):
        return spec.c * g(t) + t * (gprime(t) - t * p)

    def result(tau, branch):
        return BisearchResult(tau, len(values), len(slopes), branch)

    if spec.guess is not None:
        if condition_lhs(spec.guess) <= spec.c * g(1.0):
            return result(spec.guess, ExitBranch.GUESS)
    if gprime(1.0) <= p + spec.eps_tilde:
        return result(1.0, ExitBranch.ONE)
    if spec.c == 0 or g(0.0) <= g(1.0) + spec.eps_tilde / spec.c:
        return result(0.0, ExitBranch.ZERO)

    delta = 1.0 - gprime(1.0) / (spec.L * gap_sq)
    delta = min(max(delta, 0.0), 1.0)
    g_delta = g(delta)
    rhs = spec.c * g(1.0) + spec.eps_tilde
    lo, hi, tau = 0.0, delta, delta
    for _ in range(spec.max_iters):
        if condition_lhs(tau) <= rhs:
            return result(tau, ExitBranch.SEARCH)
        tau = (lo + hi) / 2.0
        if g(tau) <= g_delta:
            hi = tau
        else:
            lo = tau
    raise SearchFailureError(
        "bisection did not terminate; smoothness constant L is likely too "
        "small for the searched function", best_tau=tau)
