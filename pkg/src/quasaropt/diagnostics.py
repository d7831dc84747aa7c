"""Numeric certification of the structural assumptions the solvers rely on.

Every checker samples points, counts violations beyond a slack tolerance, and
returns a CheckReport.  Sampling can only falsify a property, never prove it;
a pass means no counterexample was found at the tested points.
"""

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import InvalidArgumentError
from .mirror import MirrorMap, bregman, euclidean_map
from .oracle import FiniteSumObjective
from .schedules import QuasarParams

ALGEBRA_SLACK = 1e-9


@dataclass
class CheckReport:
    name: str
    samples: int
    violations: int
    worst: float
    passed: bool
    details: dict = field(default_factory=dict)

    def summary_line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"CHECK {self.name} {status} worst={self.worst:.6g} n={self.samples}"


def _report(name, residuals, tol=ALGEBRA_SLACK, **details):
    """Residuals are violation magnitudes: positive means violated."""
    residuals = np.asarray(residuals, dtype=float)
    violations = int(np.sum(residuals > tol))
    worst = float(np.max(residuals)) if residuals.size else 0.0
    return CheckReport(name, int(residuals.size), violations, worst,
                       violations == 0, details)


def lyapunov_energy(A_k, B_k, f_yk, f_star, D_star_zk) -> float:
    """Weighted gap plus weighted divergence: A*(f(y)-f*) + B*D."""
    if A_k < 0 or B_k < 0:
        raise InvalidArgumentError("weights must be nonnegative")
    return A_k * (f_yk - f_star) + B_k * D_star_zk


def _sample_points(x_star, sample_box, n_samples, seed):
    rng = np.random.default_rng(seed)
    d = len(x_star)
    return x_star + rng.uniform(-sample_box, sample_box, size=(n_samples, d))


def check_quasar(f: FiniteSumObjective, x_star, gamma, mu,
                 h: MirrorMap | None = None, sample_box=10.0,
                 n_samples=10_000, seed=0) -> CheckReport:
    """Sampled test of quasar-convexity toward a known minimizer.

    mu = 0: f* >= f(x) + (1/gamma) <grad f(x), x* - x>.
    mu > 0: the same with + mu * D_h(x*, x); additionally reports the lower
    quadratic-growth residual f(x) >= f* + gamma*mu/(2-gamma) * D_h(x*, x)
    (details key "growth_worst", informative for non-Euclidean h).
    """
    h = h if h is not None else euclidean_map()
    x_star = np.asarray(x_star, dtype=float)
    pts = _sample_points(x_star, sample_box, n_samples, seed)
    with f.counters_paused():
        f_star = f.value(x_star)
        residuals = np.empty(len(pts))
        growth_worst = -math.inf
        for j, x in enumerate(pts):
            fx = f.value(x)
            gx = f.gradient(x)
            rhs = fx + (gx @ (x_star - x)) / gamma
            D = bregman(h, x_star, x) if mu > 0 else 0.0
            residuals[j] = (rhs + mu * D) - f_star
            if mu > 0:
                growth_worst = max(
                    growth_worst,
                    (f_star + gamma * mu / (2.0 - gamma) * D) - fx)
    details = {}
    if mu > 0:
        details["growth_worst"] = growth_worst
    return _report("quasar", residuals, **details)


def check_bounded_gradient(f: FiniteSumObjective, x_star, sigma, mu,
                           sample_box=10.0, n_samples=1000,
                           seed=0) -> CheckReport:
    """E_i ||grad f_i(x)||^2 <= sigma^2 + 2 mu^2 ||x* - x||^2 at samples."""
    x_star = np.asarray(x_star, dtype=float)
    pts = _sample_points(x_star, sample_box, n_samples, seed)
    residuals = np.empty(len(pts))
    with f.counters_paused():
        for j, x in enumerate(pts):
            m2 = np.mean([float(np.sum(f.component_grad(i, x) ** 2))
                          for i in range(f.n)])
            diff = x_star - x
            residuals[j] = m2 - (sigma ** 2 + 2.0 * mu ** 2 * float(diff @ diff))
    return _report("bounded_gradient", residuals)


def _variance_without_replacement(grads_x, grads_anchor, full_grad_x,
                                  anchor_full, b, max_terms=10_000, seed=0):
    """Exact (or Monte-Carlo for huge index sets) expectation over size-b
    without-replacement batches of ||estimate - grad f(x)||^2.

    Recomputed from raw component gradients, independently of the estimator
    module.
    """
    n = len(grads_x)
    xi = grads_x - grads_anchor                     # per-component correction
    xi_bar = xi.mean(axis=0)
    # estimate - grad f(x) = (mean_I xi) + anchor_full - grad f(x)
    shift = anchor_full - full_grad_x
    if b == n:
        v = xi_bar + shift
        return float(v @ v), True
    n_batches = math.comb(n, b)
    if n_batches <= max_terms:
        total = 0.0
        for idx in combinations(range(n), b):
            v = xi[list(idx)].mean(axis=0) + shift
            total += float(v @ v)
        return total / n_batches, True
    # identity route: E||mean_I xi - xi_bar||^2 = (n-b)/(b(n-1)) * mean_i
    # ||xi_i - xi_bar||^2 for uniform without-replacement batches; exact, so
    # no Monte-Carlo error despite skipping enumeration
    dev = xi - xi_bar
    var1 = float(np.mean(np.sum(dev * dev, axis=1)))
    center = xi_bar + shift
    return (n - b) / (b * (n - 1)) * var1 + float(center @ center), True


def check_variance_bound(f: FiniteSumObjective, x_star, anchor, b,
                         sample_points, seed=0) -> CheckReport:
    """Variance of the anchored estimator against its theoretical bound.

    For each sampled x: exact expectation over size-b without-replacement
    batches of ||estimate - grad f(x)||^2, compared to
    4 L (n-b)/(b(n-1)) * (f(x) - f* + f(anchor) - f*).
    """
    anchor = np.asarray(anchor, dtype=float)
    x_star = np.asarray(x_star, dtype=float)
    n, L = f.n, f.smoothness_L
    residuals = []
    with f.counters_paused():
        f_star = f.value(x_star)
        f_anchor = f.value(anchor)
        grads_anchor = np.stack([f.component_grad(i, anchor) for i in range(n)])
        anchor_full = grads_anchor.mean(axis=0)
        for x in sample_points:
            x = np.asarray(x, dtype=float)
            grads_x = np.stack([f.component_grad(i, x) for i in range(n)])
            full_x = grads_x.mean(axis=0)
            lhs, _ = _variance_without_replacement(
                grads_x, grads_anchor, full_x, anchor_full, b, seed=seed)
            if b == n:
                rhs = 0.0
            else:
                rhs = (4.0 * L * (n - b) / (b * (n - 1))
                       * (f.value(x) - f_star + f_anchor - f_star))
            residuals.append(lhs - rhs)
    return _report("variance_bound", residuals)


def check_kappa(qp: QuasarParams) -> CheckReport:
    """Condition-number floor kappa >= gamma/(2-gamma) for mu > 0."""
    if qp.mu == 0:
        return CheckReport("kappa_floor", 0, 0, 0.0, True,
                           {"applicable": False})
    floor = qp.gamma / (2.0 - qp.gamma)
    residual = floor - qp.kappa
    return _report("kappa_floor", [residual], applicable=True,
                   kappa=qp.kappa, floor=floor)


def finite_diff_check(value_fn, grad_fn, points, step=1e-6,
                      tol=1e-5) -> CheckReport:
    """Central differences vs the analytic gradient; max relative error."""
    if step <= 0:
        raise InvalidArgumentError("step must be positive")
    residuals = []
    for x in points:
        x = np.asarray(x, dtype=float)
        g = np.asarray(grad_fn(x), dtype=float)
        num = np.empty_like(g)
        for j in range(len(x)):
            e = np.zeros_like(x)
            e[j] = step
            num[j] = (value_fn(x + e) - value_fn(x - e)) / (2.0 * step)
        scale = max(1.0, float(np.linalg.norm(g)))
        residuals.append(float(np.linalg.norm(num - g)) / scale)
    return _report("finite_diff", residuals, tol=tol)


def compactness_monitor(trace, radius) -> CheckReport:
    """Did every iterate stay inside the max-norm ball of the given radius?"""
    peak = trace.max_iterate_norm
    return _report("compactness", [peak - radius], tol=0.0,
                   max_norm=peak, radius=radius)


def render_reports(reports) -> str:
    blocks = []
    for r in reports:
        lines = [r.summary_line(),
                 f"  samples={r.samples} violations={r.violations}"]
        for key, val in r.details.items():
            lines.append(f"  {key}={val}")
        blocks.append("\n".join(lines))
    return "\n".join(blocks)
