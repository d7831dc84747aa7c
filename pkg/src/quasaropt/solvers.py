"""The unified accelerated iteration, its multi-stage variance-reduced
driver, and plain gradient baselines.

One iteration: search the momentum weight tau on the segment z_k -> y_k,
couple x_{k+1} = (1-tau) z_k + tau y_k, estimate the gradient at x_{k+1}
(reusing the search's final gradient, which lands exactly there), then take a
mirror step for z_{k+1} and a gradient step for y_{k+1}.  The gradient
estimate is drawn once per iteration and shared between the search and the
updates, so evaluation counters reflect the intended oracle complexity.
"""

import csv
import math
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .errors import DivergenceError, InvalidArgumentError
from .linesearch import BisearchSpec, SegmentRestriction, bisearch
from .mirror import MirrorMap, bregman, euclidean_map, gd_step, mirror_step
from .oracle import FiniteSumObjective, Sampler, make_anchor
from .schedules import (QasgdPhase, QuasarParams, SvrgOption, params_qagd,
                        params_qasgd, params_qasgd_sgc, params_qasvrg,
                        qasgd_eta, stage_length)

DIVERGENCE_FACTOR = 1e12

TRACE_HEADER = ["stage", "k", "fval", "tau", "batch",
                "fn_evals", "grad_evals", "energy", "branch"]


class Method(Enum):
    QAGD = "qagd"
    QASGD = "qasgd"
    QASVRG_I = "qasvrg_i"
    QASVRG_II = "qasvrg_ii"
    QASGD_SGC = "qasgd_sgc"
    GD = "gd"
    SGD = "sgd"


@dataclass(frozen=True)
class RunConfig:
    method: Method
    qp: QuasarParams
    eps: float = 1e-3
    horizon: int = 1000
    q: float = 0.25
    p: float | None = None
    seed: int = 0
    sigma: float = 1.0
    R: float = 1.0
    sgd_stepsize: float | None = None
    restart_heuristic: bool = False
    energy_tracking: bool = False
    x_star: np.ndarray | None = None
    mirror: MirrorMap = field(default_factory=euclidean_map)
    eta_preset: str = "theory"
    rho_sgc: float = 1.0
    stage_budget: int | None = None
    step1_iters: int | None = None
    trace_every: int = 1

    def __post_init__(self):
        if self.method in (Method.QASVRG_I, Method.QASVRG_II):
            if not 0 < self.q <= 0.25:
                raise InvalidArgumentError("q must lie in (0, 1/4]")
            if self.method is Method.QASVRG_II:
                cap = self.qp.gamma * self.qp.mu_bar / 16.0
                if self.p is None or not 0 < self.p <= cap + 1e-15:
                    raise InvalidArgumentError(
                        f"need 0 < p <= gamma*mu_bar/16 = {cap:.6g}")
        if self.energy_tracking and self.x_star is None:
            raise InvalidArgumentError("energy tracking needs x_star")


@dataclass
class TraceRecord:
    stage: int
    k: int
    fval: float
    tau: float | None
    batch: int
    fn_evals: int
    grad_evals: int
    energy: float | None
    branch: str


class Trace:
    """Per-iteration records plus terminal status and an iterate-norm peak."""

    def __init__(self):
        self.records: list[TraceRecord] = []
        self.status = "ok"
        self.max_iterate_norm = 0.0

    def append(self, rec: TraceRecord):
        self.records.append(rec)

    def note_iterates(self, *points):
        for pt in points:
            self.max_iterate_norm = max(
                self.max_iterate_norm, float(np.max(np.abs(pt))))

    def to_csv(self, fh):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRACE_HEADER)
        for r in self.records:
            w.writerow([
                r.stage, r.k, repr(r.fval),
                "" if r.tau is None else repr(r.tau),
                r.batch, r.fn_evals, r.grad_evals,
                "" if r.energy is None else repr(r.energy), r.branch])

    def final_value(self) -> float:
        if not self.records:
            raise InvalidArgumentError("empty trace")
        return self.records[-1].fval


def _instrument(f: FiniteSumObjective, cfg: RunConfig, y, z, A, B):
    """Objective value (and energy when tracked) without charging counters."""
    with f.counters_paused():
        fval = f.value(y)
        energy = None
        if cfg.energy_tracking:
            f_star = f.value(cfg.x_star)
            energy = A * (fval - f_star) + B * bregman(cfg.mirror, cfg.x_star, z)
    return fval, energy


def accelerated_loop(f: FiniteSumObjective, estimator: str, schedule, y0,
                     horizon: int, cfg: RunConfig, trace: Trace | None = None,
                     sampler: Sampler | None = None, anchor=None,
                     stage: int = 0, f_ref: float | None = None):
    """Run ``horizon`` iterations of the accelerated scheme.

    ``estimator`` is "full", "single" or "svrg" (the latter needs ``anchor``);
    ``schedule`` maps k to a StepParams.  Returns (y_final, trace); a shared
    ``trace``/``sampler`` lets the multi-stage driver stitch stages together.
    """
    if estimator not in ("full", "single", "svrg"):
        raise InvalidArgumentError(f"unknown estimator {estimator!r}")
    if estimator == "svrg" and anchor is None:
        raise InvalidArgumentError("svrg estimator needs an anchor")
    y = np.array(y0, dtype=float)
    x, z = y.copy(), y.copy()
    trace = trace if trace is not None else Trace()
    sampler = sampler if sampler is not None else Sampler(cfg.seed)
    trace.note_iterates(y)
    if f_ref is None:
        with f.counters_paused():
            f_ref = max(1.0, abs(f.value(y)))
    prev_tau = None

    for k in range(horizon):
        sp = schedule(k)
        if estimator == "full":
            value_fn, grad_fn = f.value, f.gradient
            batch_used = f.n
        elif estimator == "single":
            i = sampler.index(f.n)
            value_fn = lambda pt, i=i: f.component_value(i, pt)
            grad_fn = lambda pt, i=i: f.component_grad(i, pt)
            batch_used = 1
        else:
            idx = sampler.batch(f.n, sp.batch_size)
            value_fn = lambda pt, idx=idx: f.batch_value(idx, pt)
            grad_fn = lambda pt, idx=idx: f.batch_grad(idx, pt)
            batch_used = sp.batch_size

        # the search sees the sampled function itself; its final gradient at
        # x_{k+1} is reused below, with the anchor correction added for the
        # variance-reduced estimate
        restriction = SegmentRestriction(value_fn, grad_fn, y, z)
        ls = BisearchSpec(b=sp.b, c=sp.c, eps_tilde=sp.eps_tilde, L=cfg.qp.L,
                          guess=prev_tau)
        res = bisearch(restriction, ls)
        tau = res.tau
        prev_tau = tau
        x = restriction.point(tau)
        grad_k = restriction.gradient_at(tau)
        if estimator == "svrg":
            grad_k = grad_k - f.batch_grad(idx, anchor.point) + anchor.full_grad
        z = mirror_step(cfg.mirror, z, x, grad_k, sp.alpha_k, sp.beta_k)
        y_prev = y
        y = gd_step(x, grad_k, sp.rho_k)
        trace.note_iterates(x, y, z)

        record_now = (k % cfg.trace_every == 0) or k == horizon - 1
        broke = cfg.restart_heuristic and float(grad_k @ (y - y_prev)) > 0
        if record_now or broke:
            fval, energy = _instrument(f, cfg, y, z, sp.A_next, sp.B_next)
            trace.append(TraceRecord(stage, k, fval, tau, batch_used,
                                     f.fn_evals, f.grad_evals, energy,
                                     res.exit_branch.value))
            if not math.isfinite(fval) or fval > DIVERGENCE_FACTOR * f_ref:
                trace.status = "diverged"
                raise DivergenceError(
                    f"objective blew up at stage {stage} iteration {k}",
                    trace=trace)
        if broke:
            trace.status = "restart"
            break
    return y, trace


def run_qagd(f, y0, cfg: RunConfig):
    sched = lambda k: params_qagd(k, cfg.qp, cfg.eps)
    return accelerated_loop(f, "full", sched, y0, cfg.horizon, cfg)


def run_qasgd_sgc(f, y0, cfg: RunConfig):
    sched = lambda k: params_qasgd_sgc(k, cfg.qp, cfg.rho_sgc, cfg.eps)
    return accelerated_loop(f, "full", sched, y0, cfg.horizon, cfg)


def run_qasgd(f, y0, cfg: RunConfig):
    """Single-sample stochastic run.

    mu = 0: one plain phase with the quadratic-weight scale frozen for the
    whole horizon.  mu > 0: a geometric warmup phase followed by a restarted
    polynomial phase (iteration split configurable, default half/half).
    """
    qp = cfg.qp
    if qp.mu == 0:
        if cfg.eta_preset == "practical":
            eta = qasgd_eta(qp, cfg.horizon, cfg.sigma, cfg.R,
                            preset="practical",
                            z0_norm=float(np.linalg.norm(y0)))
        else:
            eta = qasgd_eta(qp, cfg.horizon, cfg.sigma, cfg.R)
        sched = lambda k: params_qasgd(k, cfg.horizon, QasgdPhase.PLAIN, qp,
                                       cfg.sigma, cfg.R, cfg.eps, eta=eta)
        return accelerated_loop(f, "single", sched, y0, cfg.horizon, cfg)
    k1 = cfg.step1_iters if cfg.step1_iters is not None else cfg.horizon // 2
    k1 = min(k1, cfg.horizon)
    sched1 = lambda k: params_qasgd(k, cfg.horizon, QasgdPhase.STEP1, qp,
                                    cfg.sigma, cfg.R, cfg.eps)
    sampler = Sampler(cfg.seed)
    y, trace = accelerated_loop(f, "single", sched1, y0, k1, cfg,
                                sampler=sampler, stage=0)
    if cfg.horizon > k1:
        sched2 = lambda k: params_qasgd(k, cfg.horizon, QasgdPhase.STEP2, qp,
                                        cfg.sigma, cfg.R, cfg.eps)
        y, trace = accelerated_loop(f, "single", sched2, y, cfg.horizon - k1,
                                    cfg, trace=trace, sampler=sampler, stage=1)
    return y, trace


def multi_stage_qasvrg(f, option: SvrgOption, y0, cfg: RunConfig):
    """Restarted variance-reduced driver.

    Each stage anchors a fresh full gradient at the current point, derives
    its inner horizon (from the known minimizer when available, otherwise
    cfg.horizon), and feeds the stage-start value into the schedule.  Stops
    when the target relative accuracy is met, progress stalls, or the stage
    budget runs out.
    """
    qp = cfg.qp
    y = np.array(y0, dtype=float)
    trace = Trace()
    sampler = Sampler(cfg.seed)

    if cfg.stage_budget is not None:
        budget = cfg.stage_budget
    else:
        if option is SvrgOption.OPT_I:
            contraction = cfg.q + 0.5
        else:
            contraction = cfg.q + 8.0 * cfg.p / (qp.gamma * qp.mu_bar) + cfg.eps
        contraction = min(contraction, 0.999)
        budget = max(1, math.ceil(math.log(1.0 / cfg.eps)
                                  / abs(math.log(contraction))))
    with f.counters_paused():
        f_init = f.value(y)
    f_ref = max(1.0, abs(f_init))
    prev_val = math.inf

    for s in range(budget):
        anchor = make_anchor(f, y)
        if anchor.value <= cfg.eps * max(f_init, 0.0) + 1e-300:
            trace.status = "converged"
            break
        if anchor.value >= prev_val:
            trace.status = "stalled"
            break
        prev_val = anchor.value
        if cfg.x_star is not None and option is SvrgOption.OPT_II:
            D = bregman(cfg.mirror, cfg.x_star, y)
            horizon = stage_length(option, qp, cfg.q, D_current=D,
                                   f_current=anchor.value)
        elif option is SvrgOption.OPT_I:
            horizon = stage_length(option, qp, cfg.q)
        else:
            horizon = cfg.horizon
        sched = lambda k, fv=anchor.value: params_qasvrg(
            k, option, qp, f.n, cfg.p, fv, cfg.eps)
        y, trace = accelerated_loop(f, "svrg", sched, y, horizon, cfg,
                                    trace=trace, sampler=sampler,
                                    anchor=anchor, stage=s, f_ref=f_ref)
        if trace.status == "restart":
            trace.status = "ok"
    return y, trace


def _baseline(f, y0, stepsize, horizon, grad_fn, batch_of):
    if stepsize <= 0:
        raise InvalidArgumentError("stepsize must be positive")
    x = np.array(y0, dtype=float)
    trace = Trace()
    trace.note_iterates(x)
    with f.counters_paused():
        f_ref = max(1.0, abs(f.value(x)))
    for k in range(horizon):
        g = grad_fn(x)
        x = x - stepsize * g
        trace.note_iterates(x)
        with f.counters_paused():
            fval = f.value(x)
        trace.append(TraceRecord(0, k, fval, None, batch_of, f.fn_evals,
                                 f.grad_evals, None, "none"))
        if not math.isfinite(fval) or fval > DIVERGENCE_FACTOR * f_ref:
            trace.status = "diverged"
            raise DivergenceError(f"objective blew up at iteration {k}",
                                  trace=trace)
    return x, trace


def gd_baseline(f, y0, stepsize, horizon):
    return _baseline(f, y0, stepsize, horizon, f.gradient, f.n)


def sgd_baseline(f, y0, stepsize, horizon, seed):
    s = Sampler(seed)
    return _baseline(f, y0, stepsize, horizon,
                     lambda x: f.component_grad(s.index(f.n), x), 1)


def run_method(f: FiniteSumObjective, y0, cfg: RunConfig):
    """Dispatch a configured run; returns (final point, trace)."""
    if cfg.method is Method.QAGD:
        return run_qagd(f, y0, cfg)
    if cfg.method is Method.QASGD:
        return run_qasgd(f, y0, cfg)
    if cfg.method is Method.QASGD_SGC:
        return run_qasgd_sgc(f, y0, cfg)
    if cfg.method is Method.QASVRG_I:
        return multi_stage_qasvrg(f, SvrgOption.OPT_I, y0, cfg)
    if cfg.method is Method.QASVRG_II:
        return multi_stage_qasvrg(f, SvrgOption.OPT_II, y0, cfg)
    step = cfg.sgd_stepsize if cfg.sgd_stepsize is not None else 1.0 / cfg.qp.L
    if cfg.method is Method.GD:
        return gd_baseline(f, y0, step, cfg.horizon)
    if cfg.method is Method.SGD:
        return sgd_baseline(f, y0, step, cfg.horizon, cfg.seed)
    raise InvalidArgumentError(f"unknown method {cfg.method!r}")
