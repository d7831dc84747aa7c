"""Experiment runner: configure a problem and a set of methods, run them over
seeds, and emit per-run traces, a summary table, and a plot script.

Config files are INI-style: a [problem] section (generator parameters or a
path to a saved instance), a [run] section (methods, seeds, horizon, output
directory), and optional [method.<name>] override sections.  Exit codes:
0 success, 1 check or runtime failure, 2 usage or config error.
"""

import argparse
import configparser
import csv
import io
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import problems
from .diagnostics import (check_bounded_gradient, check_kappa, check_quasar,
                          check_variance_bound, finite_diff_check,
                          render_reports)
from .errors import DivergenceError, ParseError, QuasarOptError
from .schedules import QuasarParams
from .solvers import Method, RunConfig, run_method

METHOD_NAMES = {m.value: m for m in Method}


class ProblemBundle:
    """Everything a run needs: objective factory, start point, constants."""

    def __init__(self, kind, make_objective, make_y0, dim, gamma, mu, L,
                 x_star, instance):
        self.kind = kind
        self.make_objective = make_objective
        self.make_y0 = make_y0
        self.dim = dim
        self.gamma = gamma
        self.mu = mu
        self.L = L
        self.x_star = x_star
        self.instance = instance


def _getfloat(sec, key, default=None):
    if key in sec:
        return float(sec[key])
    if default is None:
        raise ParseError(f"missing required key {key!r}")
    return default


def build_problem(cfg: configparser.ConfigParser) -> ProblemBundle:
    if "problem" not in cfg:
        raise ParseError("config needs a [problem] section")
    sec = cfg["problem"]
    kind = sec.get("kind")
    init_scale = float(sec.get("init_scale", 1.0))
    gamma = float(sec.get("gamma", 1.0))
    mu = float(sec.get("mu", 0.0))

    if kind == "piecewise":
        if "path" in sec:
            inst = problems.load_piecewise(sec["path"])
        else:
            inst = problems.generate_piecewise(
                int(sec.get("n", 200)), int(sec.get("d", 4)),
                gamma, mu, int(sec.get("seed", 0)))
        make_obj = lambda: problems.piecewise_objective(inst)

        def make_y0(seed):
            rng = np.random.default_rng(seed)
            return init_scale * rng.standard_normal(inst.d)

        return ProblemBundle(kind, make_obj, make_y0, inst.d, inst.gamma,
                             inst.mu, inst.smoothness_L, inst.x_star, inst)

    if kind == "glm":
        link = problems.GlmLink(sec.get("link", "logistic"))
        if "path" in sec:
            inst = problems.load_glm(sec["path"])
        else:
            inst = problems.generate_glm(int(sec.get("n", 200)),
                                         int(sec.get("d", 10)), link,
                                         int(sec.get("seed", 0)))
        L = _getfloat(sec, "L", 1.0)
        make_obj = lambda: problems.glm_objective(inst, smoothness_L=L)

        def make_y0(seed):
            rng = np.random.default_rng(seed)
            return init_scale * rng.standard_normal(inst.d)

        return ProblemBundle(kind, make_obj, make_y0, inst.d, gamma, mu, L,
                             inst.w_star, inst)

    if kind == "lds":
        if "path" in sec:
            inst = problems.load_lds(sec["path"])
        else:
            inst = problems.generate_lds(
                int(sec.get("N", 100)), int(sec.get("d", 3)),
                int(sec.get("T", 32)), float(sec.get("noise", 0.0)),
                int(sec.get("seed", 0)))
        L = _getfloat(sec, "L", 1.0)
        make_obj = lambda: problems.lds_objective(inst)
        x_star = (inst.true_params().flatten()
                  if inst.noise_std == 0 else None)

        def make_y0(seed):
            return problems.perturbed_init(inst, init_scale, seed).flatten()

        return ProblemBundle(kind, make_obj, make_y0, inst.dim, gamma, mu, L,
                             x_star, inst)

    if kind == "csv":
        X, labels = problems.load_csv(sec["path"],
                                      int(sec.get("label_column", -1)))
        norms = np.linalg.norm(X, axis=1)
        if np.any(norms == 0):
            raise ParseError("zero feature row cannot be normalized")
        inst = problems.PiecewiseQuasarInstance(
            X / norms[:, None], labels, gamma, mu,
            x_star=np.zeros(X.shape[1]) if mu > 0 else None)
        make_obj = lambda: problems.piecewise_objective(inst)

        def make_y0(seed):
            rng = np.random.default_rng(seed)
            return init_scale * rng.standard_normal(inst.d)

        return ProblemBundle(kind, make_obj, make_y0, inst.d, gamma, mu,
                             inst.smoothness_L, inst.x_star, inst)

    raise ParseError(f"unknown problem kind {kind!r}")


def build_run_configs(cfg: configparser.ConfigParser, bundle: ProblemBundle):
    if "run" not in cfg:
        raise ParseError("config needs a [run] section")
    run = cfg["run"]
    methods = [m.strip() for m in run.get("methods", "qagd").split(",")]
    seeds = [int(s) for s in run.get("seeds", "0").split(",")]
    out_dir = run.get("output_dir", "results")
    mu_bar = float(run.get("mu_bar", 1.0))

    configs = {}
    for name in methods:
        if name not in METHOD_NAMES:
            raise ParseError(f"unknown method {name!r}")
        over = cfg[f"method.{name}"] if f"method.{name}" in cfg else {}
        method = METHOD_NAMES[name]
        mu = float(over.get("mu", bundle.mu))
        qp = QuasarParams(float(over.get("gamma", bundle.gamma)), mu, mu_bar,
                          float(over.get("L", bundle.L)))
        kwargs = dict(
            method=method, qp=qp,
            eps=float(over.get("eps", run.get("eps", 1e-3))),
            horizon=int(over.get("horizon", run.get("horizon", 1000))),
            q=float(over.get("q", run.get("q", 0.25))),
            sigma=float(over.get("sigma", run.get("sigma", 1.0))),
            R=float(over.get("R", run.get("R", 1.0))),
            restart_heuristic=str(over.get(
                "restart", run.get("restart", "false"))).lower() == "true",
            trace_every=int(over.get("trace_every",
                                     run.get("trace_every", 1))),
        )
        if method is Method.QASVRG_II:
            default_p = qp.gamma * mu_bar / 16.0
            kwargs["p"] = float(over.get("p", run.get("p", default_p)))
        if "stepsize" in over:
            kwargs["sgd_stepsize"] = float(over["stepsize"])
        elif "stepsize" in run:
            kwargs["sgd_stepsize"] = float(run["stepsize"])
        if "stage_budget" in over:
            kwargs["stage_budget"] = int(over["stage_budget"])
        configs[name] = (kwargs, seeds)
    return configs, seeds, out_dir


def _atomic_write(path, text):
    tmp = path + ".tmp"
    with open(tmp, "w", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _one_run(bundle, name, kwargs, seed):
    f = bundle.make_objective()
    y0 = bundle.make_y0(seed)
    status = "ok"
    trace = None
    try:
        cfg = RunConfig(seed=seed, **kwargs)
        _, trace = run_method(f, y0, cfg)
    except DivergenceError as exc:
        trace = exc.trace
        status = "diverged"
    except QuasarOptError as exc:
        status = f"error({exc})"
    buf = io.StringIO()
    if trace is not None and trace.records:
        trace.to_csv(buf)
        final = trace.final_value()
        fn_ev, gr_ev = trace.records[-1].fn_evals, trace.records[-1].grad_evals
    else:
        buf.write(",".join(
            ["stage", "k", "fval", "tau", "batch", "fn_evals", "grad_evals",
             "energy", "branch"]) + "\n")
        final, fn_ev, gr_ev = float("nan"), 0, 0
    return name, seed, status, final, fn_ev, gr_ev, buf.getvalue()


def _workers():
    env = os.environ.get("QUASAR_OPT_WORKERS")
    if env:
        return max(1, int(env))
    return 1


def cmd_run(path) -> int:
    cfg = configparser.ConfigParser()
    if not cfg.read(path):
        print(f"error: cannot read config {path}", file=sys.stderr)
        return 2
    try:
        bundle = build_problem(cfg)
        configs, seeds, out_dir = build_run_configs(cfg, bundle)
    except (QuasarOptError, ValueError, KeyError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    os.makedirs(out_dir, exist_ok=True)

    if bundle.x_star is not None:
        with bundle.make_objective().counters_paused() as probe:
            f_star = probe.value(bundle.x_star)
    else:
        f_star = 0.0

    tasks = [(name, kwargs, seed)
             for name, (kwargs, _) in configs.items() for seed in seeds]
    results = []
    with ThreadPoolExecutor(max_workers=_workers()) as pool:
        futures = [pool.submit(_one_run, bundle, name, kwargs, seed)
                   for name, kwargs, seed in tasks]
        for fut in futures:
            results.append(fut.result())

    by_method = {}
    for name, seed, status, final, fn_ev, gr_ev, text in results:
        _atomic_write(os.path.join(out_dir, f"trace_{name}_{seed}.csv"), text)
        by_method.setdefault(name, []).append((seed, status, final,
                                               fn_ev, gr_ev))

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["method", "runs", "gap_mean", "gap_min", "gap_max",
                "fn_evals_mean", "grad_evals_mean", "statuses"])
    for name in configs:
        rows = sorted(by_method[name])
        gaps = [r[2] - f_star for r in rows]
        w.writerow([name, len(rows),
                    repr(float(np.mean(gaps))), repr(float(np.min(gaps))),
                    repr(float(np.max(gaps))),
                    repr(float(np.mean([r[3] for r in rows]))),
                    repr(float(np.mean([r[4] for r in rows]))),
                    ";".join(r[1] for r in rows)])
    _atomic_write(os.path.join(out_dir, "summary.csv"), buf.getvalue())
    _atomic_write(os.path.join(out_dir, "plot.gp"),
                  _plot_script(list(configs), seeds))
    print(f"wrote {len(results)} traces + summary to {out_dir}")
    return 0


def _plot_script(methods, seeds) -> str:
    lines = [
        "set datafile separator ','",
        "set logscale y",
        "set key outside",
        "set term pngcairo size 1200,500",
        "set output 'gap.png'",
        "set multiplot layout 1,2",
        "set xlabel 'iteration'",
        "plot " + ", \\\n     ".join(
            f"'trace_{m}_{seeds[0]}.csv' using 2:3 with lines title '{m}'"
            for m in methods),
        "set xlabel 'oracle evaluations'",
        "plot " + ", \\\n     ".join(
            f"'trace_{m}_{seeds[0]}.csv' using ($6+$7):3 with lines title '{m}'"
            for m in methods),
        "unset multiplot",
    ]
    return "\n".join(lines) + "\n"


def cmd_check(path) -> int:
    cfg = configparser.ConfigParser()
    if not cfg.read(path):
        print(f"error: cannot read config {path}", file=sys.stderr)
        return 2
    try:
        bundle = build_problem(cfg)
    except (QuasarOptError, ValueError, KeyError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    check_sec = cfg["check"] if "check" in cfg else {}
    n_samples = int(check_sec.get("samples", 1000))
    box = float(check_sec.get("box", 5.0))
    seed = int(check_sec.get("seed", 0))
    f = bundle.make_objective()
    rng = np.random.default_rng(seed)
    reports, gating = [], []

    fd_tol = 1e-4 if bundle.kind in ("piecewise", "csv") else 1e-5
    pts = [rng.standard_normal(bundle.dim) for _ in range(5)]
    with f.counters_paused():
        rep = finite_diff_check(lambda x: f.value(x), lambda x: f.gradient(x),
                                pts, tol=fd_tol)
    reports.append(rep)
    gating.append(rep.passed)

    if bundle.x_star is not None:
        # [check] gamma overrides the instance's own grade, so a deliberately
        # wrong claim can be falsified against the same data
        claimed_gamma = float(check_sec.get("gamma", bundle.gamma))
        rep = check_quasar(f, bundle.x_star, claimed_gamma, bundle.mu,
                           sample_box=box, n_samples=n_samples, seed=seed)
        if bundle.kind == "lds":
            rep.name = "quasar_measured"
            reports.append(rep)
        else:
            reports.append(rep)
            gating.append(rep.passed)

        anchor = bundle.x_star + rng.standard_normal(bundle.dim)
        sample_pts = [bundle.x_star + rng.standard_normal(bundle.dim)
                      for _ in range(5)]
        rep = check_variance_bound(f, bundle.x_star, anchor,
                                   int(check_sec.get("b", 1)), sample_pts,
                                   seed=seed)
        reports.append(rep)
        gating.append(rep.passed)

        if "sigma" in check_sec:
            rep = check_bounded_gradient(f, bundle.x_star,
                                         float(check_sec["sigma"]), bundle.mu,
                                         sample_box=box,
                                         n_samples=min(n_samples, 200),
                                         seed=seed)
            reports.append(rep)
            gating.append(rep.passed)

    if bundle.mu > 0:
        qp = QuasarParams(bundle.gamma, bundle.mu,
                          float(check_sec.get("mu_bar", 1.0)), bundle.L)
        rep = check_kappa(qp)
        reports.append(rep)
        gating.append(rep.passed)

    print(render_reports(reports))
    return 0 if all(gating) else 1


def cmd_gen(args) -> int:
    try:
        if args.kind == "lds":
            inst = problems.generate_lds(args.N, args.d, args.T, args.noise,
                                         args.seed)
            problems.save_lds(inst, args.out)
        elif args.kind == "glm":
            inst = problems.generate_glm(args.n, args.d,
                                         problems.GlmLink(args.link),
                                         args.seed)
            problems.save_glm(inst, args.out)
        elif args.kind == "piecewise":
            inst = problems.generate_piecewise(args.n, args.d, args.gamma,
                                               args.mu, args.seed)
            problems.save_piecewise(inst, args.out)
        else:
            print(f"unknown kind {args.kind!r}", file=sys.stderr)
            return 2
    except QuasarOptError as exc:
        print(f"generation failed: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"cannot write {args.out}: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {args.kind} instance to {args.out}")
    return 0


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="quasar-opt",
                                 description="accelerated first-order methods "
                                 "for quasar-convex finite sums")
    sub = ap.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a configured experiment")
    run_p.add_argument("config")

    chk_p = sub.add_parser("check", help="run diagnostics on the problem")
    chk_p.add_argument("config")

    gen_p = sub.add_parser("gen", help="generate and save a problem instance")
    gen_sub = gen_p.add_subparsers(dest="kind", required=True)

    lds_p = gen_sub.add_parser("lds")
    lds_p.add_argument("--N", type=int, default=100)
    lds_p.add_argument("--d", type=int, default=3)
    lds_p.add_argument("--T", type=int, default=32)
    lds_p.add_argument("--noise", type=float, default=0.0)
    lds_p.add_argument("--seed", type=int, default=0)
    lds_p.add_argument("--out", default="lds.json")

    glm_p = gen_sub.add_parser("glm")
    glm_p.add_argument("--n", type=int, default=200)
    glm_p.add_argument("--d", type=int, default=10)
    glm_p.add_argument("--link", default="logistic")
    glm_p.add_argument("--seed", type=int, default=0)
    glm_p.add_argument("--out", default="glm.json")

    pw_p = gen_sub.add_parser("piecewise")
    pw_p.add_argument("--n", type=int, default=200)
    pw_p.add_argument("--d", type=int, default=4)
    pw_p.add_argument("--gamma", type=float, default=0.5)
    pw_p.add_argument("--mu", type=float, default=0.0)
    pw_p.add_argument("--seed", type=int, default=0)
    pw_p.add_argument("--out", default="piecewise.json")

    return ap


def main(argv=None) -> int:
    try:
        args = make_parser().parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    if args.command == "run":
        return cmd_run(args.config)
    if args.command == "check":
        return cmd_check(args.config)
    return cmd_gen(args)


if __name__ == "__main__":
    sys.exit(main())
