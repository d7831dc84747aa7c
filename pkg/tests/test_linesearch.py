import numpy as np
import pytest

from quasaropt.errors import InvalidArgumentError, SearchFailureError
from quasaropt.linesearch import (BisearchSpec, ExitBranch,
                                  SegmentRestriction, bisearch, eval_bound)


def quad_restriction(center, scale, y, z):
    """1-D quadratic scale*(x-center)^2 along a segment; L = 2*scale."""
    value = lambda v: scale * float((v[0] - center) ** 2)
    grad = lambda v: np.array([2.0 * scale * (v[0] - center)])
    return SegmentRestriction(value, grad, np.array([float(y)]),
                              np.array([float(z)]))


def satisfies_condition(r, spec, tau, slack=1e-9):
    p = spec.b * float(r.direction @ r.direction)
    g_tau, g1 = r.value(tau), r.value(1.0)
    slope = float(np.asarray(r.gradient_at(tau)) @ r.direction)
    return (spec.c * g_tau + tau * (slope - tau * p)
            <= spec.c * g1 + spec.eps_tilde + slack)


def test_spec_validation():
    with pytest.raises(InvalidArgumentError):
        BisearchSpec(b=1.0, eps_tilde=1.0)
    with pytest.raises(InvalidArgumentError):
        BisearchSpec(b=-1.0)
    with pytest.raises(InvalidArgumentError):
        BisearchSpec(L=0.0)
    with pytest.raises(InvalidArgumentError):
        BisearchSpec(guess=1.5)


def test_coincident_endpoints_return_one():
    r = quad_restriction(0.0, 1.0, 2.0, 2.0)
    res = bisearch(r, BisearchSpec(L=2.0))
    assert res.tau == 1.0
    assert res.fn_evals == 0 and res.grad_evals == 0


def test_returns_one_when_slope_at_one_nonpositive():
    # minimum beyond y: g decreasing on [0,1]
    r = quad_restriction(5.0, 1.0, 2.0, 0.0)
    res = bisearch(r, BisearchSpec(L=2.0, c=1.0, eps_tilde=1e-6))
    assert res.tau == 1.0
    assert res.exit_branch is ExitBranch.ONE


def test_returns_zero_when_c_zero_and_slope_positive():
    # minimum behind z: g increasing
    r = quad_restriction(-5.0, 1.0, 2.0, 0.0)
    res = bisearch(r, BisearchSpec(L=2.0, c=0.0))
    assert res.tau == 0.0
    assert res.exit_branch is ExitBranch.ZERO


def test_accepted_guess_short_circuits():
    r = quad_restriction(5.0, 1.0, 2.0, 0.0)
    res = bisearch(r, BisearchSpec(L=2.0, c=1.0, eps_tilde=1e-6, guess=1.0))
    assert res.exit_branch is ExitBranch.GUESS
    assert res.tau == 1.0


def test_search_branch_finds_valid_tau():
    # interior minimum forces actual bisection
    r = quad_restriction(0.7, 2.0, 1.0, 0.0)
    spec = BisearchSpec(L=4.0, c=3.0, eps_tilde=1e-8)
    res = bisearch(r, spec)
    assert res.exit_branch is ExitBranch.SEARCH
    assert 0.0 <= res.tau <= 1.0
    assert satisfies_condition(r, spec, res.tau)


def test_result_satisfies_condition_randomized():
    rng = np.random.default_rng(42)
    for _ in range(200):
        center = rng.uniform(-2, 2)
        scale = rng.uniform(0.5, 3.0)
        z, y = sorted(rng.uniform(-3, 3, size=2))
        if abs(y - z) < 1e-6:
            continue
        r = quad_restriction(center, scale, y, z)
        if rng.random() < 0.5:
            spec = BisearchSpec(L=2 * scale, c=float(rng.uniform(0, 5)),
                                eps_tilde=float(rng.uniform(1e-10, 1e-2)))
        else:
            spec = BisearchSpec(L=2 * scale, c=float(rng.uniform(0, 5)),
                                b=float(rng.uniform(1e-4, scale)))
        res = bisearch(r, spec)
        assert satisfies_condition(r, spec, res.tau)


def test_eval_bound_regimes():
    # quadratic-slack regime only
    s1 = BisearchSpec(b=0.5, c=1.0, L=2.0)
    assert eval_bound(s1, 1.0) == 6 + 3 * np.ceil(
        max(np.log2((4 + 1) * 2 * 8 / 0.125), 1))
    # additive-slack regime only
    s2 = BisearchSpec(eps_tilde=0.01, c=0.0, L=2.0)
    assert eval_bound(s2, 4.0) == 6 + 3 * np.ceil(
        max(np.log2(4 * 2 * 4 / 0.02), 1))
    # neither: bound inapplicable
    assert eval_bound(BisearchSpec(L=1.0), 1.0) is None


def test_search_failure_reports_best_tau():
    # L far too small: bisection interval collapses, condition never met
    r = quad_restriction(0.7, 2.0, 1.0, 0.0)
    with pytest.raises(SearchFailureError) as exc:
        bisearch(r, BisearchSpec(L=0.05, c=3.0, eps_tilde=1e-14, max_iters=20))
    assert 0.0 <= exc.value.best_tau <= 1.0


def test_memoized_eval_counts():
    r = quad_restriction(5.0, 1.0, 2.0, 0.0)
    res = bisearch(r, BisearchSpec(L=2.0, c=1.0, eps_tilde=1e-6))
    # branch ONE needs a single slope query and nothing else
    assert res.grad_evals == 1
    assert res.fn_evals == 0
