import numpy as np
import pytest

from quasaropt.errors import InvalidArgumentError
from quasaropt.oracle import (FiniteSumObjective, Sampler, make_anchor,
                              sample_batch, stochastic_gradient,
                              svrg_estimate)


def quad_sum(n=4, dim=2):
    # f_i(x) = 0.5 ||x - c_i||^2 with distinct centers
    centers = np.arange(n * dim, dtype=float).reshape(n, dim)
    return FiniteSumObjective(
        n, dim,
        lambda i, x: 0.5 * float(np.sum((x - centers[i]) ** 2)),
        lambda i, x: np.asarray(x, float) - centers[i],
        smoothness_L=1.0), centers


def test_value_is_component_mean():
    f, centers = quad_sum()
    x = np.zeros(2)
    expected = np.mean([0.5 * np.sum(c ** 2) for c in centers])
    assert f.value(x) == pytest.approx(expected)


def test_counters_weighted_by_components():
    f, _ = quad_sum(n=4)
    x = np.zeros(2)
    f.value(x)
    f.gradient(x)
    f.component_grad(1, x)
    assert f.fn_evals == 4
    assert f.grad_evals == 5


def test_counters_paused():
    f, _ = quad_sum()
    with f.counters_paused():
        f.value(np.zeros(2))
        f.gradient(np.zeros(2))
    assert f.fn_evals == 0 and f.grad_evals == 0


def test_sampler_determinism():
    a = [Sampler(7).index(100) for _ in range(5)]
    s1, s2 = Sampler(7), Sampler(7)
    assert [s1.index(100) for _ in range(5)] == [s2.index(100) for _ in range(5)]


def test_sample_batch_range_and_errors():
    s = Sampler(0)
    idx = sample_batch(10, 6, s)
    assert len(idx) == 6
    assert np.all((idx >= 0) & (idx < 10))
    with pytest.raises(InvalidArgumentError):
        sample_batch(10, 0, s)
    with pytest.raises(InvalidArgumentError):
        sample_batch(10, 11, s)


def test_stochastic_gradient_returns_component():
    f, centers = quad_sum()
    x = np.ones(2)
    g, i = stochastic_gradient(f, x, Sampler(3))
    np.testing.assert_allclose(g, x - centers[i])


def test_make_anchor_counts_two_full_passes():
    f, _ = quad_sum(n=5)
    make_anchor(f, np.zeros(2))
    assert f.fn_evals == 5 and f.grad_evals == 5


def test_svrg_estimate_at_anchor_is_full_gradient():
    f, _ = quad_sum()
    x = np.array([1.0, -1.0])
    anchor = make_anchor(f, x)
    est = svrg_estimate(f, x, anchor, np.array([0, 2]))
    np.testing.assert_allclose(est, anchor.full_grad)


def test_svrg_estimate_unbiased_over_full_enumeration():
    f, _ = quad_sum(n=3)
    x = np.array([0.5, 0.5])
    anchor = make_anchor(f, np.array([2.0, 2.0]))
    with f.counters_paused():
        full = f.gradient(x)
        ests = [svrg_estimate(f, x, anchor, [i]) for i in range(3)]
    np.testing.assert_allclose(np.mean(ests, axis=0), full)


def test_svrg_estimate_rejects_empty_batch():
    f, _ = quad_sum()
    anchor = make_anchor(f, np.zeros(2))
    with pytest.raises(InvalidArgumentError):
        svrg_estimate(f, np.zeros(2), anchor, [])


def test_batch_fast_path_matches_slow_path():
    n, dim = 5, 3
    centers = np.random.default_rng(0).standard_normal((n, dim))
    slow = FiniteSumObjective(
        n, dim,
        lambda i, x: 0.5 * float(np.sum((x - centers[i]) ** 2)),
        lambda i, x: np.asarray(x, float) - centers[i], 1.0)
    fast = FiniteSumObjective(
        n, dim,
        lambda i, x: 0.5 * float(np.sum((x - centers[i]) ** 2)),
        lambda i, x: np.asarray(x, float) - centers[i], 1.0,
        batch_value_fn=lambda idx, x: np.mean(
            0.5 * np.sum((x - centers[idx]) ** 2, axis=1)),
        batch_grad_fn=lambda idx, x: np.mean(x - centers[idx], axis=0))
    x = np.array([0.3, -0.7, 1.1])
    idx = np.array([0, 2, 2])
    assert fast.batch_value(idx, x) == pytest.approx(slow.batch_value(idx, x))
    np.testing.assert_allclose(fast.batch_grad(idx, x), slow.batch_grad(idx, x))
