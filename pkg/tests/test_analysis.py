import numpy as np
import pytest

from quantumness.analysis import FitResult, fit_correction_exponent, l1_distance, loglog_fit
from quantumness.graph import generate_ba
from quantumness.optimizer import McConfig, optimize_quantumness
from quantumness.walk import WalkSummary, node_state, quantum_long_time_average, uniform_state

from conftest import path_graph


def _summary(d, ratio, eps=0.3):
    d = np.asarray(d, dtype=float)
    pc = d / d.sum()
    corr = ratio * pc
    corr /= corr.sum()
    return WalkSummary(
        labels=tuple(str(i) for i in range(len(d))), degrees=d, p_classical=pc,
        p_quantum=(1 - eps) * pc + eps * corr, p_correction=corr, quantumness=eps,
        energy=1.0, gap=1.0, bound_ratio=None, entropy_bound=None, tolerance=1e-8,
    )


def test_l1_examples():
    assert l1_distance([0.2, 0.8], [0.2, 0.8]) == 0
    assert l1_distance([1, 0], [0, 1]) == 2
    with pytest.raises(ValueError):
        l1_distance([1, 0], [1, 0, 0])


def test_l1_two_node_localized_walk():
    s = quantum_long_time_average(path_graph(2), node_state(2, 0))
    assert l1_distance(s.p_quantum, s.p_classical) == pytest.approx(0, abs=1e-15)
    assert 2 * s.quantumness == pytest.approx(1)


def test_l1_metric_properties(rng):
    for _ in range(200):
        p, q, r = (x / x.sum() for x in rng.random((3, 8)))
        assert l1_distance(p, q) == l1_distance(q, p)
        assert l1_distance(p, r) <= l1_distance(p, q) + l1_distance(q, r) + 1e-15
        assert 0 <= l1_distance(p, q) <= 2


def test_loglog_fit_exact():
    x = np.array([1.0, 2.0, 4.0, 9.0])
    c, s, rms = loglog_fit(x, 3.0 * x**-1.7)
    assert (c, s) == pytest.approx((3.0, -1.7), abs=1e-12)
    assert rms < 1e-12
    with pytest.raises(ValueError):
        loglog_fit([2.0, 2.0], [1.0, 2.0])


def test_fit_exact_inverse_degree():
    d = np.array([1, 2, 3, 5, 8, 13, 2, 3], dtype=float)
    fit = fit_correction_exponent(_summary(d, 0.7 / d))
    assert isinstance(fit, FitResult)
    assert fit.exponent == pytest.approx(1.0, abs=1e-12)
    assert fit.points_used == len(d)
    assert fit.residual < 1e-12


def test_fit_scale_invariant(rng):
    d = rng.integers(1, 30, size=40).astype(float)
    ratio = d**-0.8 * np.exp(rng.normal(0, 0.2, size=40))
    base = loglog_fit(d, ratio)
    scaled = loglog_fit(d, 123.0 * ratio)
    assert scaled[1] == pytest.approx(base[1], abs=1e-12)
    assert scaled[0] == pytest.approx(123.0 * base[0], rel=1e-12)


def test_fit_excludes_zero_correction():
    d = np.array([1, 2, 3, 4, 5], dtype=float)
    ratio = 1 / d
    ratio[2] = 0.0
    fit = fit_correction_exponent(_summary(d, ratio))
    assert fit.points_used == 4
    assert fit.points_excluded == 1
    assert fit.exponent == pytest.approx(1.0, abs=1e-12)


def test_fit_errors():
    with pytest.raises(ValueError, match="too small"):
        fit_correction_exponent(quantum_long_time_average(path_graph(2), uniform_state(2)))
    d = np.array([1.0, 2.0, 3.0])
    ratio = np.array([1.0, 0.0, 0.0])
    with pytest.raises(ValueError, match="need 3"):
        fit_correction_exponent(_summary(d, ratio))


def test_ba_correction_exponent():
    s = quantum_long_time_average(generate_ba(500, 3, 1))
    fit = fit_correction_exponent(s)
    assert 0.5 <= fit.exponent <= 1.5


def test_correction_exponent_survives_weight_optimization():
    g = generate_ba(500, 3, 1)
    traj = optimize_quantumness(g, McConfig(target_epsilon=0.6, seed=0))
    assert traj.terminated_by == "target_reached"
    fit = fit_correction_exponent(quantum_long_time_average(traj.graph))
    assert 0.5 <= fit.exponent <= 1.5
