import math

import mpmath
import networkx as nx
import numpy as np
import pytest

from quantumness.ensembles import (
    ba_degree_density,
    entropy_bound,
    fit_poisson_quantumness,
    quantumness_ba_analytic,
    quantumness_poisson,
    renyi_entropy,
    shannon_entropy,
)
from quantumness.graph import Graph, degrees, generate_er, generate_ring, generate_star, giant_component
from quantumness.walk import quantumness_uniform

from conftest import complete_graph, path_graph


def _poisson_eps_mp(mean, exclude_zero=False):
    """High-precision direct summation of the Poisson root-degree moment."""
    mpmath.mp.dps = 30
    m = mpmath.mpf(float(mean))
    kmax = int(mean + 60 * math.sqrt(mean) + 60)
    terms = [mpmath.e**(-m) * m**k / mpmath.factorial(k) for k in range(kmax)]
    if exclude_zero:
        terms[0] = mpmath.mpf(0)
    z = mpmath.fsum(terms)
    root = mpmath.fsum(t * mpmath.sqrt(k) for k, t in enumerate(terms)) / z
    mu = mpmath.fsum(t * k for k, t in enumerate(terms)) / z
    return float(1 - root**2 / mu)


# ---------------------------------------------------------------- Renyi


@pytest.mark.parametrize("q", [0, 0.5, 1, 2, 7.5])
def test_renyi_uniform(q):
    assert renyi_entropy(np.full(9, 1 / 9), q) == pytest.approx(math.log(9), rel=1e-14)


def test_renyi_examples():
    assert renyi_entropy([0.5, 0.5], 1) == pytest.approx(math.log(2))
    p = [0.25, 0.5, 0.25]
    h = renyi_entropy(p, 0.5)
    assert h == pytest.approx(2 * math.log(1 + math.sqrt(2) / 2), rel=1e-14)
    assert 1 - math.exp(h) / 3 == pytest.approx(quantumness_uniform(path_graph(3)), abs=1e-14)


def test_renyi_zero_probabilities():
    assert renyi_entropy([0.5, 0.5, 0.0], 1) == pytest.approx(math.log(2))
    assert renyi_entropy([0.5, 0.5, 0.0], 0) == pytest.approx(math.log(2))


def test_renyi_limit_to_shannon(rng):
    p = rng.random(12)
    p /= p.sum()
    assert renyi_entropy(p, 1 + 1e-7) == pytest.approx(shannon_entropy(p), abs=1e-6)


def test_renyi_invalid():
    with pytest.raises(ValueError):
        renyi_entropy([0.5, 0.5], -1)
    with pytest.raises(ValueError):
        renyi_entropy([0.5, 0.6], 1)


def test_renyi_non_increasing(rng):
    for _ in range(20):
        p = rng.random(15) ** 3
        p /= p.sum()
        hs = [renyi_entropy(p, q) for q in (0, 0.5, 1, 2, 5)]
        assert all(a >= b - 1e-12 for a, b in zip(hs, hs[1:]))


def test_quantumness_as_renyi_half(rng):
    from conftest import random_connected_graph

    for _ in range(20):
        g = random_connected_graph(rng)
        d = degrees(g).d
        eps = 1 - math.exp(renyi_entropy(d / d.sum(), 0.5)) / g.n
        assert eps == pytest.approx(quantumness_uniform(g), abs=1e-12)


# ---------------------------------------------------------------- entropy bound


def test_entropy_bound_regular():
    for g in (complete_graph(5), generate_ring(20, 4)):
        assert entropy_bound(g) == pytest.approx(0, abs=1e-14)
        assert quantumness_uniform(g) == pytest.approx(0, abs=1e-14)


def test_entropy_bound_star3():
    b = entropy_bound(path_graph(3))
    assert b == pytest.approx(1 - math.exp(1.5 * math.log(2)) / 3, abs=1e-14)
    assert b == pytest.approx(0.057191, abs=1e-6)
    assert quantumness_uniform(path_graph(3)) <= b


def test_entropy_bound_dominates(rng, karate):
    from conftest import random_connected_graph

    assert entropy_bound(karate) >= 0.1204
    graphs = [karate, generate_star(30)] + [random_connected_graph(rng) for _ in range(30)]
    for g in graphs:
        b, eps = entropy_bound(g), quantumness_uniform(g)
        assert eps <= b + 1e-10
        assert 0 <= b <= 1 - 1 / g.n + 1e-12
        if degrees(g).d.std() > 0:
            assert eps < b


# ---------------------------------------------------------------- BA continuum


@pytest.mark.parametrize("mean", [2, 6, 20])
def test_ba_analytic_value(mean):
    assert quantumness_ba_analytic(mean) == pytest.approx(1 / 9, abs=1e-6)


def test_ba_analytic_closed_form_moments():
    # root moment by hand: (4/3) sqrt(<d>/2), so eps = 1 - 8/9
    for mean in (2.0, 6.0, 20.0):
        lo = mean / 2
        grid = np.geomspace(lo, lo * 1e7, 400_001)
        dens = ba_degree_density(grid, mean)
        root = np.trapezoid(np.sqrt(grid) * dens, grid) + mean**2 / 3 * grid[-1] ** -1.5
        assert root == pytest.approx(4 / 3 * math.sqrt(mean / 2), rel=1e-6)


# ---------------------------------------------------------------- Poisson


def test_poisson_six():
    assert quantumness_poisson(6) == pytest.approx(0.046, abs=0.002)
    assert quantumness_poisson(6) == pytest.approx(_poisson_eps_mp(6), abs=1e-12)


@pytest.mark.parametrize("mean", [1.5, 3, 10, 40])
def test_poisson_against_mp(mean):
    assert quantumness_poisson(mean) == pytest.approx(_poisson_eps_mp(mean), abs=1e-11)
    assert quantumness_poisson(mean, exclude_zero=True) == pytest.approx(
        _poisson_eps_mp(mean, exclude_zero=True), abs=1e-11)


def test_poisson_concentrates():
    assert quantumness_poisson(1e4) < 1e-3
    eps = [quantumness_poisson(m) for m in (2, 4, 8, 16, 32)]
    assert all(a > b for a, b in zip(eps, eps[1:]))


@pytest.mark.slow
def test_poisson_vs_er_realizations():
    n = 5000
    eps = [quantumness_uniform(giant_component(generate_er(n, 6 / (n - 1), s))) for s in range(20)]
    assert np.mean(eps) == pytest.approx(quantumness_poisson(6), abs=0.01)


def test_fit_exact_power_law():
    means = np.array([2.0, 3.0, 5.0, 8.0, 13.0])
    fit = fit_poisson_quantumness(means, 0.5 / means)
    assert fit.kappa1 == pytest.approx(0.5, abs=1e-12)
    assert fit.kappa2 == pytest.approx(1.0, abs=1e-12)
    assert fit.residual < 1e-12
    assert fit.mean_range == (2.0, 13.0)


@pytest.mark.parametrize("means", [[4, 4], [4, 4, 4, 4], [2, 3, 4], [0.5, 2, 3, 4]])
def test_fit_rejects_bad_input(means):
    with pytest.raises(ValueError):
        fit_poisson_quantumness(means)


def test_fit_integer_grid_matches_independent_route():
    means = np.arange(3, 21)
    fit = fit_poisson_quantumness(means)
    eps = np.array([_poisson_eps_mp(m) for m in means])
    slope, icpt = np.polyfit(np.log(means), np.log(eps), 1)
    assert fit.kappa2 == pytest.approx(-slope, abs=1e-9)
    assert fit.kappa1 == pytest.approx(math.exp(icpt), rel=1e-9)
    assert fit.kappa2 == pytest.approx(1.210, rel=0.10)


# ---------------------------------------------------------------- limits


@pytest.mark.parametrize("n", list(range(3, 201)))
def test_star_closed_form(n):
    assert quantumness_uniform(generate_star(n)) == pytest.approx(0.5 - math.sqrt(n - 1) / n, abs=1e-10)


def test_two_heavy_nodes_limit():
    n = 10
    edges = [(0, 1)] + [(i, i + 1) for i in range(1, n - 1)]
    eps = []
    for w in (1e2, 1e4, 1e6):
        g = Graph.from_edges(n, edges, [w] + [1.0] * (n - 2))
        eps.append(quantumness_uniform(g))
    cap = (n - 2) / n
    assert eps[0] < eps[1] < eps[2] < cap
    assert cap - eps[2] < 1e-2


def test_binary_star_is_maximal_small_graphs():
    for n in range(3, 8):
        best = max(
            (g for g in nx.graph_atlas_g() if g.number_of_nodes() == n and nx.is_connected(g)),
            key=lambda g: quantumness_uniform(Graph(nx.to_numpy_array(g))),
        )
        degs = sorted(d for _, d in best.degree())
        assert degs == [1] * (n - 1) + [n - 1]
