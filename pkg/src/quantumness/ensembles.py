"""Degree-distribution analytics: Renyi entropies and ensemble quantumness.

For the even superposition state the quantumness depends on degrees only,
``eps = 1 - <sqrt d>^2 / <d>``, so it can be evaluated against a degree
distribution without building a graph.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, stats

from .analysis import loglog_fit
from .errors import DisconnectedGraphError
from .graph import Graph, degrees, is_connected

__all__ = [
    "renyi_entropy",
    "shannon_entropy",
    "entropy_bound",
    "ba_degree_density",
    "quantumness_ba_analytic",
    "quantumness_poisson",
    "PoissonFit",
    "fit_poisson_quantumness",
]


def renyi_entropy(p, q: float) -> float:
    """Renyi entropy of order ``q`` (natural log).

    ``q == 1`` gives the Shannon limit; zero-probability entries are ignored
    for every order, so ``q == 0`` is the log of the support size.
    """
    if q < 0:
        raise ValueError(f"Renyi order must be non-negative, got {q}")
    p = np.asarray(p, dtype=float)
    if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-9:
        raise ValueError("p must be a probability distribution")
    p = p[p > 0]
    if q == 1:
        return float(-np.sum(p * np.log(p)))
    if math.isinf(q):
        return float(-np.log(p.max()))
    return float(np.log(np.sum(p**q)) / (1.0 - q))


def shannon_entropy(p) -> float:
    return renyi_entropy(p, 1.0)


def entropy_bound(g: Graph) -> float:
    """Upper bound ``1 - exp(H_1(d / sum d)) / N`` on uniform-state quantumness."""
    if g.n < 2 or not is_connected(g):
        raise DisconnectedGraphError("entropy bound needs a connected graph with n >= 2")
    d = degrees(g).d
    return float(1.0 - np.exp(shannon_entropy(d / d.sum())) / g.n)


def ba_degree_density(d, mean_degree: float):
    """Continuum BA degree density ``<d>^2 / (2 d^3)`` on ``d >= <d>/2``."""
    d = np.asarray(d, dtype=float)
    return np.where(d >= mean_degree / 2, mean_degree**2 / (2.0 * d**3), 0.0)


def quantumness_ba_analytic(mean_degree: float = 6.0) -> float:
    """Uniform-state quantumness of the continuum BA degree density.

    Computed by quadrature of the density's moments; the answer does not
    depend on ``mean_degree``.
    """
    if mean_degree <= 0:
        raise ValueError("mean degree must be positive")
    lo = mean_degree / 2.0

    def moment(f):
        val, _ = integrate.quad(lambda x: f(x) * mean_degree**2 / (2.0 * x**3), lo, np.inf,
                                epsabs=0.0, epsrel=1e-12, limit=200)
        return val

    norm = moment(lambda x: 1.0)
    mean = moment(lambda x: x) / norm
    root = moment(np.sqrt) / norm
    return 1.0 - root**2 / mean


def quantumness_poisson(mean_degree: float, exclude_zero: bool = False, tail: float = 1e-12) -> float:
    """Uniform-state quantumness of a Poisson degree distribution.

    The sum runs until the remaining tail mass is below ``tail``. With
    ``exclude_zero`` the distribution is conditioned on ``d >= 1`` (isolated
    nodes removed); by default ``d = 0`` stays in and the full Poisson mean
    is used.
    """
    if mean_degree <= 0:
        raise ValueError("mean degree must be positive")
    kmax = int(stats.poisson.isf(tail, mean_degree)) + 1
    k = np.arange(kmax + 1)
    pmf = stats.poisson.pmf(k, mean_degree)
    if exclude_zero:
        pmf[0] = 0.0
        pmf /= pmf.sum()
        mean = float(pmf @ k)
    else:
        mean = float(mean_degree)
    root = float(pmf @ np.sqrt(k))
    return 1.0 - root**2 / mean


@dataclass(frozen=True)
class PoissonFit:
    """``eps ~ kappa1 * <d>**(-kappa2)`` over the fitted mean-degree range."""

    kappa1: float
    kappa2: float
    residual: float
    mean_range: tuple[float, float]
    n_points: int


def fit_poisson_quantumness(means, epsilons=None) -> PoissonFit:
    """Log-log least-squares power law for ensemble quantumness.

    ``epsilons`` defaults to :func:`quantumness_poisson` at each mean; pass
    empirical sweep values to fit those instead.
    """
    means = np.asarray(means, dtype=float)
    if means.ndim != 1 or len(means) < 2 or np.ptp(means) == 0:
        raise ValueError("degenerate fit: need distinct mean degrees")
    if len(means) < 4:
        raise ValueError(f"need at least 4 mean degrees, got {len(means)}")
    if np.any(means <= 1):
        raise ValueError("mean degrees must all exceed 1")
    if epsilons is None:
        epsilons = np.array([quantumness_poisson(m) for m in means])
    epsilons = np.asarray(epsilons, dtype=float)
    if epsilons.shape != means.shape or np.any(epsilons <= 0):
        raise ValueError("need one positive quantumness per mean degree")
    c, slope, rms = loglog_fit(means, epsilons)
    return PoissonFit(kappa1=c, kappa2=-slope, residual=rms,
                      mean_range=(float(means.min()), float(means.max())), n_points=len(means))
