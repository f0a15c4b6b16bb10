"""Ensemble sweeps of uniform-state quantumness over mean degree."""

from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .ensembles import quantumness_ba_analytic, quantumness_poisson
from .graph import (
    generate_ba,
    generate_er,
    generate_rg,
    generate_ws,
    giant_component,
    rg_radius_for_degree,
)
from .walk import quantumness_uniform

__all__ = ["MODELS", "SweepRow", "build_model", "run_sweep", "write_sweep_csv", "SWEEP_COLUMNS"]

MODELS = ("ba", "er", "ws", "rg")
SWEEP_COLUMNS = ("mean_degree", "epsilon_analytic", "epsilon_empirical_mean",
                 "epsilon_empirical_std", "n_seeds")


@dataclass(frozen=True)
class SweepRow:
    mean_degree: float
    epsilon_analytic: float
    epsilon_empirical_mean: float
    epsilon_empirical_std: float
    n_seeds: int


def build_model(model: str, n: int, mean_degree: float, seed, beta: float = 0.1):
    """Generate one realization of ``model`` tuned to ``mean_degree``.

    BA uses ``m = round(<d>/2)`` and WS uses the nearest even ``k``, so their
    realized mean degree is quantized.
    """
    if model == "er":
        return generate_er(n, mean_degree / (n - 1), seed)
    if model == "ba":
        return generate_ba(n, max(1, round(mean_degree / 2)), seed)
    if model == "ws":
        return generate_ws(n, max(2, 2 * round(mean_degree / 2)), beta, seed)
    if model == "rg":
        return generate_rg(n, rg_radius_for_degree(n, mean_degree), seed)
    raise ValueError(f"unknown model {model!r}; choose from {MODELS}")


def analytic_quantumness(model: str, mean_degree: float) -> float:
    if model in ("er", "rg"):
        return quantumness_poisson(mean_degree)
    if model == "ba":
        return quantumness_ba_analytic(mean_degree)
    return math.nan


def _point(args) -> SweepRow:
    model, n, mean_degree, seeds, beta = args
    eps = []
    for ss in seeds:
        g = giant_component(build_model(model, n, mean_degree, ss, beta))
        eps.append(quantumness_uniform(g) if g.n >= 2 else math.nan)
    eps = np.array(eps)
    return SweepRow(
        mean_degree=float(mean_degree),
        epsilon_analytic=analytic_quantumness(model, mean_degree),
        epsilon_empirical_mean=float(np.nanmean(eps)),
        epsilon_empirical_std=float(np.nanstd(eps)),
        n_seeds=int(np.count_nonzero(~np.isnan(eps))),
    )


def run_sweep(model: str, means, seeds_per_point: int, n: int = 500, seed: int = 0,
              beta: float = 0.1, jobs: int = 1) -> list[SweepRow]:
    """Average uniform-state quantumness over realizations at each mean degree.

    Realization ``r`` of grid point ``k`` is seeded from ``(seed, k, r)``, so
    results do not depend on ``jobs`` or on evaluation order.
    """
    means = [float(m) for m in means]
    if not means:
        raise ValueError("empty parameter grid")
    if model not in MODELS:
        raise ValueError(f"unknown model {model!r}; choose from {MODELS}")
    if seeds_per_point < 1:
        raise ValueError("seeds_per_point must be >= 1")
    tasks = []
    for k, m in enumerate(means):
        seeds = [np.random.SeedSequence([seed, k, r]) for r in range(seeds_per_point)]
        tasks.append((model, n, m, seeds, beta))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_point, tasks))
    return [_point(t) for t in tasks]


def write_sweep_csv(rows: list[SweepRow], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SWEEP_COLUMNS)
        for r in rows:
            w.writerow([f"{r.mean_degree:.17g}", f"{r.epsilon_analytic:.17g}",
                        f"{r.epsilon_empirical_mean:.17g}", f"{r.epsilon_empirical_std:.17g}", r.n_seeds])
