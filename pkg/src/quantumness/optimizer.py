"""Monte Carlo edge-weight perturbation that drives quantumness upward.

Each move picks one existing edge uniformly and doubles or halves its
weight with equal probability. Quantumness of the even superposition is a
function of degrees alone, so a move costs O(n) instead of an eigensolve.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .ensembles import shannon_entropy
from .errors import DisconnectedGraphError
from .graph import Graph, is_connected

__all__ = ["McConfig", "Trajectory", "mc_step", "optimize_quantumness"]

WEIGHT_MIN = 2.0**-60
WEIGHT_MAX = 2.0**60
POLICIES = ("greedy", "always_accept")


@dataclass(frozen=True)
class McConfig:
    target_epsilon: float = 0.6
    max_steps: int = 200_000
    policy: str = "greedy"
    seed: int | None = 0
    record_stride: int = 100

    def __post_init__(self):
        if not 0 < self.target_epsilon < 1:
            raise ValueError(f"target_epsilon must lie in (0, 1), got {self.target_epsilon}")
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")
        if self.record_stride < 1:
            raise ValueError("record_stride must be >= 1")
        if self.policy not in POLICIES:
            raise ValueError(f"policy must be one of {POLICIES}, got {self.policy!r}")


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Recorded (step, quantumness, Shannon entropy of normalized degrees)."""

    steps: np.ndarray
    epsilons: np.ndarray
    entropies: np.ndarray
    graph: Graph
    terminated_by: str  # "target_reached" | "step_limit"
    accepted: int

    @property
    def final_epsilon(self) -> float:
        return float(self.epsilons[-1])

    def rows(self):
        for s, e, h in zip(self.steps, self.epsilons, self.entropies):
            yield int(s), float(e), float(h)

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["step", "epsilon", "shannon_entropy"])
            for s, e, h in self.rows():
                w.writerow([s, f"{e:.17g}", f"{h:.17g}"])


def _propose(weights: np.ndarray, rng: np.random.Generator, factor: float | None = None) -> tuple[int, float]:
    """Draw (edge index, factor) whose result stays inside the weight clamp."""
    while True:
        e = int(rng.integers(len(weights)))
        f = factor if factor is not None else (2.0 if rng.random() < 0.5 else 0.5)
        if WEIGHT_MIN <= weights[e] * f <= WEIGHT_MAX:
            return e, f
        if factor is not None:
            raise ValueError("forced move would leave the allowed weight range")


def mc_step(g: Graph, rng=None, factor: float | None = None) -> Graph:
    """Return a copy of ``g`` with one random edge's weight doubled or halved.

    ``factor`` (2 or 0.5) forces the direction; the edge is still random.
    """
    if factor is not None and factor not in (2.0, 0.5):
        raise ValueError("factor must be 2 or 0.5")
    rng = np.random.default_rng(rng)
    i, j, w = g.edges()
    if len(w) == 0:
        raise ValueError("graph has no edges")
    e, f = _propose(w, rng, factor)
    a = np.array(g.weights)
    a[i[e], j[e]] = a[j[e], i[e]] = w[e] * f
    return Graph(a, g.labels)


def _eps(d: np.ndarray) -> float:
    return 1.0 - np.mean(np.sqrt(d)) ** 2 / np.mean(d)


def optimize_quantumness(g: Graph, cfg: McConfig | None = None) -> Trajectory:
    """Iterate Monte Carlo moves until ``cfg.target_epsilon`` or ``cfg.max_steps``.

    Under the greedy policy a move is kept only if it strictly raises the
    quantumness; ``always_accept`` keeps every move. Step 0, every
    ``record_stride``-th step and the final step are recorded.
    """
    cfg = cfg or McConfig()
    if g.n < 2 or not is_connected(g):
        raise DisconnectedGraphError("optimizer needs a connected graph with n >= 2")
    rng = np.random.default_rng(cfg.seed)
    ei, ej, w = g.edges()
    w = w.copy()
    d = g.weights.sum(axis=1)
    eps = _eps(d)

    steps, epss, ents = [0], [eps], [shannon_entropy(d / d.sum())]
    greedy = cfg.policy == "greedy"
    accepted = 0
    terminated = "target_reached" if eps >= cfg.target_epsilon else "step_limit"
    step = 0
    while terminated != "target_reached" and step < cfg.max_steps:
        step += 1
        e, f = _propose(w, rng)
        u, v = ei[e], ej[e]
        delta = w[e] * (f - 1.0)
        trial = d.copy()
        trial[u] += delta
        trial[v] += delta
        new_eps = _eps(trial)
        if not greedy or new_eps > eps:
            w[e] *= f
            d, eps = trial, new_eps
            accepted += 1
        if eps >= cfg.target_epsilon:
            terminated = "target_reached"
        if step % cfg.record_stride == 0 or terminated == "target_reached" or step == cfg.max_steps:
            steps.append(step)
            epss.append(eps)
            ents.append(shannon_entropy(d / d.sum()))

    final = Graph.from_edges(g.n, zip(ei, ej), w, labels=g.labels)
    return Trajectory(
        steps=np.array(steps),
        epsilons=np.array(epss),
        entropies=np.array(ents),
        graph=final,
        terminated_by=terminated,
        accepted=accepted,
    )
