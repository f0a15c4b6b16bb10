"""Weighted undirected graphs: container, edge-list IO, random models, degrees.

Graphs are stored as dense symmetric weight matrices. The walk machinery
needs full dense eigendecompositions anyway, so nothing here tries to be
sparse.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial.distance import pdist, squareform

from .errors import GraphFormatError

__all__ = [
    "Graph",
    "DegreeVector",
    "from_edge_list",
    "read_edge_list",
    "to_edge_list",
    "write_edge_list",
    "generate_ba",
    "generate_er",
    "generate_ws",
    "generate_rg",
    "generate_star",
    "generate_ring",
    "rg_radius_for_degree",
    "giant_component",
    "component_count",
    "is_connected",
    "degrees",
    "karate_club",
]


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable weighted undirected graph.

    Attributes
    ----------
    weights : ndarray, shape (n, n)
        Symmetric, non-negative, zero diagonal. Stored read-only.
    labels : tuple of str
        Original node identifiers, aligned with matrix rows.
    """

    weights: np.ndarray
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        w = np.array(self.weights, dtype=float, copy=True)
        if w.ndim != 2 or w.shape[0] != w.shape[1] or w.shape[0] == 0:
            raise ValueError(f"weights must be a non-empty square matrix, got shape {w.shape}")
        if not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite")
        if np.any(w < 0):
            raise ValueError("weights must be non-negative")
        if np.any(np.diagonal(w) != 0):
            raise ValueError("self-loops are not supported (non-zero diagonal)")
        if not np.array_equal(w, w.T):
            raise ValueError("weights must be exactly symmetric")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

        labels = tuple(str(x) for x in self.labels) if self.labels else tuple(str(i) for i in range(len(w)))
        if len(labels) != len(w):
            raise ValueError(f"{len(labels)} labels for {len(w)} nodes")
        if len(set(labels)) != len(labels):
            raise ValueError("node labels must be unique")
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]], weights=None, labels=None) -> Graph:
        """Build a graph from index pairs; ``weights`` defaults to all ones."""
        edges = np.asarray(list(edges), dtype=int).reshape(-1, 2)
        w = np.ones(len(edges)) if weights is None else np.asarray(weights, dtype=float)
        if len(w) != len(edges):
            raise ValueError("one weight per edge required")
        a = np.zeros((n, n))
        a[edges[:, 0], edges[:, 1]] = w
        a[edges[:, 1], edges[:, 0]] = w
        return cls(a, tuple(labels) if labels is not None else ())

    def edges(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Upper-triangle edges as ``(rows, cols, weights)`` in row-major order."""
        i, j = np.nonzero(np.triu(self.weights, k=1))
        return i, j, self.weights[i, j]

    @property
    def n_edges(self) -> int:
        return int(np.count_nonzero(np.triu(self.weights, k=1)))

    def index(self, label: str) -> int:
        try:
            return self.labels.index(str(label))
        except ValueError:
            raise KeyError(f"no node labelled {label!r}") from None


@dataclass(frozen=True)
class DegreeVector:
    d: np.ndarray
    mean_degree: float
    mean_root_degree: float


# ---------------------------------------------------------------------------
# Edge-list IO
# ---------------------------------------------------------------------------


def from_edge_list(text: str) -> Graph:
    """Parse whitespace-separated ``u v [w]`` lines; ``#`` starts a comment.

    Node ids are arbitrary tokens, kept as labels in order of first
    appearance. Repeating an undirected edge in either orientation, a
    self-loop, or a non-positive weight is an error.
    """
    index: dict[str, int] = {}
    rows: list[int] = []
    cols: list[int] = []
    vals: list[float] = []
    seen: dict[tuple[int, int], int] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise GraphFormatError(f"expected 'u v' or 'u v w', got {len(parts)} fields", lineno)
        u, v = parts[0], parts[1]
        if u == v:
            raise GraphFormatError(f"self-loop on node {u!r}", lineno)
        w = 1.0
        if len(parts) == 3:
            try:
                w = float(parts[2])
            except ValueError:
                raise GraphFormatError(f"weight {parts[2]!r} is not a number", lineno) from None
            if not math.isfinite(w) or w <= 0:
                raise GraphFormatError(f"weight must be finite and > 0, got {parts[2]}", lineno)
        iu = index.setdefault(u, len(index))
        iv = index.setdefault(v, len(index))
        key = (min(iu, iv), max(iu, iv))
        if key in seen:
            raise GraphFormatError(f"duplicate edge {u}-{v} (first seen on line {seen[key]})", lineno)
        seen[key] = lineno
        rows.append(iu)
        cols.append(iv)
        vals.append(w)

    if not index:
        raise GraphFormatError("edge list contains no edges")
    return Graph.from_edges(len(index), zip(rows, cols), vals, labels=list(index))


def read_edge_list(path: str | Path) -> Graph:
    return from_edge_list(Path(path).read_text(encoding="utf-8"))


def to_edge_list(g: Graph, header: str | None = None) -> str:
    """Serialize to the edge-list format.

    Weights use 17 significant digits so binary64 values round-trip; the
    weight column is omitted when every weight is exactly 1. Isolated nodes
    cannot be represented and are dropped.
    """
    i, j, w = g.edges()
    binary = bool(np.all(w == 1.0))
    lines = []
    if header:
        lines.extend(f"# {h}" for h in header.splitlines())
    for a, b, x in zip(i, j, w):
        if binary:
            lines.append(f"{g.labels[a]} {g.labels[b]}")
        else:
            lines.append(f"{g.labels[a]} {g.labels[b]} {x:.17g}")
    return "\n".join(lines) + "\n"


def write_edge_list(g: Graph, path: str | Path, header: str | None = None) -> None:
    Path(path).write_text(to_edge_list(g, header), encoding="utf-8")


def karate_club() -> Graph:
    """Zachary's karate club (34 nodes, 78 unweighted edges), bundled."""
    return read_edge_list(Path(__file__).with_name("data") / "karate.edges")


# ---------------------------------------------------------------------------
# Random network models
# ---------------------------------------------------------------------------


def generate_ba(n: int, m: int, seed=None) -> Graph:
    """Barabasi-Albert preferential attachment.

    Growth starts from the complete graph on ``m + 1`` nodes; every later
    node attaches ``m`` edges to distinct existing nodes chosen with
    probability proportional to their current degree.
    """
    if not (isinstance(n, (int, np.integer)) and isinstance(m, (int, np.integer))):
        raise TypeError("n and m must be integers")
    if m < 1 or n <= m:
        raise ValueError(f"need n > m >= 1, got n={n}, m={m}")
    rng = np.random.default_rng(seed)
    a = np.zeros((n, n))
    # each node appears in the pool once per incident edge end
    pool: list[int] = []
    for u in range(m + 1):
        for v in range(u + 1, m + 1):
            a[u, v] = a[v, u] = 1.0
            pool.extend((u, v))
    for t in range(m + 1, n):
        targets: list[int] = []
        while len(targets) < m:
            c = pool[rng.integers(len(pool))]
            if c not in targets:
                targets.append(c)
        for c in targets:
            a[t, c] = a[c, t] = 1.0
            pool.extend((t, c))
    return Graph(a)


def generate_er(n: int, p: float, seed=None) -> Graph:
    """Erdos-Renyi G(n, p)."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    hit = rng.random(len(iu)) < p
    a = np.zeros((n, n))
    a[iu[hit], ju[hit]] = 1.0
    a[ju[hit], iu[hit]] = 1.0
    return Graph(a)


def generate_ws(n: int, k: int, beta: float, seed=None) -> Graph:
    """Watts-Strogatz small world.

    Ring lattice where each node links to ``k/2`` neighbours per side; each
    lattice edge ``(u, u+j)`` is then rewired with probability ``beta`` to
    ``(u, w)`` with ``w`` uniform over nodes not already adjacent to ``u``.
    """
    if k % 2 or k < 2 or k >= n:
        raise ValueError(f"k must be even with 2 <= k < n, got k={k}, n={n}")
    if not 0.0 <= beta <= 1.0:
        raise ValueError(f"beta must lie in [0, 1], got {beta}")
    rng = np.random.default_rng(seed)
    adj = np.zeros((n, n), dtype=bool)
    nodes = np.arange(n)
    for j in range(1, k // 2 + 1):
        adj[nodes, (nodes + j) % n] = True
        adj[(nodes + j) % n, nodes] = True
    if beta > 0:
        for j in range(1, k // 2 + 1):
            for u in range(n):
                v = (u + j) % n
                if rng.random() >= beta:
                    continue
                free = ~adj[u]
                free[u] = False
                candidates = np.flatnonzero(free)
                if len(candidates) == 0:
                    continue
                w = candidates[rng.integers(len(candidates))]
                adj[u, v] = adj[v, u] = False
                adj[u, w] = adj[w, u] = True
    return Graph(adj.astype(float))


def rg_radius_for_degree(n: int, mean_degree: float) -> float:
    """Connection radius giving ``mean_degree`` in the bulk of the unit square.

    Boundary nodes see less area, so the realized mean is slightly lower.
    """
    if n < 2 or mean_degree <= 0:
        raise ValueError("need n >= 2 and a positive mean degree")
    return math.sqrt(mean_degree / (math.pi * (n - 1)))


def generate_rg(n: int, radius: float, seed=None) -> Graph:
    """Random geometric graph on the unit square (no periodic wrap)."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if radius < 0:
        raise ValueError(f"radius must be non-negative, got {radius}")
    rng = np.random.default_rng(seed)
    pts = rng.random((n, 2))
    if n == 1:
        return Graph(np.zeros((1, 1)))
    close = squareform(pdist(pts) <= radius)
    return Graph(close.astype(float))


def generate_star(n: int) -> Graph:
    """Star on ``n`` nodes with the hub at index 0."""
    if n < 2:
        raise ValueError(f"a star needs n >= 2, got {n}")
    return Graph.from_edges(n, [(0, i) for i in range(1, n)])


def generate_ring(n: int, k: int = 2) -> Graph:
    """Regular ring lattice of degree ``k`` (Watts-Strogatz with no rewiring)."""
    return generate_ws(n, k, 0.0)


# ---------------------------------------------------------------------------
# Components and degrees
# ---------------------------------------------------------------------------


def _components(g: Graph) -> tuple[int, np.ndarray]:
    return connected_components(csr_matrix(g.weights), directed=False)


def component_count(g: Graph) -> int:
    return int(_components(g)[0])


def is_connected(g: Graph) -> bool:
    return component_count(g) == 1


def giant_component(g: Graph) -> Graph:
    """Largest connected component, relabelled contiguously in original order.

    Equal-sized components are resolved in favour of the one holding the
    lowest node index. Returns ``g`` itself when it is already connected.
    """
    ncomp, comp = _components(g)
    if ncomp == 1:
        return g
    sizes = np.bincount(comp)
    first_index = np.full(ncomp, g.n)
    np.minimum.at(first_index, comp, np.arange(g.n))
    best = min(range(ncomp), key=lambda c: (-sizes[c], first_index[c]))
    keep = np.flatnonzero(comp == best)
    return Graph(g.weights[np.ix_(keep, keep)], tuple(g.labels[i] for i in keep))


def degrees(g: Graph) -> DegreeVector:
    d = g.weights.sum(axis=1)
    return DegreeVector(d=d, mean_degree=float(d.mean()), mean_root_degree=float(np.sqrt(d).mean()))
