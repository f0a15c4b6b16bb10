"""Walk generators and their degeneracy-grouped eigendecomposition."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DisconnectedGraphError, NumericalError
from .graph import Graph, degrees, is_connected

__all__ = [
    "Spectrum",
    "EigenspacePartition",
    "laplacian",
    "quantum_hamiltonian",
    "classical_generator",
    "eigendecompose",
    "default_tolerance",
    "group_eigenspaces",
    "eigenspace_projectors",
    "ground_state",
    "spectral_gap",
    "write_spectrum_csv",
    "partition_to_dict",
]


def _positive_degrees(g: Graph) -> np.ndarray:
    if g.n < 2:
        raise DisconnectedGraphError(f"walks need at least 2 nodes, got {g.n}")
    d = degrees(g).d
    if np.any(d <= 0):
        isolated = [g.labels[i] for i in np.flatnonzero(d <= 0)[:5]]
        raise DisconnectedGraphError(
            f"zero-degree nodes {isolated}; extract the giant component first"
        )
    return d


def laplacian(g: Graph) -> np.ndarray:
    """``L = D - A``."""
    return np.diag(g.weights.sum(axis=1)) - g.weights


def quantum_hamiltonian(g: Graph) -> np.ndarray:
    """Symmetric normalized Laplacian ``I - D^-1/2 A D^-1/2``."""
    d = _positive_degrees(g)
    s = 1.0 / np.sqrt(d)
    h = -(s[:, None] * g.weights * s[None, :])
    np.fill_diagonal(h, 1.0)
    return 0.5 * (h + h.T)


def classical_generator(g: Graph) -> np.ndarray:
    """Infinitesimal stochastic generator ``L D^-1``; columns sum to zero.

    Not symmetric for irregular graphs, so it is not a valid input to
    :func:`eigendecompose`.
    """
    d = _positive_degrees(g)
    h = -g.weights / d[None, :]
    np.fill_diagonal(h, 1.0)
    return h


@dataclass(frozen=True)
class Spectrum:
    """Ascending eigenvalues with orthonormal eigenvectors as columns."""

    values: np.ndarray
    vectors: np.ndarray

    @property
    def n(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class EigenspacePartition:
    """Eigenvector indices grouped by (numerically) equal eigenvalue.

    ``groups[j]`` holds the member indices of eigenspace ``j``;
    ``values[j]`` is the mean of its members' eigenvalues.
    """

    values: tuple[float, ...]
    groups: tuple[np.ndarray, ...]
    tolerance: float

    def __len__(self) -> int:
        return len(self.groups)

    def sizes(self) -> list[int]:
        return [len(m) for m in self.groups]


def eigendecompose(h: np.ndarray) -> Spectrum:
    """Dense symmetric eigendecomposition with a deterministic sign convention.

    Each eigenvector is flipped so its first component of non-negligible
    magnitude is positive.
    """
    h = np.asarray(h, dtype=float)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {h.shape}")
    scale = max(1.0, float(np.max(np.abs(h)))) if h.size else 1.0
    if np.max(np.abs(h - h.T), initial=0.0) > 1e-12 * scale:
        raise ValueError("matrix is not symmetric; eigendecompose needs a symmetric operator")
    try:
        values, vectors = np.linalg.eigh(0.5 * (h + h.T))
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"symmetric eigensolver failed: {exc}") from exc
    if not (np.all(np.isfinite(values)) and np.all(np.isfinite(vectors))):
        raise NumericalError("symmetric eigensolver returned non-finite values")

    cutoff = 1e-8 * np.max(np.abs(vectors), axis=0)
    pivot = np.argmax(np.abs(vectors) > cutoff, axis=0)
    signs = np.sign(vectors[pivot, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return Spectrum(values=values, vectors=vectors * signs)


def default_tolerance(spectrum: Spectrum) -> float:
    return 1e-8 * max(1.0, float(np.max(np.abs(spectrum.values))))


def group_eigenspaces(spectrum: Spectrum, tol: float | None = None) -> EigenspacePartition:
    """Greedy gap grouping: a new group starts wherever consecutive
    eigenvalues differ by more than ``tol``."""
    if tol is None:
        tol = default_tolerance(spectrum)
    if tol < 0:
        raise ValueError("tolerance must be non-negative")
    lam = spectrum.values
    breaks = np.flatnonzero(np.diff(lam) > tol) + 1
    groups = tuple(np.split(np.arange(len(lam)), breaks))
    values = tuple(float(lam[m].mean()) for m in groups)
    return EigenspacePartition(values=values, groups=groups, tolerance=float(tol))


def eigenspace_projectors(spectrum: Spectrum, partition: EigenspacePartition) -> list[np.ndarray]:
    """Explicit projector matrices, one per eigenspace. O(n^3) memory-heavy;
    the walk code never forms these."""
    out = []
    for members in partition.groups:
        v = spectrum.vectors[:, members]
        out.append(v @ v.T)
    return out


def ground_state(g: Graph) -> np.ndarray:
    """Normalized zero-energy eigenvector, entries ``sqrt(d_i / sum d)``."""
    d = _positive_degrees(g)
    if not is_connected(g):
        raise DisconnectedGraphError("ground state is unique only for connected graphs")
    return np.sqrt(d / d.sum())


def spectral_gap(partition: EigenspacePartition) -> float:
    """Smallest non-zero eigenvalue, i.e. the representative of group 1."""
    if len(partition) < 2:
        raise ValueError("spectrum has a single eigenspace; no gap is defined")
    if len(partition.groups[0]) != 1:
        raise DisconnectedGraphError(
            f"ground eigenspace is {len(partition.groups[0])}-fold degenerate; graph is disconnected"
        )
    gap = partition.values[1]
    if gap <= 0:
        raise NumericalError(f"non-positive spectral gap {gap}")
    return gap


def write_spectrum_csv(spectrum: Spectrum, path: str | Path) -> None:
    """One row per eigenpair: index, eigenvalue, then the vector components."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["index", "eigenvalue"] + [f"c{i}" for i in range(spectrum.n)])
        for k in range(spectrum.n):
            w.writerow([k, f"{spectrum.values[k]:.17g}"] + [f"{x:.17g}" for x in spectrum.vectors[:, k]])


def partition_to_dict(partition: EigenspacePartition) -> dict:
    return {
        "tolerance": partition.tolerance,
        "groups": [
            {"eigenvalue": value, "members": [int(i) for i in members]}
            for value, members in zip(partition.values, partition.groups)
        ],
    }


def write_partition_json(partition: EigenspacePartition, path: str | Path) -> None:
    Path(path).write_text(json.dumps(partition_to_dict(partition), indent=2) + "\n")
