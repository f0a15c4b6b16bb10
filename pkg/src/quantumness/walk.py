"""Classical stationary and quantum long-time-average node distributions.

The quantum walk is ``U(t) = exp(-i H_Q t)`` with ``H_Q`` the symmetric
normalized Laplacian. Its infinite-time average occupation splits into the
classical (degree) distribution plus a correction whose weight is the
quantumness ``eps = 1 - <phi_0|rho|phi_0>``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .ensembles import entropy_bound
from .errors import DisconnectedGraphError, NumericalError
from .graph import Graph, degrees, is_connected
from .spectral import (
    eigendecompose,
    ground_state,
    group_eigenspaces,
    quantum_hamiltonian,
    spectral_gap,
)

__all__ = [
    "DensityState",
    "WalkSummary",
    "uniform_state",
    "node_state",
    "ground_density_state",
    "classical_stationary",
    "quantum_long_time_average",
    "quantumness_uniform",
    "energy",
    "energy_uniform",
    "finite_time_average",
]

# eps at or below this leaves the quantum correction undefined
EPS_FLOOR = 1e-12


@dataclass(frozen=True, eq=False)
class DensityState:
    """Real initial walker state: a unit vector or a unit-trace PSD matrix.

    Use :meth:`pure` / :meth:`mixed` rather than the constructor.
    """

    vector: np.ndarray | None = None
    matrix: np.ndarray | None = None

    @classmethod
    def pure(cls, psi) -> DensityState:
        psi = np.array(psi, dtype=float).ravel()
        norm = np.linalg.norm(psi)
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"pure state must have unit norm, got {norm!r}")
        psi.setflags(write=False)
        return cls(vector=psi)

    @classmethod
    def mixed(cls, rho) -> DensityState:
        rho = np.array(rho, dtype=float)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {rho.shape}")
        if np.max(np.abs(rho - rho.T)) > 1e-12:
            raise ValueError("density matrix must be symmetric")
        if abs(np.trace(rho) - 1.0) > 1e-12:
            raise ValueError(f"density matrix must have unit trace, got {np.trace(rho)!r}")
        if np.linalg.eigvalsh(rho)[0] < -1e-10:
            raise ValueError("density matrix must be positive semidefinite")
        rho = 0.5 * (rho + rho.T)
        rho.setflags(write=False)
        return cls(matrix=rho)

    @property
    def n(self) -> int:
        return len(self.vector) if self.vector is not None else self.matrix.shape[0]

    @property
    def is_pure(self) -> bool:
        return self.vector is not None

    def is_uniform(self) -> bool:
        if not self.is_pure:
            return False
        return bool(np.allclose(np.abs(self.vector), 1.0 / np.sqrt(self.n), rtol=0, atol=1e-12)
                    and (np.all(self.vector > 0) or np.all(self.vector < 0)))

    def to_matrix(self) -> np.ndarray:
        if self.is_pure:
            return np.outer(self.vector, self.vector)
        return np.array(self.matrix)

    def expectation(self, op: np.ndarray) -> float:
        """``tr(op rho)`` for a real symmetric ``op``."""
        if self.is_pure:
            return float(self.vector @ op @ self.vector)
        return float(np.sum(op * self.matrix))

    def overlap(self, v: np.ndarray) -> float:
        """``<v|rho|v>``."""
        if self.is_pure:
            return float(v @ self.vector) ** 2
        return float(v @ self.matrix @ v)

    def pure_components(self) -> tuple[np.ndarray, np.ndarray]:
        """Ensemble weights and unit vectors (columns) decomposing the state."""
        if self.is_pure:
            return np.ones(1), self.vector[:, None]
        p, u = np.linalg.eigh(self.matrix)
        keep = p > 1e-15
        return p[keep], u[:, keep]


def uniform_state(n: int) -> DensityState:
    """Even superposition ``|1>/sqrt(n)``."""
    return DensityState.pure(np.full(n, 1.0 / np.sqrt(n)))


def node_state(n: int, i: int) -> DensityState:
    psi = np.zeros(n)
    psi[i] = 1.0
    return DensityState.pure(psi)


def ground_density_state(g: Graph) -> DensityState:
    return DensityState.pure(ground_state(g))


def _require_connected(g: Graph) -> np.ndarray:
    if g.n < 2:
        raise DisconnectedGraphError(f"walks need at least 2 nodes, got {g.n}")
    if not is_connected(g):
        raise DisconnectedGraphError("graph is disconnected; extract the giant component first")
    return degrees(g).d


def _check_dim(g: Graph, state: DensityState) -> None:
    if state.n != g.n:
        raise ValueError(f"state has dimension {state.n} but graph has {g.n} nodes")


def _as_distribution(p: np.ndarray, what: str, neg_tol: float = 1e-12) -> np.ndarray:
    if np.min(p) < -neg_tol:
        raise NumericalError(f"{what} has a negative entry {np.min(p):.3e}")
    p = np.clip(p, 0.0, None)
    if abs(p.sum() - 1.0) > 1e-9:
        raise NumericalError(f"{what} sums to {p.sum():.15g}, not 1")
    return p


def classical_stationary(g: Graph) -> np.ndarray:
    """Normalized degrees ``d_i / sum_j d_j``."""
    d = _require_connected(g)
    return d / d.sum()


def quantumness_uniform(g: Graph) -> float:
    """Quantumness of the even superposition, ``1 - <sqrt d>^2 / <d>``."""
    _require_connected(g)
    dv = degrees(g)
    return max(0.0, 1.0 - dv.mean_root_degree**2 / dv.mean_degree)


def energy(g: Graph, state: DensityState) -> float:
    """``tr(H_Q rho)``."""
    _check_dim(g, state)
    return state.expectation(quantum_hamiltonian(g))


def energy_uniform(g: Graph) -> float:
    """Energy of the even superposition, ``1 - (1/N) sum_ij A_ij / sqrt(d_i d_j)``."""
    d = _require_connected(g)
    s = 1.0 / np.sqrt(d)
    return float(1.0 - (s @ g.weights @ s) / g.n)


@dataclass(frozen=True, eq=False)
class WalkSummary:
    """Long-time-average decomposition of one (graph, initial state) walk.

    ``p_correction`` and ``bound_ratio`` are ``None`` when the quantumness is
    zero (to within 1e-12), since the correction is then undefined.
    ``entropy_bound`` is only filled in for the even superposition state.
    """

    labels: tuple[str, ...]
    degrees: np.ndarray
    p_classical: np.ndarray
    p_quantum: np.ndarray
    p_correction: np.ndarray | None
    quantumness: float
    energy: float
    gap: float
    bound_ratio: float | None
    entropy_bound: float | None
    tolerance: float
    eigenspace_sizes: list[int] = field(default_factory=list)

    @property
    def energy_over_gap(self) -> float:
        return self.energy / self.gap

    def to_dict(self) -> dict:
        return {
            "n": len(self.labels),
            "quantumness": self.quantumness,
            "energy": self.energy,
            "gap": self.gap,
            "energy_over_gap": self.energy_over_gap,
            "bound_ratio": self.bound_ratio,
            "entropy_bound": self.entropy_bound,
            "correction_defined": self.p_correction is not None,
            "tolerance": self.tolerance,
            "n_eigenspaces": len(self.eigenspace_sizes),
            "max_degeneracy": max(self.eigenspace_sizes) if self.eigenspace_sizes else None,
        }

    def node_rows(self) -> list[dict]:
        """Per-node table: label, degree, P_C, P_Q, correction, correction / P_C."""
        rows = []
        for i, label in enumerate(self.labels):
            corr = None if self.p_correction is None else float(self.p_correction[i])
            rows.append({
                "node": label,
                "degree": float(self.degrees[i]),
                "p_classical": float(self.p_classical[i]),
                "p_quantum": float(self.p_quantum[i]),
                "p_correction": corr,
                "correction_ratio": None if corr is None else corr / float(self.p_classical[i]),
            })
        return rows


def _eigenspace_weights(vectors: np.ndarray, groups, state: DensityState) -> list[np.ndarray]:
    """Diagonal of ``Pi_j rho Pi_j`` for every eigenspace ``j``."""
    out = []
    if state.is_pure:
        coeff = vectors.T @ state.vector
        for members in groups:
            out.append((vectors[:, members] @ coeff[members]) ** 2)
    else:
        for members in groups:
            v = vectors[:, members]
            m = v.T @ state.matrix @ v
            out.append(np.einsum("ik,kl,il->i", v, m, v))
    return out


def quantum_long_time_average(g: Graph, state: DensityState | None = None,
                              tol: float | None = None) -> WalkSummary:
    """Project the initial state onto each eigenspace of ``H_Q`` and mix.

    ``state`` defaults to the even superposition. ``tol`` is the eigenvalue
    grouping tolerance (see :func:`quantumness.spectral.group_eigenspaces`).
    """
    d = _require_connected(g)
    if state is None:
        state = uniform_state(g.n)
    _check_dim(g, state)

    h = quantum_hamiltonian(g)
    spectrum = eigendecompose(h)
    partition = group_eigenspaces(spectrum, tol)
    gap = spectral_gap(partition)

    parts = _eigenspace_weights(spectrum.vectors, partition.groups, state)
    p_quantum = _as_distribution(np.sum(parts, axis=0), "P_Q")
    p_classical = d / d.sum()

    eps = 1.0 - state.overlap(ground_state(g))
    if eps < -1e-12 or eps > 1 + 1e-12:
        raise NumericalError(f"quantumness {eps!r} outside [0, 1]")
    eps = min(max(eps, 0.0), 1.0)

    e = state.expectation(h)
    if e < -1e-10:
        raise NumericalError(f"negative energy {e!r}")
    e = max(e, 0.0)

    p_corr = None
    bound_ratio = None
    if eps > EPS_FLOOR:
        excited = np.sum(parts[1:], axis=0)
        # equals excited / eps in exact arithmetic; dividing by the summed
        # weight keeps the normalization exact when eps is tiny
        p_corr = _as_distribution(excited / excited.sum(), "quantum correction", neg_tol=1e-12 / eps)
        bound_ratio = e / (gap * eps)

    ebound = entropy_bound(g) if state.is_uniform() else None
    return WalkSummary(
        labels=g.labels,
        degrees=d,
        p_classical=p_classical,
        p_quantum=p_quantum,
        p_correction=p_corr,
        quantumness=eps,
        energy=e,
        gap=gap,
        bound_ratio=bound_ratio,
        entropy_bound=ebound,
        tolerance=partition.tolerance,
        eigenspace_sizes=partition.sizes(),
    )


def finite_time_average(g: Graph, state: DensityState, T: float, samples: int,
                        chunk: int = 2048) -> np.ndarray:
    """Riemann average of node occupations over ``samples`` uniform times in [0, T].

    Brute-force check on :func:`quantum_long_time_average`: evolves every
    sample time exactly in the eigenbasis, with no eigenspace grouping.
    """
    if not T > 0:
        raise ValueError(f"T must be positive, got {T}")
    if samples < 2:
        raise ValueError(f"need at least 2 samples, got {samples}")
    _require_connected(g)
    _check_dim(g, state)

    spectrum = eigendecompose(quantum_hamiltonian(g))
    lam, vec = spectrum.values, spectrum.vectors
    times = np.linspace(0.0, T, samples)
    weights, components = state.pure_components()
    coeffs = vec.T @ components  # eigenbasis amplitudes, one column per component

    acc = np.zeros(g.n)
    for start in range(0, samples, chunk):
        t = times[start:start + chunk]
        phase = np.exp(-1j * np.outer(lam, t))  # (n, chunk)
        for w, c in zip(weights, coeffs.T):
            amp = vec @ (phase * c[:, None])
            acc += w * np.sum(amp.real**2 + amp.imag**2, axis=1)
    return _as_distribution(acc / samples, "time-averaged distribution")
