"""Classical vs quantum long-time walks on weighted networks."""

from .errors import DisconnectedGraphError, GraphFormatError, NumericalError
from .graph import (
    DegreeVector,
    Graph,
    degrees,
    from_edge_list,
    generate_ba,
    generate_er,
    generate_ring,
    generate_rg,
    generate_star,
    generate_ws,
    giant_component,
    karate_club,
    read_edge_list,
    to_edge_list,
)
from .spectral import eigendecompose, ground_state, group_eigenspaces, quantum_hamiltonian, spectral_gap
from .walk import (
    DensityState,
    WalkSummary,
    classical_stationary,
    energy,
    finite_time_average,
    node_state,
    quantum_long_time_average,
    quantumness_uniform,
    uniform_state,
)
from .ensembles import entropy_bound, quantumness_ba_analytic, quantumness_poisson, renyi_entropy
from .analysis import fit_correction_exponent, l1_distance

__version__ = "0.1.0"
