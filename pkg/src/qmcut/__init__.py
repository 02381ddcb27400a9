"""Certified approximation algorithms for Quantum Max-Cut and EPR Hamiltonians.

The pipeline: parse a weighted graph, solve the level-2 moment-matrix
relaxation (an upper bound on the maximum eigenvalue), round to a product
state by Gaussian projection, and improve it with a circuit of commuting
two-qubit rotations whose angles come from the relaxation's edge values.
An exact-diagonalization oracle cross-validates everything at desk scale.
"""

from .graphs import (
    GraphFormatError,
    WeightedGraph,
    neighbors,
    normalize_weights,
    parse_graph,
    serialize_graph,
)
from .paulis import (
    Monomial,
    SignedMonomial,
    constraint_classes,
    enumerate_monomials,
    multiply,
)
from .sdp import (
    SDPProblem,
    SDPSolution,
    SolverError,
    build_sdp,
    check_monogamy,
    edge_values,
    export_sdp_text,
    solve_sdp,
)
from .rounding import (
    GramVectors,
    gp_round,
    hyp2f1_half_half_fivehalf,
    level1_gram,
    product_edge_energy,
    product_energy_bound,
)
from .circuits import (
    BETA_STAR,
    EPR_RATIO,
    GUARANTEED_RATIO,
    CircuitPlan,
    EnergyReport,
    epr_angles,
    epr_edge_energy_analytic,
    epr_edge_energy_product_form,
    optimize_beta,
    qmc_angles,
    qmc_edge_energy_expected,
    run_epr,
    run_qmc,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
