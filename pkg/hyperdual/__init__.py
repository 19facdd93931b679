"""Hypergraph CSS codes, their dual Ising-like models, and exact-diagonalization checks of the duality."""

__version__ = "0.2.0"

from .duality_lab import (
    DualityReport,
    ScanResult,
    ScanSample,
    check_self_dual_model,
    estimate_tc_robustness,
    export_csv,
    export_report,
    measure_shift,
    scan_transition,
    verify_duality,
)
from .gf2 import BitMatrix, gf2_nullspace, gf2_rank, gf2_rref
from .hypergraph import (
    Hypergraph,
    IndependentSet,
    SelfDualWitness,
    dual,
    format_hypergraph,
    independent_set,
    is_self_dual,
    orthogonal,
    parse_hypergraph,
    read_hypergraph,
    write_hypergraph,
)
from .lattice_gen import (
    Graph,
    LatticeSpec,
    build_graph,
    colex2_hypergraph,
    generate,
    parse_lattice_spec,
    selfdual_chain,
    selfdual_hypercubic,
    selfdual_plaquette,
    toric_code_hypergraph,
)
from .pauli_ham import (
    PauliSum,
    PauliTerm,
    StateVector,
    apply,
    commutes,
    css_hamiltonian,
    dual_model,
    ising_like_hamiltonian,
    perturbed_css_hamiltonian,
    sector_projector_apply,
)
from .spectra import (
    ParametrizedModel,
    SpectrumResult,
    eig_dense,
    fidelity_susceptibility,
    ground_lanczos,
    sector_spectrum,
)

__all__ = [
    "BitMatrix", "gf2_rank", "gf2_rref", "gf2_nullspace",
    "Hypergraph", "IndependentSet", "SelfDualWitness", "dual", "orthogonal", "independent_set",
    "is_self_dual", "parse_hypergraph", "format_hypergraph", "read_hypergraph", "write_hypergraph",
    "Graph", "LatticeSpec", "build_graph", "parse_lattice_spec", "generate", "toric_code_hypergraph",
    "colex2_hypergraph", "selfdual_chain", "selfdual_plaquette", "selfdual_hypercubic",
    "PauliTerm", "PauliSum", "StateVector", "apply", "commutes", "css_hamiltonian",
    "perturbed_css_hamiltonian", "ising_like_hamiltonian", "dual_model", "sector_projector_apply",
    "SpectrumResult", "ParametrizedModel", "eig_dense", "ground_lanczos", "sector_spectrum",
    "fidelity_susceptibility",
    "DualityReport", "ScanResult", "ScanSample", "verify_duality", "measure_shift",
    "check_self_dual_model", "scan_transition", "estimate_tc_robustness", "export_csv", "export_report",
]
