"""Spectra and characteristic functions of Sturm-Liouville operators with
distributional (delta-type) potentials on a lasso graph, and recovery of the
characteristic functions from spectra alone."""

from .charfn import (
    charfn,
    charfn_dirichlet,
    charfn_for,
    cycle_charfn,
    free_charfn,
    free_charfn_dirichlet,
    star_charfn,
    star_charfn_dirichlet,
    weyl,
)
from .graph import (
    EdgeSpec,
    GraphSpec,
    PotentialSpec,
    Problem,
    ValidatedGraph,
    common_measure,
    delta_potential,
    graph_from_json,
    graph_to_json,
    lasso_graph,
    parse_rational,
    validate,
    zero_potential,
)
from .oracle import DiscreteOperator, discretize, oracle_eigs, richardson_eigs
from .propagate import (
    FundamentalSolution,
    StateMatrix,
    fundamental_matrix,
    fundamental_solutions,
    phi_pair,
    step_matrix,
)
from .reconstruct import (
    ReconstructionResult,
    compare,
    convergence_table,
    hadamard_reconstruct,
    leading_constant,
    reconstruction_ratio,
    regularize_eigenvalue,
)
from .spectrum import (
    CatalogEntry,
    SpectrumCatalog,
    catalog_spectrum,
    catalog_to_csv,
    compute_catalog,
    entries_from_csv,
    epsilon_diagnostics,
    find_eigenvalues,
    negative_eigenvalues,
    partial_sum,
)
from .trigpoly import (
    AsymptoticFrame,
    TrigPoly,
    base_zeros,
    build_frame,
    expand_free_charfn,
    expand_free_charfn_dirichlet,
    frame_to_json,
    smallest_period,
)

__version__ = "0.1.0"
