"""Preconditioned dense-matrix solvers, matrix functions, and their costs.

Everything here runs classically at desk scale: block encodings are explicit
unitaries (or matrix-level stand-ins), singular-value transforms are exact
SVD arithmetic, and every estimate is checked against a dense oracle.  The
point is faithful bookkeeping — subnormalizations, tolerances, and query
tallies — not quantum speed.
"""
from .numlin import (
    MAX_TOTAL_QUBITS,
    BlockEncoding,
    CostReport,
    LogicalOperator,
    be_lcu,
    be_product,
    extract,
    identity_encoding,
    qft_matrix,
    spectral_norm,
    to_block_encoding,
    to_logical,
    unitary_completion,
)
from .qsvt import OddPolynomial, inverse_poly, qsvt_solve, svt_apply
from .fastinv import (
    DiagonalOracle,
    EllipticSystem,
    OneSparseMatrix,
    build_elliptic,
    fast_invert_diagonal,
    fast_invert_normal,
    fast_invert_one_sparse,
    inversion_success_probability,
)
from .precond import (
    precond_inverse,
    precond_solve,
    sigma_bounds,
    sigma_min_scan,
    sigma_scan_row,
)
from .manybody import (
    GreensTriple,
    GroundState,
    SplitHamiltonian,
    annihilation_operator,
    creation_operator,
    gamma_imag,
    greens_exact,
    greens_preconditioned,
    ground_state,
    hubbard_hamiltonian,
    number_operator,
    number_restricted_alpha,
    query_cost_table,
)
from .matfun import (
    ChebSeries,
    QuadratureRule,
    chebyshev_coeffs,
    choose_T_J,
    contour_nodes,
    exp_contour,
    exp_inverse_transform,
    gauss_legendre,
    gevrey_certificate,
    gevrey_degree,
    purified_gibbs,
    quadrature_error_bound,
    select_oracle,
)
from .cli import ExperimentConfig, emit_report, read_report, run_experiment

__version__ = "0.1.0"

__all__ = [
    "MAX_TOTAL_QUBITS",
    "BlockEncoding",
    "ChebSeries",
    "CostReport",
    "DiagonalOracle",
    "EllipticSystem",
    "ExperimentConfig",
    "GreensTriple",
    "GroundState",
    "LogicalOperator",
    "OddPolynomial",
    "OneSparseMatrix",
    "QuadratureRule",
    "SplitHamiltonian",
    "annihilation_operator",
    "be_lcu",
    "be_product",
    "build_elliptic",
    "chebyshev_coeffs",
    "choose_T_J",
    "contour_nodes",
    "creation_operator",
    "emit_report",
    "exp_contour",
    "exp_inverse_transform",
    "extract",
    "fast_invert_diagonal",
    "fast_invert_normal",
    "fast_invert_one_sparse",
    "gamma_imag",
    "gauss_legendre",
    "gevrey_certificate",
    "gevrey_degree",
    "greens_exact",
    "greens_preconditioned",
    "ground_state",
    "hubbard_hamiltonian",
    "identity_encoding",
    "inverse_poly",
    "inversion_success_probability",
    "number_operator",
    "number_restricted_alpha",
    "precond_inverse",
    "precond_solve",
    "purified_gibbs",
    "qft_matrix",
    "qsvt_solve",
    "quadrature_error_bound",
    "query_cost_table",
    "read_report",
    "run_experiment",
    "select_oracle",
    "sigma_bounds",
    "sigma_min_scan",
    "sigma_scan_row",
    "spectral_norm",
    "svt_apply",
    "to_block_encoding",
    "to_logical",
    "unitary_completion",
]
