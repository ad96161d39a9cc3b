"""Optimal denoising Dantzig selector (ODDS).

Sparse recovery via the generalized denoising Dantzig selector with an
optimized denoising matrix, brute-force verification tooling for the
recovery theory, and a sparse temporal-difference learning application.
"""

from odds.linalg import (
    entrywise_p_norm,
    load_matrix,
    load_vector,
    normalize_columns,
    sample_gaussian_matrix,
    save_matrix,
    save_vector,
    spectral_norm,
)
from odds.qopt import QOptConfig, QOptResult, optimize_q, qopt_objective
from odds.gdds import (
    RecoveryProblem,
    Solution,
    SolverConfig,
    lp_oracle,
    solve_ds,
    solve_gdds,
)
from odds.gr import (
    GrEstimate,
    GrQuery,
    check_error_bound,
    estimate_gr_constant,
    noise_bound_trial,
)

__all__ = [
    "entrywise_p_norm",
    "load_matrix",
    "load_vector",
    "normalize_columns",
    "sample_gaussian_matrix",
    "save_matrix",
    "save_vector",
    "spectral_norm",
    "QOptConfig",
    "QOptResult",
    "optimize_q",
    "qopt_objective",
    "RecoveryProblem",
    "Solution",
    "SolverConfig",
    "lp_oracle",
    "solve_ds",
    "solve_gdds",
    "GrEstimate",
    "GrQuery",
    "check_error_bound",
    "estimate_gr_constant",
    "noise_bound_trial",
]
