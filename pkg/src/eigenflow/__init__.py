"""Certified homotopy-continuation eigenpair solver.

Follow the eigenpairs of a fixed well-conditioned diagonal start matrix
along a segment to any complex input matrix with a certified Newton step
rule, plus the condition-number machinery the rule is built on, seeded
Gaussian/truncated ensembles for average-case and smoothed experiments, and
an independent reference eigensolver used only for validation.
"""

from .linalg import (
    Triple,
    Eigenpair,
    EigenpairSet,
    frobenius_norm,
    hermitian_inner,
    projective_distance,
    sphere_distance,
    triple_dist,
    riemannian_dist,
    tangent_basis,
    smallest_singular_value,
)
from .condition import (
    ConditionReport,
    restricted_operator,
    mu,
    mu_normal,
    left_eigenvector,
    mu_lambda,
    solution_derivative,
    mu_max,
    mu_av,
)
from .newton import (
    C0,
    NewtonOutcome,
    newton_step,
    newton_iterate,
    pair_dist,
    certify_approximate,
    refine,
)
from .starts import InitialSystem, grid_points, initial_system, initial_condition_numbers
from .homotopy import (
    PathConstants,
    CONSTANTS,
    PathResult,
    PathTrace,
    tau_to_t,
    path_follow,
    mu_integral_estimate,
    single_eigenpair,
    follow_all_paths,
    all_eigenpairs,
)
from .ensembles import (
    GaussianSpec,
    substream,
    complex_gaussian,
    gaussian_matrix,
    truncated_gaussian_matrix,
    default_truncation,
    random_unitary,
)
from .oracle import reference_eigenpairs, match_pairs

__version__ = "0.1.0"

__all__ = [
    "Triple",
    "Eigenpair",
    "EigenpairSet",
    "frobenius_norm",
    "hermitian_inner",
    "projective_distance",
    "sphere_distance",
    "triple_dist",
    "riemannian_dist",
    "tangent_basis",
    "smallest_singular_value",
    "ConditionReport",
    "restricted_operator",
    "mu",
    "mu_normal",
    "left_eigenvector",
    "mu_lambda",
    "solution_derivative",
    "mu_max",
    "mu_av",
    "C0",
    "NewtonOutcome",
    "newton_step",
    "newton_iterate",
    "pair_dist",
    "certify_approximate",
    "refine",
    "InitialSystem",
    "grid_points",
    "initial_system",
    "initial_condition_numbers",
    "PathConstants",
    "CONSTANTS",
    "PathResult",
    "PathTrace",
    "tau_to_t",
    "path_follow",
    "mu_integral_estimate",
    "single_eigenpair",
    "follow_all_paths",
    "all_eigenpairs",
    "GaussianSpec",
    "substream",
    "complex_gaussian",
    "gaussian_matrix",
    "truncated_gaussian_matrix",
    "default_truncation",
    "random_unitary",
    "reference_eigenpairs",
    "match_pairs",
]
