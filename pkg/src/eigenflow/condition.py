"""Condition numbers of eigenpairs.

The central quantity is mu(A, lam, v) = ||A||_F * ||A_{lam,v}^{-1}||, where
A_{lam,v} is (A - lam I) compressed to the Hermitian complement of v. mu is
unitarily invariant, scale invariant in (A, lam), bounded below by 1/sqrt(2)
on the solution variety, and equals ||A||_F / eigengap for normal matrices.

Also provided: eigenvalue/eigenvector condition numbers via left
eigenvectors, the derivative of the solution map, and the max / mean-square
aggregates over a full eigenpair set.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import (
    EigenpairSet,
    as_cmatrix,
    as_cvector,
    frobenius_norm,
    smallest_singular_value,
    tangent_basis,
)

__all__ = [
    "ConditionReport",
    "restricted_operator",
    "mu",
    "mu_normal",
    "left_eigenvector",
    "mu_lambda",
    "solution_derivative",
    "mu_max",
    "mu_av",
    "SINGULARITY_TOL_FACTOR",
]

# sigma_min <= factor * n * ||A||_F counts as singular (roundoff-proportional)
SINGULARITY_TOL_FACTOR = 1e-14


@dataclass(frozen=True)
class ConditionReport:
    """mu together with the ingredients that produced it."""

    mu: float
    sigma_min: float
    well_posed: bool
    frobenius: float


def restricted_operator(a: np.ndarray, lam: complex, v: np.ndarray) -> np.ndarray:
    """Matrix of (A - lam I) compressed to the complement of v.

    Returns B^H (A - lam I) B with B = tangent_basis(v), an (n-1) x (n-1)
    matrix in that orthonormal basis. Its singular values do not depend on
    the scale of v.
    """
    a = as_cmatrix(a)
    v = as_cvector(v)
    n = a.shape[0]
    if n < 2:
        raise ValueError("restricted operator needs n >= 2")
    if a.shape[0] != v.shape[0]:
        raise ValueError("matrix and vector dimensions disagree")
    b = tangent_basis(v)
    shifted = a - lam * np.eye(n, dtype=np.complex128)
    return b.conj().T @ (shifted @ b)


def mu(a: np.ndarray, lam: complex, v: np.ndarray) -> ConditionReport:
    """Condition number of the triple (A, lam, v).

    mu = ||A||_F / sigma_min(restricted_operator); +inf when sigma_min falls
    below the scale-aware singularity tolerance. No residual precondition:
    the continuation loop evaluates mu at approximate pairs off the variety.
    """
    a = as_cmatrix(a)
    fro = frobenius_norm(a)
    if fro == 0.0:
        raise ValueError("mu undefined for the zero matrix")
    smin = smallest_singular_value(restricted_operator(a, lam, v))
    tol = SINGULARITY_TOL_FACTOR * a.shape[0] * fro
    if smin <= tol:
        return ConditionReport(mu=np.inf, sigma_min=smin, well_posed=False, frobenius=fro)
    return ConditionReport(mu=fro / smin, sigma_min=smin, well_posed=True, frobenius=fro)


def mu_normal(eigenvalues, j: int, frobenius: float) -> float:
    """mu for a normal matrix: ||A||_F / min_{k != j} |lam_k - lam_j|.

    +inf when the j-th eigenvalue is duplicated.
    """
    lams = np.asarray(eigenvalues, dtype=np.complex128)
    if lams.ndim != 1 or lams.shape[0] < 2:
        raise ValueError("need at least two eigenvalues")
    if not 0 <= j < lams.shape[0]:
        raise IndexError(f"eigenvalue index {j} out of range")
    gaps = np.abs(np.delete(lams, j) - lams[j])
    gap = float(gaps.min())
    if gap == 0.0:
        return float(np.inf)
    return float(frobenius) / gap


def left_eigenvector(a: np.ndarray, lam: complex, residual_tol: float = 1e-8) -> np.ndarray:
    """Unit-norm u with A^H u = conj(lam) u.

    Computed as the left singular vector of (A - lam I) for its smallest
    singular value. Raises if lam is not an eigenvalue at residual_tol.
    """
    a = as_cmatrix(a)
    n = a.shape[0]
    shifted = a - lam * np.eye(n, dtype=np.complex128)
    u_mat, _, _ = np.linalg.svd(shifted)
    u = u_mat[:, -1]
    fro = frobenius_norm(a)
    res = float(np.linalg.norm(a.conj().T @ u - np.conj(lam) * u))
    if res > residual_tol * fro:
        raise ValueError(
            f"lambda={lam} is not an eigenvalue: left residual {res:.3e} "
            f"exceeds {residual_tol:.1e} * ||A||_F"
        )
    return u


def mu_lambda(a: np.ndarray, lam: complex, v: np.ndarray, u: np.ndarray) -> float:
    """Eigenvalue condition number ||u|| ||v|| / |<u, v>|.

    u is the left eigenvector, passed in explicitly (callers batch its
    computation). <v, u> = 0 signals a multiple eigenvalue and raises.
    """
    v = as_cvector(v)
    u = as_cvector(u)
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        raise ValueError("left/right eigenvectors must be nonzero")
    overlap = abs(np.vdot(u, v))
    if overlap <= 1e-14 * nu * nv:
        raise ValueError("<v, u> = 0: multiple eigenvalue, mu_lambda undefined")
    return float(nu * nv / overlap)


def solution_derivative(
    a: np.ndarray, lam: complex, v: np.ndarray, u: np.ndarray, adot: np.ndarray
) -> tuple[complex, np.ndarray]:
    """Derivative of the solution map at a simple eigenpair, along adot.

    lamdot = <adot v, u> / <v, u>; vdot = -A_{lam,v}^{-1} P_perp adot v,
    returned in ambient coordinates, orthogonal to v. The sign of vdot is
    fixed by differentiating (A - lam I)v = 0 and is validated against a
    central finite-difference oracle in the tests.
    """
    a = as_cmatrix(a)
    v = as_cvector(v)
    u = as_cvector(u)
    adot = as_cmatrix(adot)
    overlap = np.vdot(u, v)  # = <v, u> in the sum x conj(y) convention
    if abs(overlap) == 0.0:
        raise ValueError("<v, u> = 0: ill-posed triple")
    lamdot = complex(np.vdot(u, adot @ v) / overlap)
    b = tangent_basis(v)
    r = restricted_operator(a, lam, v)
    rhs = b.conj().T @ (adot @ v)
    try:
        y = np.linalg.solve(r, -rhs)
    except np.linalg.LinAlgError as exc:
        raise ValueError("ill-posed triple: restricted operator is singular") from exc
    return lamdot, b @ y


def _mu_values(a: np.ndarray, eigenpairs: EigenpairSet) -> np.ndarray:
    a = as_cmatrix(a)
    if eigenpairs.n != a.shape[0]:
        raise ValueError(
            f"eigenpair set is incomplete: {eigenpairs.n} pairs for n={a.shape[0]}"
        )
    return np.array([mu(a, p.lam, p.v).mu for p in eigenpairs.pairs])


def mu_max(a: np.ndarray, eigenpairs: EigenpairSet) -> float:
    """Maximum condition number over a complete eigenpair set."""
    return float(np.max(_mu_values(a, eigenpairs)))


def mu_av(a: np.ndarray, eigenpairs: EigenpairSet) -> float:
    """Mean-square condition number sqrt( (1/n) sum mu_j^2 )."""
    vals = _mu_values(a, eigenpairs)
    return float(np.sqrt(np.mean(vals**2)))
