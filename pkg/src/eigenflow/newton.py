"""Projective Newton iteration for the eigenpair problem.

One step maps (zeta, w) to (zeta', w') for a fixed matrix A:

    vdot = A_{zeta,w}^{-1} P_perp (A - zeta I) w      (in the complement of w)
    w'   = normalize(w - vdot)
    zeta' = zeta + <(A - zeta I)(w - vdot), w> / <w, w>

The eigenvalue update carries a plus sign: deriving Newton's method for
F(lam, v) = (A - lam I) v with the eigenvector increment constrained to the
complement of v gives lam + <...>, and only that sign converges on the
hand-checkable fixtures (see tests). The map is equivariant under scaling of
(A, zeta) and projective in w, and exact well-posed eigenpairs are fixed
points. Also here: the approximate-eigenpair certificate with contraction
constant c0 = 0.2881 and a residual-targeted refinement driver.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .condition import mu
from .linalg import (
    as_cmatrix,
    as_cvector,
    frobenius_norm,
    projective_distance,
    tangent_basis,
)

__all__ = [
    "C0",
    "NewtonOutcome",
    "newton_step",
    "newton_iterate",
    "pair_dist",
    "certify_approximate",
    "refine",
    "REASON_SINGULAR",
    "REASON_MAX_STEPS",
]

# radius constant of the approximate-eigenpair certificate
C0 = 0.2881

REASON_SINGULAR = "singular_restricted_operator"
REASON_MAX_STEPS = "max_steps_exceeded"


@dataclass(frozen=True)
class NewtonOutcome:
    """Result of applying the Newton map (or a run of it).

    When applied, w has unit norm. When not applied, the input pair is
    returned unchanged and reason names the failure. residual is filled by
    refine for reporting.
    """

    lam: complex
    w: np.ndarray
    applied: bool
    reason: str | None = None
    residual: float | None = None


def _step_arrays(a: np.ndarray, zeta: complex, w: np.ndarray):
    """One Newton step on raw arrays; returns (lam', unit w') or None if the
    restricted operator is singular."""
    n = a.shape[0]
    b = tangent_basis(w)
    shifted = a - zeta * np.eye(n, dtype=np.complex128)
    rw = shifted @ w
    r = b.conj().T @ (shifted @ b)
    rhs = b.conj().T @ rw
    try:
        y = np.linalg.solve(r, rhs)
    except np.linalg.LinAlgError:
        return None
    if not np.all(np.isfinite(y)):
        return None
    x = w - b @ y  # w - vdot, before renormalization
    lam_new = zeta + np.vdot(w, shifted @ x) / np.vdot(w, w)
    nx = np.linalg.norm(x)
    if nx == 0.0 or not np.isfinite(nx):
        return None
    return complex(lam_new), x / nx


def newton_step(a: np.ndarray, zeta: complex, w: np.ndarray) -> NewtonOutcome:
    """Apply the Newton map of A once at (zeta, w)."""
    a = as_cmatrix(a)
    w = as_cvector(w)
    if a.shape[0] != w.shape[0]:
        raise ValueError("matrix and vector dimensions disagree")
    if frobenius_norm(a) == 0.0:
        raise ValueError("Newton map undefined for the zero matrix")
    if not np.any(w):
        raise ValueError("Newton map undefined for the zero vector")
    out = _step_arrays(a, complex(zeta), w)
    if out is None:
        return NewtonOutcome(lam=complex(zeta), w=w, applied=False, reason=REASON_SINGULAR)
    lam_new, w_new = out
    return NewtonOutcome(lam=lam_new, w=w_new, applied=True)


def newton_iterate(a: np.ndarray, zeta: complex, w: np.ndarray, k: int) -> NewtonOutcome:
    """k-fold composition of the Newton map; stops early on failure.

    k = 0 returns the input unchanged with applied = True.
    """
    if k < 0:
        raise ValueError("iteration count must be >= 0")
    lam, vec = complex(zeta), as_cvector(w)
    outcome = NewtonOutcome(lam=lam, w=vec, applied=True)
    for _ in range(k):
        outcome = newton_step(a, outcome.lam, outcome.w)
        if not outcome.applied:
            break
    return outcome


def pair_dist(zeta: complex, w: np.ndarray, lam: complex, v: np.ndarray, scale: float) -> float:
    """Distance between two pairs at matrix scale ||A||_F = scale:

    sqrt(|zeta - lam|^2 / scale^2 + d_P(w, v)^2)

    This is the triple distance with the matrix term dropped and the matrix
    pre-normalized, which makes the certificate scale-invariant.
    """
    if scale <= 0.0:
        raise ValueError("scale must be positive")
    dl = abs(complex(zeta) - complex(lam)) / scale
    dp = projective_distance(w, v)
    return float(np.hypot(dl, dp))


def certify_approximate(
    a: np.ndarray, zeta: complex, w: np.ndarray, lam: complex, v: np.ndarray
) -> bool:
    """True iff (zeta, w) sits inside the certified Newton basin of (lam, v):

    pair_dist((zeta, w), (lam, v)) < c0 / mu(A, lam, v),  c0 = 0.2881.

    (lam, v) must be a well-posed eigenpair of A.
    """
    a = as_cmatrix(a)
    rep = mu(a, lam, v)
    if not rep.well_posed:
        raise ValueError("certificate undefined: (lam, v) is ill-posed")
    res = float(np.linalg.norm(a @ v - lam * np.asarray(v)) / (rep.frobenius * np.linalg.norm(v)))
    if res > 1e-8:
        raise ValueError(f"(lam, v) is not an eigenpair: residual {res:.3e}")
    return pair_dist(zeta, w, lam, v, rep.frobenius) < C0 / rep.mu


def refine(
    a: np.ndarray,
    zeta: complex,
    w: np.ndarray,
    target_residual: float = 1e-12,
    max_steps: int = 20,
) -> NewtonOutcome:
    """Newton-iterate until ||(A - lam I) w|| <= target_residual * ||A||_F.

    Non-convergence or a singular encounter is reported in the outcome, not
    raised. The final residual is always filled in.
    """
    a = as_cmatrix(a)
    fro = frobenius_norm(a)
    if fro == 0.0:
        raise ValueError("refine undefined for the zero matrix")
    lam = complex(zeta)
    vec = as_cvector(w)
    vec = vec / np.linalg.norm(vec)
    res = float(np.linalg.norm(a @ vec - lam * vec))
    for _ in range(max_steps):
        if res <= target_residual * fro:
            return NewtonOutcome(lam=lam, w=vec, applied=True, residual=res)
        step = _step_arrays(a, lam, vec)
        if step is None:
            return NewtonOutcome(
                lam=lam, w=vec, applied=False, reason=REASON_SINGULAR, residual=res
            )
        lam, vec = step
        res = float(np.linalg.norm(a @ vec - lam * vec))
    if res <= target_residual * fro:
        return NewtonOutcome(lam=lam, w=vec, applied=True, residual=res)
    return NewtonOutcome(lam=lam, w=vec, applied=False, reason=REASON_MAX_STEPS, residual=res)
