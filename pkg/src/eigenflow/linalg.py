"""Complex dense linear algebra primitives and the metric structures used
throughout: Frobenius/Hermitian products, projective and spherical angles,
the combined triple distance, tangent bases of complex projective space,
and smallest singular values.

All functions are pure; arrays are treated as immutable complex128.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Triple",
    "Eigenpair",
    "EigenpairSet",
    "as_cmatrix",
    "as_cvector",
    "frobenius_norm",
    "hermitian_inner",
    "projective_distance",
    "sphere_distance",
    "triple_dist",
    "riemannian_dist",
    "tangent_basis",
    "smallest_singular_value",
]


def as_cmatrix(a) -> np.ndarray:
    """Validate and convert to a square complex128 matrix."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


def as_cvector(v) -> np.ndarray:
    """Validate and convert to a complex128 vector of length >= 1."""
    w = np.asarray(v, dtype=np.complex128)
    if w.ndim != 1 or w.shape[0] < 1:
        raise ValueError(f"expected a vector, got shape {w.shape}")
    if not np.all(np.isfinite(w)):
        raise ValueError("vector entries must be finite")
    return w


@dataclass(frozen=True)
class Triple:
    """A matrix with an eigenvalue-eigenvector candidate (A, lam, v).

    v is a representative of a projective point and must be nonzero.
    """

    matrix: np.ndarray
    lam: complex
    v: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "matrix", as_cmatrix(self.matrix))
        object.__setattr__(self, "v", as_cvector(self.v))
        object.__setattr__(self, "lam", complex(self.lam))
        if self.matrix.shape[0] != self.v.shape[0]:
            raise ValueError("matrix and vector dimensions disagree")
        if not np.any(self.v):
            raise ValueError("eigenvector candidate must be nonzero")

    @property
    def n(self) -> int:
        return self.v.shape[0]

    def residual(self) -> float:
        """Relative residual ||(A - lam I) v|| / (||A||_F ||v||)."""
        a = frobenius_norm(self.matrix)
        if a == 0.0:
            raise ValueError("residual undefined for the zero matrix")
        r = self.matrix @ self.v - self.lam * self.v
        return float(np.linalg.norm(r) / (a * np.linalg.norm(self.v)))


@dataclass
class Eigenpair:
    """One (lam, v) record with its residual; v has unit norm.

    mu/steps/status are filled by the continuation driver; the reference
    solver leaves mu and steps as None and sets converged per pair.
    """

    lam: complex
    v: np.ndarray
    residual: float
    mu: float | None = None
    steps: int | None = None
    status: str = "converged"
    converged: bool = True


@dataclass
class EigenpairSet:
    """A full set of n eigenpair records for one matrix."""

    pairs: list[Eigenpair] = field(default_factory=list)

    @property
    def n(self) -> int:
        return len(self.pairs)

    def lambdas(self) -> np.ndarray:
        return np.array([p.lam for p in self.pairs], dtype=np.complex128)

    def vectors(self) -> np.ndarray:
        return np.column_stack([p.v for p in self.pairs])

    def all_converged(self) -> bool:
        return all(p.converged for p in self.pairs)


def frobenius_norm(a: np.ndarray) -> float:
    """sqrt(sum |a_ij|^2)."""
    return float(np.linalg.norm(np.asarray(a)))


def hermitian_inner(u: np.ndarray, v: np.ndarray) -> complex:
    """Canonical Hermitian inner product sum_i u_i conj(v_i)."""
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape != v.shape:
        raise ValueError(f"length mismatch: {u.shape} vs {v.shape}")
    # np.vdot conjugates its first argument, so swap to conjugate v
    return complex(np.vdot(v, u))


def _clamped_arccos(x: float) -> float:
    return float(np.arccos(min(1.0, max(-1.0, x))))


def projective_distance(v: np.ndarray, v2: np.ndarray) -> float:
    """Angle between the complex lines through v and v2, in [0, pi/2]."""
    nv = np.linalg.norm(v)
    nv2 = np.linalg.norm(v2)
    if nv == 0.0 or nv2 == 0.0:
        raise ValueError("projective distance undefined for the zero vector")
    return _clamped_arccos(abs(hermitian_inner(v, v2)) / (nv * nv2))


def sphere_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Angle between the rays R+ a and R+ b of nonzero matrices, in [0, pi]."""
    na = frobenius_norm(a)
    nb = frobenius_norm(b)
    if na == 0.0 or nb == 0.0:
        raise ValueError("sphere distance undefined for the zero matrix")
    inner = float(np.real(np.sum(np.asarray(a) * np.asarray(b).conj())))
    return _clamped_arccos(inner / (na * nb))


def triple_dist(t1: Triple, t2: Triple) -> float:
    """Combined distance between two triples, scale-normalized:

    sqrt(||A/||A|| - A'/||A'||||_F^2 + |lam/||A|| - lam'/||A'|||^2 + d_P(v,v')^2)
    """
    na = frobenius_norm(t1.matrix)
    nb = frobenius_norm(t2.matrix)
    if na == 0.0 or nb == 0.0:
        raise ValueError("triple distance undefined for a zero matrix")
    dm = np.linalg.norm(t1.matrix / na - t2.matrix / nb)
    dl = abs(t1.lam / na - t2.lam / nb)
    dp = projective_distance(t1.v, t2.v)
    return float(np.sqrt(dm * dm + dl * dl + dp * dp))


def riemannian_dist(t1: Triple, t2: Triple) -> float:
    """Same as triple_dist with the matrix chord replaced by the sphere angle.

    Always >= triple_dist (chords are shorter than their subtending angles).
    """
    na = frobenius_norm(t1.matrix)
    nb = frobenius_norm(t2.matrix)
    if na == 0.0 or nb == 0.0:
        raise ValueError("riemannian distance undefined for a zero matrix")
    ds = sphere_distance(t1.matrix, t2.matrix)
    dl = abs(t1.lam / na - t2.lam / nb)
    dp = projective_distance(t1.v, t2.v)
    return float(np.sqrt(ds * ds + dl * dl + dp * dp))


def tangent_basis(v: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the Hermitian complement of v, as an n x (n-1) matrix.

    Realized as columns 2..n of the Householder reflector sending v/||v|| to
    a multiple of e1; deterministic function of v/||v||. The reflector sign
    is chosen against cancellation: the target is -phase(v1) e1.
    """
    v = as_cvector(v)
    nv = np.linalg.norm(v)
    if nv == 0.0:
        raise ValueError("tangent basis undefined for the zero vector")
    x = v / nv
    n = x.shape[0]
    if n == 1:
        return np.zeros((1, 0), dtype=np.complex128)
    phase = x[0] / abs(x[0]) if x[0] != 0.0 else 1.0
    u = x.copy()
    u[0] += phase  # u = x - beta e1 with beta = -phase(x1)
    h = np.eye(n, dtype=np.complex128) - (2.0 / np.vdot(u, u).real) * np.outer(u, u.conj())
    return h[:, 1:]


def smallest_singular_value(m: np.ndarray) -> float:
    """Smallest singular value via full SVD; 0 for rank-deficient input."""
    m = np.asarray(m, dtype=np.complex128)
    if m.size == 0:
        raise ValueError("smallest singular value undefined for an empty matrix")
    return float(np.linalg.svd(m, compute_uv=False)[-1])
