"""Start systems for the continuation: the square grid S_k, the diagonal
matrix D_n built from its first n points, and the normalized start matrix
M = D_n / ||D_n||_F whose eigenpairs (m_jj, e_j) seed every path.

The grid order is frozen to (p, q) lexicographic with p major; step counts
and all seeded fixtures depend on it. Guaranteed facts: entries pairwise
distinct, minimum eigengap exactly 2/k, ||D_n||_F = Theta(sqrt(n)), and
mu(D_n, z_j, e_j) = Theta(n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .condition import mu_normal
from .linalg import frobenius_norm

__all__ = ["InitialSystem", "grid_points", "initial_system", "initial_condition_numbers"]


@dataclass(frozen=True)
class InitialSystem:
    """D_n, its normalization M, and the grid parameter k = ceil(sqrt(n)) - 1."""

    n: int
    k: int
    d_n: np.ndarray
    m: np.ndarray

    @property
    def diagonal(self) -> np.ndarray:
        return np.diagonal(self.d_n)

    def start_pairs(self):
        """The n exact eigenpairs (m_jj, e_j) of M."""
        eye = np.eye(self.n, dtype=np.complex128)
        diag = np.diagonal(self.m)
        return [(complex(diag[j]), eye[:, j]) for j in range(self.n)]


def grid_points(k: int) -> np.ndarray:
    """The (k+1)^2 points (-1 + 2p/k) + i(-1 + 2q/k), p major, q minor."""
    if k < 1:
        raise ValueError("grid parameter k must be >= 1")
    coords = -1.0 + 2.0 * np.arange(k + 1) / k
    p, q = np.meshgrid(coords, coords, indexing="ij")
    return (p + 1j * q).reshape(-1)


def initial_system(n: int) -> InitialSystem:
    """Build D_n from the first n grid points and normalize it.

    n = 1 is rejected: the grid formula needs k >= 1 and the drivers handle
    the trivial 1x1 eigenpair themselves.
    """
    if n < 2:
        raise ValueError("initial system needs n >= 2")
    k = math.isqrt(n - 1)  # = ceil(sqrt(n)) - 1, in exact integer arithmetic
    pts = grid_points(k)[:n]
    d_n = np.diag(pts).astype(np.complex128)
    m = d_n / frobenius_norm(d_n)
    return InitialSystem(n=n, k=k, d_n=d_n, m=m)


def initial_condition_numbers(n: int) -> np.ndarray:
    """mu(D_n, z_j, e_j) for j = 1..n via the normal-matrix formula."""
    sys = initial_system(n)
    diag = sys.diagonal
    fro = frobenius_norm(sys.d_n)
    return np.array([mu_normal(diag, j, fro) for j in range(n)])
