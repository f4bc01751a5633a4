"""Reference eigensolver, used only by tests and benchmarks.

Eigenvalues come from Hessenberg reduction followed by explicitly shifted
QR iteration with Wilkinson shifts and deflation; eigenvectors from two
steps of inverse iteration with a seeded random start. This path shares no
code with the Newton/continuation modules it validates. There is no global
convergence guarantee; failures are reported per pair, and eigenvalues
closer than CLUSTER_TOL * ||A||_F are flagged so callers can skip
ill-posed instances.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg
from scipy.optimize import linear_sum_assignment

from .ensembles import substream
from .linalg import Eigenpair, EigenpairSet, as_cmatrix, frobenius_norm

__all__ = ["reference_eigenpairs", "match_pairs", "CLUSTER_TOL", "RESIDUAL_TOL"]

CLUSTER_TOL = 1e-10
RESIDUAL_TOL = 1e-8

_DEFLATE_TOL = 4.0 * np.finfo(np.float64).eps
_MAX_SWEEPS_PER_EIG = 40
_VECTOR_SEED = 0x0E16E  # fixed internal seed: the oracle is a pure function of A


def _trailing_eigenvalues(a: complex, b: complex, c: complex, d: complex) -> tuple[complex, complex]:
    """Both eigenvalues of [[a, b], [c, d]], larger-magnitude root first."""
    tr = a + d
    det = a * d - b * c
    disc = np.sqrt(complex(tr * tr - 4.0 * det))
    if abs(tr + disc) >= abs(tr - disc):
        big = (tr + disc) / 2.0
    else:
        big = (tr - disc) / 2.0
    if big == 0.0:
        return 0.0 + 0.0j, 0.0 + 0.0j
    return complex(big), complex(det / big)  # second root via det, avoids cancellation


def _wilkinson_shift(h: np.ndarray) -> complex:
    """Eigenvalue of the trailing 2x2 closer to the last diagonal entry."""
    r1, r2 = _trailing_eigenvalues(h[-2, -2], h[-2, -1], h[-1, -2], h[-1, -1])
    return r1 if abs(r1 - h[-1, -1]) < abs(r2 - h[-1, -1]) else r2


def _qr_eigenvalues(a: np.ndarray) -> tuple[np.ndarray, bool]:
    """Eigenvalues of A by shifted QR on the Hessenberg form.

    Returns (eigenvalues, converged). On a stall the diagonal of the
    remaining block is used and converged is False.
    """
    n = a.shape[0]
    if n == 1:
        return np.array([a[0, 0]]), True
    h = scipy.linalg.hessenberg(a).astype(np.complex128)
    eigs: list[complex] = []
    converged = True
    m = n
    stall = 0
    while m > 0:
        if m == 1:
            eigs.append(complex(h[0, 0]))
            m = 0
            break
        # deflate negligible subdiagonals in the active window
        for k in range(1, m):
            if abs(h[k, k - 1]) <= _DEFLATE_TOL * (abs(h[k - 1, k - 1]) + abs(h[k, k])):
                h[k, k - 1] = 0.0
        if h[m - 1, m - 2] == 0.0:
            eigs.append(complex(h[m - 1, m - 1]))
            m -= 1
            stall = 0
            continue
        if m == 2 or h[m - 2, m - 3] == 0.0:
            r1, r2 = _trailing_eigenvalues(
                h[m - 2, m - 2], h[m - 2, m - 1], h[m - 1, m - 2], h[m - 1, m - 1]
            )
            eigs.extend([r1, r2])
            m -= 2
            stall = 0
            continue
        # locate the start of the lowest unreduced block
        lo = m - 1
        while lo > 0 and h[lo, lo - 1] != 0.0:
            lo -= 1
        shift = _wilkinson_shift(h[lo:m, lo:m])
        stall += 1
        if stall % _MAX_SWEEPS_PER_EIG == 0:
            # exceptional shift to break symmetry-induced stalls
            shift = h[m - 1, m - 1] + abs(h[m - 1, m - 2]) * (0.75 + 0.3j)
        if stall > 3 * _MAX_SWEEPS_PER_EIG:
            eigs.extend(np.diagonal(h[:m, :m]).tolist())
            converged = False
            m = 0
            break
        block = h[lo:m, lo:m]
        q, r = np.linalg.qr(block - shift * np.eye(m - lo, dtype=np.complex128))
        # RQ + shift stays Hessenberg; re-truncate to kill roundoff fill-in
        h[lo:m, lo:m] = np.triu(r @ q, -1) + shift * np.eye(m - lo, dtype=np.complex128)
    return np.array(eigs, dtype=np.complex128), converged


def _inverse_iteration_vector(a: np.ndarray, lam: complex, j: int) -> np.ndarray:
    """Two inverse-iteration steps from a seeded random start."""
    n = a.shape[0]
    rng = substream(_VECTOR_SEED, j, n)
    x = rng.random(n) - 0.5 + 1j * (rng.random(n) - 0.5)
    x /= np.linalg.norm(x)
    fro = frobenius_norm(a)
    shifted = a - lam * np.eye(n, dtype=np.complex128)
    for _ in range(2):
        try:
            y = np.linalg.solve(shifted, x)
        except np.linalg.LinAlgError:
            # exactly singular shift: nudge off the spectrum by one ulp of scale
            bump = 1e-15 * max(fro, 1.0)
            y = np.linalg.solve(shifted + bump * np.eye(n, dtype=np.complex128), x)
        ny = np.linalg.norm(y)
        if not np.isfinite(ny) or ny == 0.0:
            break
        x = y / ny
    return x


def reference_eigenpairs(a: np.ndarray) -> EigenpairSet:
    """Full spectrum and eigenvectors, sorted by (real, imag) eigenvalue."""
    a = as_cmatrix(a)
    n = a.shape[0]
    fro = frobenius_norm(a)
    if n == 1:
        return EigenpairSet(
            pairs=[Eigenpair(lam=complex(a[0, 0]), v=np.ones(1, dtype=np.complex128), residual=0.0)]
        )
    lams, qr_ok = _qr_eigenvalues(a)
    order = np.lexsort((lams.imag, lams.real))
    lams = lams[order]
    gaps_ok = np.ones(n, dtype=bool)
    for j in range(n):
        gap = np.min(np.abs(np.delete(lams, j) - lams[j]))
        if gap <= CLUSTER_TOL * fro:
            gaps_ok[j] = False
    pairs = []
    for j in range(n):
        v = _inverse_iteration_vector(a, lams[j], j)
        residual = float(np.linalg.norm(a @ v - lams[j] * v))
        ok = qr_ok and residual <= RESIDUAL_TOL * fro
        status = "converged" if ok else "no_convergence"
        if not gaps_ok[j]:
            status = "clustered"
            ok = False
        pairs.append(
            Eigenpair(lam=complex(lams[j]), v=v, residual=residual, status=status, converged=ok)
        )
    return EigenpairSet(pairs=pairs)


def match_pairs(computed: EigenpairSet, reference: EigenpairSet):
    """Minimum-total-|dlam| assignment between two equally sized sets.

    Returns (perm, distances) with perm[i] the reference index matched to
    computed pair i.
    """
    if computed.n != reference.n:
        raise ValueError(f"size mismatch: {computed.n} vs {reference.n}")
    lc = computed.lambdas()
    lr = reference.lambdas()
    cost = np.abs(lc[:, None] - lr[None, :])
    rows, cols = linear_sum_assignment(cost)
    perm = np.empty(computed.n, dtype=np.intp)
    perm[rows] = cols
    return perm, cost[rows, perm[rows]]
