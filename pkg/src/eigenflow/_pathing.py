"""Inner loops of the continuation: compiled with numba when available,
plain Python otherwise. These mirror linalg.tangent_basis,
condition.restricted_operator and newton's step on raw arrays; the tests
pin the twins against the public implementations.

The loop computes smallest singular values by complex Householder
bidiagonalization followed by Sturm bisection on the Golub-Kahan
tridiagonal dilation (no Gram squaring): absolute accuracy at the
eps * ||R|| level like a full SVD, relative bisection tolerance 1e-10,
orders of magnitude below the step rule's built-in margins. The public
smallest_singular_value keeps the LAPACK SVD; the twins are cross-checked
in the tests.

Status codes returned by the loops: 0 converged, 1 budget exceeded,
2 ill-posed encounter, 3 refinement stalled (integral tracker only).
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit

    def _jit(f):
        return njit(cache=True, nogil=True)(f)

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba

    def _jit(f):
        return f

    HAVE_NUMBA = False

OK = 0
BUDGET = 1
ILL_POSED = 2
STALLED = 3


@_jit
def _fro(a):
    total = 0.0
    for i in range(a.shape[0]):
        for j in range(a.shape[1]):
            total += a[i, j].real ** 2 + a[i, j].imag ** 2
    return np.sqrt(total)


@_jit
def _vnorm(v):
    total = 0.0
    for i in range(v.shape[0]):
        total += v[i].real ** 2 + v[i].imag ** 2
    return np.sqrt(total)


@_jit
def _tangent_cols(w):
    """Columns 2..n of the Householder reflector sending w/||w|| to -phase(w1) e1."""
    n = w.shape[0]
    u = w / _vnorm(w)
    a0 = abs(u[0])
    ph = u[0] / a0 if a0 > 0.0 else 1.0 + 0.0j
    u[0] = u[0] + ph
    nrm2 = 0.0
    for i in range(n):
        nrm2 += u[i].real ** 2 + u[i].imag ** 2
    beta = 2.0 / nrm2
    b = np.empty((n, n - 1), np.complex128)
    for j in range(1, n):
        ucj = np.conj(u[j]) * beta
        for i in range(n):
            val = -u[i] * ucj
            if i == j:
                val = val + 1.0
            b[i, j - 1] = val
    return b


@_jit
def _restricted(q, zeta, b):
    """B^H (Q - zeta I) B for a tangent basis B."""
    n = q.shape[0]
    m = n - 1
    t1 = np.dot(q, b)
    for j in range(m):
        for i in range(n):
            t1[i, j] -= zeta * b[i, j]
    bh = np.empty((m, n), np.complex128)
    for i in range(n):
        for j in range(m):
            bh[j, i] = np.conj(b[i, j])
    return np.dot(bh, t1)


@_jit
def _sigma_min(r):
    """Smallest singular value of a complex square matrix.

    m = 1, 2 in closed form; otherwise Householder bidiagonalization and
    bisection on the Golub-Kahan dilation, whose eigenvalues are +-sigma_i.
    """
    m = r.shape[0]
    if m == 1:
        return abs(r[0, 0])
    if m == 2:
        s2 = (
            r[0, 0].real ** 2 + r[0, 0].imag ** 2 + r[0, 1].real ** 2 + r[0, 1].imag ** 2
            + r[1, 0].real ** 2 + r[1, 0].imag ** 2 + r[1, 1].real ** 2 + r[1, 1].imag ** 2
        )
        det = r[0, 0] * r[1, 1] - r[0, 1] * r[1, 0]
        dd = det.real ** 2 + det.imag ** 2
        disc = s2 * s2 - 4.0 * dd
        if disc < 0.0:
            disc = 0.0
        smax2 = 0.5 * (s2 + np.sqrt(disc))
        if smax2 <= 0.0:
            return 0.0
        return np.sqrt(dd / smax2)
    a = r.copy()
    # upper bidiagonalization by alternating left/right reflectors
    for k in range(m):
        nx = 0.0
        for i in range(k, m):
            nx += a[i, k].real ** 2 + a[i, k].imag ** 2
        nx = np.sqrt(nx)
        if nx > 0.0:
            alpha = a[k, k]
            aa = abs(alpha)
            ph = alpha / aa if aa > 0.0 else 1.0 + 0.0j
            v0 = alpha + ph * nx
            vhv = 2.0 * (nx * nx + nx * aa)
            if vhv > 0.0:
                for j in range(k, m):
                    s = np.conj(v0) * a[k, j]
                    for i in range(k + 1, m):
                        s += np.conj(a[i, k]) * a[i, j]
                    s = s * (2.0 / vhv)
                    if j > k:
                        a[k, j] -= s * v0
                        for i in range(k + 1, m):
                            a[i, j] -= s * a[i, k]
                    else:
                        a[k, k] = -ph * nx
        if k < m - 2:
            # right reflector zeroing a[k, k+2:]: P = I - tau u u^H with
            # u = conj(row) - beta e1, so that (row) P = conj(beta) e1^T
            nx = 0.0
            for j in range(k + 1, m):
                nx += a[k, j].real ** 2 + a[k, j].imag ** 2
            nx = np.sqrt(nx)
            if nx > 0.0:
                alpha = a[k, k + 1]
                aa = abs(alpha)
                ph = alpha / aa if aa > 0.0 else 1.0 + 0.0j
                v0 = alpha + ph * nx  # = conj(u_0)
                vhv = 2.0 * (nx * nx + nx * aa)
                if vhv > 0.0:
                    for i in range(k + 1, m):
                        s = a[i, k + 1] * np.conj(v0)
                        for j in range(k + 2, m):
                            s += a[i, j] * np.conj(a[k, j])
                        s = s * (2.0 / vhv)
                        a[i, k + 1] -= s * v0
                        for j in range(k + 2, m):
                            a[i, j] -= s * a[k, j]
                    a[k, k + 1] = -ph * nx
                    for j in range(k + 2, m):
                        a[k, j] = 0.0
    # moduli interleaved into the Golub-Kahan off-diagonal (diagonal is zero)
    c = np.empty(2 * m - 1, np.float64)
    cmax = 0.0
    for k in range(m):
        c[2 * k] = abs(a[k, k])
        if c[2 * k] > cmax:
            cmax = c[2 * k]
        if k < m - 1:
            c[2 * k + 1] = abs(a[k, k + 1])
            if c[2 * k + 1] > cmax:
                cmax = c[2 * k + 1]
    if cmax == 0.0:
        return 0.0
    c2 = c * c
    pivmin = max(1e-40 * cmax * cmax, 1e-305)
    two_m = 2 * m
    lo = 0.0
    # sigma_min is at most the smallest column norm of the bidiagonal
    hi = 2.000000001 * cmax
    for k in range(m):
        cn = c[2 * k] * c[2 * k]
        if k > 0:
            cn += c[2 * k - 1] * c[2 * k - 1]
        cn = np.sqrt(cn) * 1.0000000001
        if cn < hi:
            hi = cn
    target = m + 1
    for _ in range(64):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        # negcount of (T - mid I) via the LDL pivot recurrence
        d = -mid
        cnt = 1 if d < 0.0 else 0
        for i in range(two_m - 1):
            if abs(d) < pivmin:
                d = -pivmin
            d = -mid - c2[i] / d
            if d < 0.0:
                cnt += 1
        if cnt >= target:
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-10 * hi:
            break
    return 0.5 * (lo + hi)


@_jit
def _newton_update(q, zeta, w, b):
    """One Newton step of the eigenpair map at (zeta, w) for matrix q.

    b must be the tangent basis at w. Returns (ok, lam', unit w')."""
    n = q.shape[0]
    m = n - 1
    r = _restricted(q, zeta, b)
    qw = np.dot(q, w)
    for i in range(n):
        qw[i] -= zeta * w[i]
    rhs = np.empty(m, np.complex128)
    for j in range(m):
        acc = 0.0 + 0.0j
        for i in range(n):
            acc += np.conj(b[i, j]) * qw[i]
        rhs[j] = acc
    try:
        y = np.linalg.solve(r, rhs)
    except Exception:
        return False, zeta, w
    x = w.copy()
    for j in range(m):
        yj = y[j]
        for i in range(n):
            x[i] -= b[i, j] * yj
    finite = True
    for i in range(n):
        if not (np.isfinite(x[i].real) and np.isfinite(x[i].imag)):
            finite = False
    if not finite:
        return False, zeta, w
    qx = np.dot(q, x)
    for i in range(n):
        qx[i] -= zeta * x[i]
    num = 0.0 + 0.0j
    den = 0.0
    for i in range(n):
        num += qx[i] * np.conj(w[i])
        den += w[i].real ** 2 + w[i].imag ** 2
    lam_new = zeta + num / den
    nx = _vnorm(x)
    if nx == 0.0 or not np.isfinite(nx):
        return False, zeta, w
    return True, lam_new, x / nx


@_jit
def _residual(q, zeta, w):
    n = q.shape[0]
    qw = np.dot(q, w)
    total = 0.0
    for i in range(n):
        d = qw[i] - zeta * w[i]
        total += d.real ** 2 + d.imag ** 2
    return np.sqrt(total)


@_jit
def _segment_t(tau, alpha, r_norm, s_norm):
    """Euclidean parameter of the segment point at angle tau*alpha from M.

    Equals s/(s + r(sin a cot(tau a) - cos a)): the cot form rewritten as
    sin((1-tau)a)/sin(tau a), stable across (0, 1] and exact at both ends."""
    if tau <= 0.0:
        return 0.0
    if tau >= 1.0:
        return 1.0
    return s_norm / (s_norm + r_norm * (np.sin((1.0 - tau) * alpha) / np.sin(tau * alpha)))


@_jit
def _follow(a, m_mat, lam0, v0, alpha, xi, sing_tol_factor, max_steps, want_trace):
    """The certified continuation loop.

    Returns (code, zeta, w, steps, tau_tr, t_tr, mu_tr, res_tr, dtau_tr);
    trace arrays have length steps when want_trace, else 0.
    """
    n = a.shape[0]
    r_norm = _fro(a)
    s_norm = _fro(m_mat)
    tau = 0.0
    q = m_mat.copy()
    zeta = lam0
    w = v0 / _vnorm(v0)
    cap = 16384 if want_trace else 0
    tau_tr = np.empty(cap, np.float64)
    t_tr = np.empty(cap, np.float64)
    mu_tr = np.empty(cap, np.float64)
    res_tr = np.empty(cap, np.float64)
    dtau_tr = np.empty(cap, np.float64)
    steps = 0
    code = BUDGET
    while steps < max_steps:
        b = _tangent_cols(w)
        smin = _sigma_min(_restricted(q, zeta, b))
        qf = _fro(q)
        if smin <= sing_tol_factor * n * qf or not np.isfinite(smin):
            code = ILL_POSED
            break
        mu_val = qf / smin
        dtau = xi / (alpha * mu_val * mu_val)
        tau_new = tau + dtau
        if tau_new > 1.0:
            tau_new = 1.0
        t = _segment_t(tau_new, alpha, r_norm, s_norm)
        for i in range(n):
            for j in range(n):
                q[i, j] = t * a[i, j] + (1.0 - t) * m_mat[i, j]
        ok, zeta2, w2 = _newton_update(q, zeta, w, b)
        if not ok:
            code = ILL_POSED
            break
        zeta = zeta2
        w = w2
        tau = tau_new
        if want_trace:
            if steps >= cap:
                newcap = cap * 2
                tmp = np.empty(newcap, np.float64)
                tmp[:cap] = tau_tr
                tau_tr = tmp
                tmp = np.empty(newcap, np.float64)
                tmp[:cap] = t_tr
                t_tr = tmp
                tmp = np.empty(newcap, np.float64)
                tmp[:cap] = mu_tr
                mu_tr = tmp
                tmp = np.empty(newcap, np.float64)
                tmp[:cap] = res_tr
                res_tr = tmp
                tmp = np.empty(newcap, np.float64)
                tmp[:cap] = dtau_tr
                dtau_tr = tmp
                cap = newcap
            tau_tr[steps] = tau
            t_tr[steps] = t
            mu_tr[steps] = mu_val
            res_tr[steps] = _residual(q, zeta, w) / qf
            dtau_tr[steps] = dtau
        steps += 1
        if tau == 1.0:
            code = OK
            break
    return (
        code,
        zeta,
        w,
        steps,
        tau_tr[:steps].copy() if want_trace else tau_tr[:0],
        t_tr[:steps].copy() if want_trace else t_tr[:0],
        mu_tr[:steps].copy() if want_trace else mu_tr[:0],
        res_tr[:steps].copy() if want_trace else res_tr[:0],
        dtau_tr[:steps].copy() if want_trace else dtau_tr[:0],
    )


@_jit
def _refine_loop(a, zeta, w, target_abs, max_newton):
    """Newton until the absolute residual meets target_abs; returns
    (code, zeta, w, residual) with code OK, ILL_POSED or STALLED."""
    lam = zeta
    x = w / _vnorm(w)
    res = _residual(a, lam, x)
    for _ in range(max_newton):
        if res <= target_abs:
            return OK, lam, x, res
        b = _tangent_cols(x)
        ok, lam2, x2 = _newton_update(a, lam, x, b)
        if not ok:
            return ILL_POSED, lam, x, res
        lam = lam2
        x = x2
        res = _residual(a, lam, x)
    if res <= target_abs:
        return OK, lam, x, res
    return STALLED, lam, x, res


@_jit
def _track_integral(a, m_mat, lam0, v0, alpha, nodes, target_rel, sing_tol_factor, max_newton):
    """Trapezoid estimate of the squared-condition integral along the true
    path, tracked by oversampled continuation with per-node refinement."""
    n = a.shape[0]
    r_norm = _fro(a)
    s_norm = _fro(m_mat)
    zeta = lam0
    w = v0 / _vnorm(v0)
    total = 0.0
    q = np.empty((n, n), np.complex128)
    for k in range(nodes + 1):
        tau = k / nodes
        t = _segment_t(tau, alpha, r_norm, s_norm)
        for i in range(n):
            for j in range(n):
                q[i, j] = t * a[i, j] + (1.0 - t) * m_mat[i, j]
        qf = _fro(q)
        code, zeta, w, _res = _refine_loop(q, zeta, w, target_rel * qf, max_newton)
        if code != OK:
            return code, 0.0
        b = _tangent_cols(w)
        smin = _sigma_min(_restricted(q, zeta, b))
        if smin <= sing_tol_factor * n * qf or not np.isfinite(smin):
            return ILL_POSED, 0.0
        mu2 = (qf / smin) ** 2
        weight = 0.5 if (k == 0 or k == nodes) else 1.0
        total += weight * mu2
    return OK, total / nodes
