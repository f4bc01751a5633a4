"""Certified path following from the grid start system to an input matrix.

The loop advances an angle parameter tau on the segment [M, A] with the
certified step rule dtau = xi / (alpha mu^2), re-centers the pair by one
Newton step of the interpolated matrix after every advance, and stops when
tau reaches 1 exactly. xi = 0.001461 together with the contraction constant
c0 = 0.2881 guarantee every iterate stays an approximate eigenpair of the
next matrix on the segment; the step count K is sandwiched between 434 and
1077 times alpha * integral of mu^2 dtau.

Drivers: single_eigenpair picks one random start index, all_eigenpairs runs
all n starts (optionally in parallel threads; paths are independent) and
refines the results. mu_integral_estimate tracks the exact solution path on
a fine grid for the step-count sandwich.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _pathing
from .linalg import (
    Eigenpair,
    EigenpairSet,
    as_cmatrix,
    as_cvector,
    frobenius_norm,
    sphere_distance,
)
from .condition import SINGULARITY_TOL_FACTOR, mu
from .newton import C0, newton_iterate, pair_dist, refine
from .starts import initial_system

__all__ = [
    "PathConstants",
    "CONSTANTS",
    "PathTrace",
    "PathResult",
    "CONVERGED",
    "BUDGET_EXCEEDED",
    "ILL_POSED",
    "BAD_INPUT",
    "tau_to_t",
    "path_follow",
    "mu_integral_estimate",
    "single_eigenpair",
    "follow_all_paths",
    "all_eigenpairs",
    "DISTINCT_PAIR_TOL",
]


@dataclass(frozen=True)
class PathConstants:
    """The certified constants; fixed, never configurable."""

    eps: float = 0.12
    c_eps: float = 0.12 / 12.5
    xi: float = 0.001461
    c0: float = C0
    k_lower: int = 434
    k_upper: int = 1077


CONSTANTS = PathConstants()

CONVERGED = "converged"
BUDGET_EXCEEDED = "budget_exceeded"
ILL_POSED = "ill_posed_encounter"
BAD_INPUT = "bad_input"

_CODE_TO_STATUS = {
    _pathing.OK: CONVERGED,
    _pathing.BUDGET: BUDGET_EXCEEDED,
    _pathing.ILL_POSED: ILL_POSED,
}

ALPHA_MIN = 1e-8
INITIAL_RESIDUAL_TOL = 1e-10
DISTINCT_PAIR_TOL = 1e-6
DEFAULT_MAX_STEPS = 10_000_000


@dataclass(frozen=True)
class PathTrace:
    """Per-step log: tau and t after the step, the mu that sized the step,
    the relative residual after the Newton update, and the unclamped step
    produced by the rule (delta_tau * alpha * mu^2 = xi identically)."""

    tau: np.ndarray
    t: np.ndarray
    mu: np.ndarray
    residual: np.ndarray
    delta_tau: np.ndarray

    def __len__(self) -> int:
        return self.tau.shape[0]


@dataclass(frozen=True)
class PathResult:
    """Raw output of one continuation run."""

    zeta: complex
    w: np.ndarray
    steps_K: int
    status: str
    trace: PathTrace | None = None

    @property
    def converged(self) -> bool:
        return self.status == CONVERGED


def tau_to_t(tau: float, alpha: float, r: float, s: float) -> float:
    """Map the angle ratio tau to the Euclidean segment parameter t.

    t = s / (s + r (sin(alpha) cot(tau alpha) - cos(alpha))); tau = 0 maps
    to 0 by continuity, tau = 1 to exactly 1. Monotone increasing; r and s
    are the Frobenius norms of the target and start matrices.
    """
    if not 0.0 < alpha < np.pi:
        raise ValueError("alpha must lie strictly between 0 and pi")
    if not 0.0 <= tau <= 1.0:
        raise ValueError("tau must lie in [0, 1]")
    if r <= 0.0 or s <= 0.0:
        raise ValueError("norms must be positive")
    return float(_pathing._segment_t(float(tau), float(alpha), float(r), float(s)))


def _validate_inputs(a, m, lam, v, alpha_min):
    a = as_cmatrix(a)
    m = as_cmatrix(m)
    v = as_cvector(v)
    if a.shape != m.shape or a.shape[0] != v.shape[0]:
        raise ValueError("dimension mismatch between A, M and v")
    if a.shape[0] < 2:
        raise ValueError("continuation needs n >= 2")
    problems = []
    if not np.any(v):
        problems.append("start vector is zero")
        return a, m, v, problems
    if frobenius_norm(a) == 0.0 or frobenius_norm(m) == 0.0:
        problems.append("zero matrix")
        return a, m, v, problems
    vn = v / np.linalg.norm(v)
    res = float(np.linalg.norm(m @ vn - lam * vn))
    if res > INITIAL_RESIDUAL_TOL * frobenius_norm(m):
        problems.append(f"start residual {res:.3e} too large")
    alpha = sphere_distance(m, a)
    if alpha < alpha_min or alpha > np.pi - alpha_min:
        problems.append(f"A and M are (anti)collinear: angle {alpha:.3e}")
    return a, m, v, problems


def path_follow(
    a: np.ndarray,
    m: np.ndarray,
    lam: complex,
    v: np.ndarray,
    *,
    max_steps: int = DEFAULT_MAX_STEPS,
    keep_trace: bool = False,
    alpha_min: float = ALPHA_MIN,
) -> PathResult:
    """Follow the eigenpair of (M, lam, v) along the segment to A.

    Preconditions: (lam, v) is an exact eigenpair of M (relative residual
    <= 1e-10) and A, M span an angle in [alpha_min, pi - alpha_min]. A
    violation returns status bad_input; a singular restricted operator on
    the way returns ill_posed_encounter; more than max_steps iterations
    returns budget_exceeded (the step rule has no recovery branch).
    """
    a, m, v, problems = _validate_inputs(a, m, lam, v, alpha_min)
    vn = v / np.linalg.norm(v) if np.any(v) else v
    if problems:
        return PathResult(zeta=complex(lam), w=vn, steps_K=0, status=BAD_INPUT)
    alpha = sphere_distance(m, a)
    try:
        code, zeta, w, steps, tr_tau, tr_t, tr_mu, tr_res, tr_dtau = _pathing._follow(
            a,
            m,
            complex(lam),
            vn,
            float(alpha),
            CONSTANTS.xi,
            SINGULARITY_TOL_FACTOR,
            int(max_steps),
            bool(keep_trace),
        )
    except Exception:
        return PathResult(zeta=complex(lam), w=vn, steps_K=0, status=ILL_POSED)
    trace = None
    if keep_trace:
        trace = PathTrace(tau=tr_tau, t=tr_t, mu=tr_mu, residual=tr_res, delta_tau=tr_dtau)
    return PathResult(
        zeta=complex(zeta), w=w, steps_K=int(steps), status=_CODE_TO_STATUS[code], trace=trace
    )


def mu_integral_estimate(
    a: np.ndarray,
    m: np.ndarray,
    lam: complex,
    v: np.ndarray,
    nodes: int = 10_000,
    *,
    refine_target: float = 1e-12,
    max_newton_per_node: int = 12,
) -> float:
    """Composite-trapezoid estimate of the integral of mu^2 over tau.

    The exact path is tracked on a uniform tau grid with step 1/nodes,
    Newton-refining the pair to relative residual refine_target at every
    node. Deterministic for fixed inputs.
    """
    if nodes < 2:
        raise ValueError("nodes must be >= 2")
    a, m, v, problems = _validate_inputs(a, m, lam, v, ALPHA_MIN)
    if problems:
        raise ValueError("; ".join(problems))
    alpha = sphere_distance(m, a)
    vn = v / np.linalg.norm(v)
    code, value = _pathing._track_integral(
        a,
        m,
        complex(lam),
        vn,
        float(alpha),
        int(nodes),
        float(refine_target),
        SINGULARITY_TOL_FACTOR,
        int(max_newton_per_node),
    )
    if code != _pathing.OK:
        reason = ILL_POSED if code == _pathing.ILL_POSED else "refinement stalled"
        raise RuntimeError(f"integral tracking failed: {reason}")
    return float(value)


def _bypass_collinear(a: np.ndarray, j: int) -> PathResult:
    """A is (anti)collinear with the diagonal start: its eigenpairs are the
    refined coordinate pairs, no continuation needed."""
    n = a.shape[0]
    e_j = np.zeros(n, dtype=np.complex128)
    e_j[j] = 1.0
    rayleigh = complex(a[j, j])
    out = refine(a, rayleigh, e_j, target_residual=1e-12, max_steps=30)
    status = CONVERGED if out.applied else ILL_POSED
    return PathResult(zeta=out.lam, w=out.w, steps_K=0, status=status)


def single_eigenpair(
    a: np.ndarray,
    rng: np.random.Generator,
    *,
    max_steps: int = DEFAULT_MAX_STEPS,
    keep_trace: bool = False,
) -> PathResult:
    """Follow one path from a uniformly random start index (halts almost
    surely: the segment misses the ill-posed matrices with probability 1)."""
    a = as_cmatrix(a)
    n = a.shape[0]
    if n == 1:
        return PathResult(
            zeta=complex(a[0, 0]), w=np.ones(1, dtype=np.complex128), steps_K=0, status=CONVERGED
        )
    j = int(rng.integers(n))
    sys = initial_system(n)
    alpha = sphere_distance(sys.m, a) if frobenius_norm(a) > 0 else 0.0
    if alpha < ALPHA_MIN or alpha > np.pi - ALPHA_MIN:
        return _bypass_collinear(a, j)
    lam, e_j = sys.start_pairs()[j]
    return path_follow(a, sys.m, lam, e_j, max_steps=max_steps, keep_trace=keep_trace)


def follow_all_paths(
    a: np.ndarray,
    *,
    max_steps: int = DEFAULT_MAX_STEPS,
    keep_trace: bool = False,
    jobs: int = 1,
) -> list[PathResult]:
    """Run the continuation from every start index; results in path order.

    Paths are independent; jobs > 1 runs them on worker threads (the
    compiled loop releases the GIL) without changing any result.
    """
    a = as_cmatrix(a)
    n = a.shape[0]
    if n == 1:
        return [
            PathResult(
                zeta=complex(a[0, 0]),
                w=np.ones(1, dtype=np.complex128),
                steps_K=0,
                status=CONVERGED,
            )
        ]
    sys = initial_system(n)
    alpha = sphere_distance(sys.m, a) if frobenius_norm(a) > 0 else 0.0
    if alpha < ALPHA_MIN or alpha > np.pi - ALPHA_MIN:
        return [_bypass_collinear(a, j) for j in range(n)]
    pairs = sys.start_pairs()

    def run(j: int) -> PathResult:
        lam, e_j = pairs[j]
        return path_follow(a, sys.m, lam, e_j, max_steps=max_steps, keep_trace=keep_trace)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(run, range(n)))
    return [run(j) for j in range(n)]


def all_eigenpairs(
    a: np.ndarray,
    *,
    refine_steps: int = 2,
    refine_target: float | None = None,
    max_steps: int = DEFAULT_MAX_STEPS,
    keep_trace: bool = False,
    jobs: int = 1,
) -> EigenpairSet:
    """All n eigenpairs by continuation from the n grid starts.

    Each converged path is polished (refine_steps fixed Newton steps, or to
    refine_target relative residual when given) and annotated with its
    residual, condition number, step count and status. Pairs whose mutual
    pair distance falls below DISTINCT_PAIR_TOL are flagged as collisions;
    per-path failures leave a partial result with per-pair status.
    """
    a = as_cmatrix(a)
    results = follow_all_paths(a, max_steps=max_steps, keep_trace=keep_trace, jobs=jobs)
    fro = frobenius_norm(a)
    pairs: list[Eigenpair] = []
    for res in results:
        lam, w = res.zeta, res.w
        status = res.status
        if res.converged and a.shape[0] > 1:
            if refine_target is not None:
                out = refine(a, lam, w, target_residual=refine_target, max_steps=20)
            else:
                out = newton_iterate(a, lam, w, refine_steps)
            lam, w = out.lam, out.w  # a failed step leaves the last good state
        residual = float(np.linalg.norm(a @ w - lam * w) / np.linalg.norm(w))
        mu_val = float(mu(a, lam, w).mu) if a.shape[0] > 1 else None
        pairs.append(
            Eigenpair(
                lam=complex(lam),
                v=w / np.linalg.norm(w),
                residual=residual,
                mu=mu_val,
                steps=res.steps_K,
                status=status,
                converged=res.converged,
            )
        )
    if fro > 0:
        for i in range(len(pairs)):
            for j in range(i + 1, len(pairs)):
                d = pair_dist(pairs[i].lam, pairs[i].v, pairs[j].lam, pairs[j].v, fro)
                if d <= DISTINCT_PAIR_TOL:
                    for k in (i, j):
                        pairs[k].status = "collision"
                        pairs[k].converged = False
    return EigenpairSet(pairs=pairs)
