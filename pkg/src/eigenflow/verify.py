"""Named invariant suites, shared by the CLI verify command and the
acceptance tests. Every suite is a deterministic function of its seed;
instances come from per-trial sub-streams, and instances the reference
solver flags (cluster or non-convergence) are resampled deterministically.

Suites and the properties they check:

  lipschitz      mu varies by at most (1+eps) inside a mu*dist <= eps/12.5
                 neighborhood, eps = 0.12
  lowerbound     mu >= 1/sqrt(2) on the solution variety
  normalformula  mu equals ||A||_F / eigengap for normal matrices
  mu2bound       E[mu_av^2 / ||Q||_F^2] <= e n / (2 sigma^2) Monte Carlo
  ksandwich      434 alpha I <= K <= 1077 alpha I for the step count
  newtonquad     quadratic contraction from inside the certified basin
  truncation     the centered rejection sampler keeps at least half the mass
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .condition import mu, mu_av, mu_normal
from .ensembles import (
    GaussianSpec,
    complex_gaussian_vector,
    default_truncation,
    gaussian_matrix,
    random_unitary,
    substream,
)
from .homotopy import CONSTANTS, mu_integral_estimate, path_follow
from .linalg import Triple, frobenius_norm, sphere_distance, triple_dist
from .newton import C0, newton_iterate, pair_dist
from .oracle import reference_eigenpairs
from .starts import initial_system

__all__ = ["VerifyResult", "SUITES", "run_suite", "DEFAULT_SEED"]

DEFAULT_SEED = 0

# sub-stream tags, one per suite
_TAG_LIPSCHITZ = 1
_TAG_LOWERBOUND = 2
_TAG_NORMAL = 3
_TAG_MU2 = 4
_TAG_KSANDWICH = 5
_TAG_NEWTONQUAD = 6
_TAG_TRUNCATION = 7


@dataclass
class VerifyResult:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)


def _oracle_instance(seed: int, tag: int, *key: int, n: int, sigma: float = 1.0):
    """Seeded Gaussian matrix with fully converged, unclustered reference
    eigenpairs; resamples deterministically on flagged instances."""
    for attempt in range(64):
        rng = substream(seed, tag, *key, attempt)
        a = gaussian_matrix(GaussianSpec(center=np.zeros((n, n)), sigma=sigma), rng)
        pairs = reference_eigenpairs(a)
        if pairs.all_converged():
            return a, pairs, rng
    raise RuntimeError(f"no well-posed instance after 64 resamples (tag={tag}, key={key})")


def _unit_perp(v: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Random unit vector orthogonal to v."""
    n = v.shape[0]
    for _ in range(16):
        g = complex_gaussian_vector(n, 1.0, rng)
        g = g - v * (np.vdot(v, g) / np.vdot(v, v))
        ng = np.linalg.norm(g)
        if ng > 1e-8:
            return g / ng
    raise RuntimeError("could not build an orthogonal direction")


def run_lipschitz(seed: int = DEFAULT_SEED, trials: int = 200, n: int = 5) -> VerifyResult:
    eps = CONSTANTS.eps
    c_eps = CONSTANTS.c_eps
    lo, hi = 1.0 / (1.0 + eps), 1.0 + eps
    worst_lo, worst_hi = 1.0, 1.0
    failures = 0
    for i in range(trials):
        a, pairs, rng = _oracle_instance(seed, _TAG_LIPSCHITZ, i, n=n)
        fro = frobenius_norm(a)
        a_hat = a / fro
        p = pairs.pairs[int(rng.integers(n))]
        lam_hat, v = p.lam / fro, p.v
        base = mu(a_hat, lam_hat, v).mu
        # random split of the perturbation budget over matrix/value/vector
        weights = rng.random(3) + 0.05
        weights /= weights.sum()
        target = (0.1 + 0.8 * rng.random()) * c_eps / base
        s_a, s_l, s_v = target * np.sqrt(weights)
        direction = gaussian_matrix(GaussianSpec(center=np.zeros((n, n)), sigma=1.0), rng)
        direction /= frobenius_norm(direction)
        phase = np.exp(2j * np.pi * rng.random())
        u_perp = _unit_perp(v, rng)
        for _ in range(8):
            a2 = a_hat + s_a * direction
            a2 /= frobenius_norm(a2)
            lam2 = lam_hat + s_l * phase
            v2 = np.cos(s_v) * v + np.sin(s_v) * u_perp
            d = triple_dist(Triple(a_hat, lam_hat, v), Triple(a2, lam2, v2))
            if base * d <= c_eps:
                break
            shrink = 0.9 * c_eps / (base * d)
            s_a, s_l, s_v = s_a * shrink, s_l * shrink, s_v * shrink
        else:
            failures += 1
            continue
        ratio = mu(a2, lam2, v2).mu / base
        worst_lo = min(worst_lo, ratio)
        worst_hi = max(worst_hi, ratio)
        if not lo <= ratio <= hi:
            failures += 1
    return VerifyResult(
        name="lipschitz",
        passed=failures == 0,
        details={
            "trials": trials,
            "failures": failures,
            "ratio_range": [worst_lo, worst_hi],
            "allowed": [lo, hi],
        },
    )


def run_lowerbound(seed: int = DEFAULT_SEED, triples: int = 1000, n: int = 5) -> VerifyResult:
    bound = 1.0 / np.sqrt(2.0) - 1e-9
    count = 0
    worst = np.inf
    matrices = (triples + n - 1) // n
    for i in range(matrices):
        a, pairs, _rng = _oracle_instance(seed, _TAG_LOWERBOUND, i, n=n)
        for p in pairs.pairs:
            if count >= triples:
                break
            worst = min(worst, mu(a, p.lam, p.v).mu)
            count += 1
    return VerifyResult(
        name="lowerbound",
        passed=bool(worst >= bound),
        details={"triples": count, "min_mu": worst, "bound": bound},
    )


def run_normalformula(seed: int = DEFAULT_SEED, trials: int = 100, n: int = 6) -> VerifyResult:
    worst = 0.0
    for i in range(trials):
        rng = substream(seed, _TAG_NORMAL, i)
        while True:
            diag = complex_gaussian_vector(n, 1.0, rng)
            gaps = np.abs(diag[:, None] - diag[None, :]) + np.eye(n)
            if gaps.min() > 1e-2:
                break
        u = random_unitary(n, rng)
        a = u @ np.diag(diag) @ u.conj().T
        fro = frobenius_norm(a)
        j = int(rng.integers(n))
        direct = mu(a, diag[j], u[:, j]).mu
        formula = mu_normal(diag, j, fro)
        worst = max(worst, abs(direct - formula) / formula)
    return VerifyResult(
        name="normalformula",
        passed=bool(worst <= 1e-8),
        details={"trials": trials, "max_rel_err": worst, "tol": 1e-8},
    )


def run_mu2bound(
    seed: int = DEFAULT_SEED, samples: int = 500, n: int = 6, sigma: float = 1.0
) -> VerifyResult:
    bound = np.e * n / (2.0 * sigma**2)
    center_rng = substream(seed, _TAG_MU2, 10**6)
    unit_center = gaussian_matrix(GaussianSpec(center=np.zeros((n, n)), sigma=1.0), center_rng)
    unit_center /= frobenius_norm(unit_center)
    stats = {}
    passed = True
    for label, center in (("zero", np.zeros((n, n))), ("unit", unit_center)):
        vals = np.empty(samples)
        resamples = 0
        for i in range(samples):
            for attempt in range(64):
                rng = substream(seed, _TAG_MU2, 1 if label == "zero" else 2, i, attempt)
                g = gaussian_matrix(GaussianSpec(center=np.zeros((n, n)), sigma=sigma), rng)
                q = center + g
                pairs = reference_eigenpairs(q)
                if pairs.all_converged():
                    break
                resamples += 1
            else:
                raise RuntimeError("mu2bound: no well-posed sample after 64 resamples")
            vals[i] = (mu_av(q, pairs) / frobenius_norm(q)) ** 2
        mean = float(vals.mean())
        median = float(np.median(vals))
        ok = mean <= 8.155 and median <= 4.1
        passed = passed and ok
        stats[label] = {
            "mean": mean,
            "median": median,
            "mean_limit": 8.155,
            "median_limit": 4.1,
            "theorem_bound": float(bound),
            "resamples": resamples,
        }
    return VerifyResult(name="mu2bound", passed=passed, details=stats)


def run_ksandwich(
    seed: int = DEFAULT_SEED, runs: int = 20, nodes: int = 10_000
) -> VerifyResult:
    rows = []
    passed = True
    for i in range(runs):
        n = 2 if i < runs // 2 else 4
        a, _pairs, rng = _oracle_instance(seed, _TAG_KSANDWICH, i, n=n)
        sys = initial_system(n)
        j = int(rng.integers(n))
        lam, e_j = sys.start_pairs()[j]
        res = path_follow(a, sys.m, lam, e_j)
        if not res.converged:
            passed = False
            rows.append({"n": n, "status": res.status})
            continue
        alpha = sphere_distance(sys.m, a)
        integral = mu_integral_estimate(a, sys.m, lam, e_j, nodes=nodes)
        low = CONSTANTS.k_lower * alpha * integral - 1.0
        high = CONSTANTS.k_upper * alpha * integral * 1.05
        ok = low <= res.steps_K <= high
        passed = passed and ok
        rows.append(
            {
                "n": n,
                "K": res.steps_K,
                "alpha_I": alpha * integral,
                "low": low,
                "high": high,
                "ok": ok,
            }
        )
    return VerifyResult(name="ksandwich", passed=passed, details={"runs": rows})


def run_newtonquad(
    seed: int = DEFAULT_SEED, trials: int = 100, n: int = 6, min_pass_rate: float = 0.95
) -> VerifyResult:
    good = 0
    floor = 1e-14
    for i in range(trials):
        a, pairs, rng = _oracle_instance(seed, _TAG_NEWTONQUAD, i, n=n)
        fro = frobenius_norm(a)
        p = pairs.pairs[int(rng.integers(n))]
        base = mu(a, p.lam, p.v).mu
        radius = 0.1 * C0 / base
        wl = rng.random()
        s_l = radius * np.sqrt(wl)
        s_v = radius * np.sqrt(1.0 - wl)
        phase = np.exp(2j * np.pi * rng.random())
        u_perp = _unit_perp(p.v, rng)
        zeta = p.lam + s_l * fro * phase
        w = np.cos(s_v) * p.v + np.sin(s_v) * u_perp
        d0 = pair_dist(zeta, w, p.lam, p.v, fro)
        ok = d0 > 0
        for k in (1, 2, 3):
            out = newton_iterate(a, zeta, w, k)
            if not out.applied:
                ok = False
                break
            dk = pair_dist(out.lam, out.w, p.lam, p.v, fro)
            if dk > 0.5 ** (2**k - 1) * d0 + floor:
                ok = False
                break
        if ok:
            good += 1
    rate = good / trials
    return VerifyResult(
        name="newtonquad",
        passed=bool(rate >= min_pass_rate),
        details={"trials": trials, "contracting": good, "rate": rate, "required": min_pass_rate},
    )


def run_truncation(
    seed: int = DEFAULT_SEED, trials: int = 10_000, n: int = 6, sigma: float = 1.0
) -> VerifyResult:
    t = default_truncation(n)
    rng = substream(seed, _TAG_TRUNCATION)
    spec = GaussianSpec(center=np.zeros((n, n)), sigma=sigma)
    accepted = 0
    for _ in range(trials):
        g = gaussian_matrix(spec, rng)
        if frobenius_norm(g) <= t:
            accepted += 1
    rate = accepted / trials
    return VerifyResult(
        name="truncation",
        passed=bool(rate >= 0.5),
        details={"trials": trials, "acceptance_rate": rate, "threshold": t, "required": 0.5},
    )


SUITES = {
    "lipschitz": run_lipschitz,
    "lowerbound": run_lowerbound,
    "normalformula": run_normalformula,
    "mu2bound": run_mu2bound,
    "ksandwich": run_ksandwich,
    "newtonquad": run_newtonquad,
    "truncation": run_truncation,
}


def run_suite(name: str, seed: int = DEFAULT_SEED) -> VerifyResult:
    if name not in SUITES:
        raise KeyError(f"unknown suite '{name}'; choose from {sorted(SUITES)}")
    return SUITES[name](seed)
