"""Numerical validation of exact verdicts.

Every probe reports what it measured; nothing here feeds back into the
exact decision procedures.  Probes evaluate flows through the closed-form
evaluator only, on explicit time grids, and never extrapolate beyond the
largest time they actually visited.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import lgamma, pi

import numpy as np

from .errors import NotStable, PreconditionViolated
from .flows import FlowEvaluator
from .invariants import (
    distortion_subspace,
    is_bounded,
    minimal_period,
    top_rate,
    top_size,
)

__all__ = [
    "ConjugacyReport",
    "verify_conjugacy",
    "LipschitzReport",
    "lipschitz_probe",
    "DistortionReport",
    "distortion_probe",
    "DecayReport",
    "decay_rate_probe",
    "PeriodReport",
    "period_probe",
]

_PROBE_GUARD = 1e9


def _sample_points(dim, n, seed, radii=(0.25, 4.0)):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, dim))
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    scales = np.exp(rng.uniform(np.log(radii[0]), np.log(radii[1]), size=n))
    return X * scales[:, None]


# ---------------------------------------------------------------------------
# conjugacy / equivalence residual


@dataclass(frozen=True)
class ConjugacyReport:
    name: str
    residual: float
    round_trip: float
    n_points: int
    times: tuple
    worst_time: float

    def to_json(self):
        return {
            "name": self.name,
            "residual": self.residual,
            "round_trip": self.round_trip,
            "n_points": self.n_points,
            "times": list(self.times),
            "worst_time": self.worst_time,
        }


def verify_conjugacy(hmap, times=None, n_points=32, seed=0, radii=(0.25, 4.0)):
    """Relative defect of h(Phi_t x) = Psi_{tau(x,t)} h(x) over a sample.

    Also measures the round trip |h^{-1}(h(x)) - x|.  The residual is the
    max over points and grid times of |lhs - rhs| / (1 + |rhs|).
    """
    if times is None:
        times = np.linspace(-5.0, 5.0, 11)
    times = np.asarray(times, dtype=float)
    X = _sample_points(hmap.source_flow.dim, n_points, seed, radii)
    HX = hmap.forward_batch(X)
    back = hmap.inverse_batch(HX)
    round_trip = float(
        np.max(np.linalg.norm(back - X, axis=1) / (1.0 + np.linalg.norm(X, axis=1)))
    )
    worst = 0.0
    worst_t = 0.0
    for t in times:
        ts = np.full(len(X), float(t))
        lhs = hmap.forward_batch(hmap.source_flow.apply_batch(ts, X))
        taus = hmap.tau_batch(X, ts)
        rhs = hmap.target_flow.apply_batch(taus, HX)
        err = np.linalg.norm(lhs - rhs, axis=1) / (1.0 + np.linalg.norm(rhs, axis=1))
        m = float(np.max(err))
        if m > worst:
            worst, worst_t = m, float(t)
    return ConjugacyReport(
        hmap.name, worst, round_trip, len(X), tuple(float(t) for t in times), worst_t
    )


# ---------------------------------------------------------------------------
# Lipschitz behaviour across shrinking scales


@dataclass(frozen=True)
class LipschitzReport:
    name: str
    radii: tuple
    uniform_ratios: tuple
    pointwise_ratios: tuple
    uniform_trend: str
    pointwise_trend: str

    def to_json(self):
        return {
            "name": self.name,
            "radii": list(self.radii),
            "uniform_ratios": list(self.uniform_ratios),
            "pointwise_ratios": list(self.pointwise_ratios),
            "uniform_trend": self.uniform_trend,
            "pointwise_trend": self.pointwise_trend,
        }


def _trend(values):
    n = len(values)
    if n < 6:
        return "inconclusive"
    k = n // 3
    first = float(np.mean(values[:k]))
    last = float(np.mean(values[-k:]))
    if last > 1.5 * first:
        return "growing"
    if last <= 1.2 * first:
        return "bounded"
    return "inconclusive"


def lipschitz_probe(hmap, n_scales=24, pairs=16, seed=0):
    """Difference quotients of h on spheres of radius 2^-k.

    uniform_ratios[k] ~ sup |h(x)-h(y)|/|x-y| with |x| = 2^-k and y near x;
    pointwise_ratios[k] ~ sup |h(x)|/|x| on the same sphere.  The trends
    separate Lipschitz maps (bounded) from merely log-Lipschitz ones
    (growing as the scale shrinks).
    """
    rng = np.random.default_rng(seed)
    d = hmap.source_flow.dim
    # coordinate-aligned base/offset pairs catch maps whose quotient only
    # blows up along thin cones that random directions never hit
    eye = np.eye(d)
    bases = np.repeat(eye, d, axis=0)
    offs = np.tile(eye, (d, 1))
    radii, uni, ptw = [], [], []
    for k in range(n_scales):
        r = 2.0 ** (-k)
        X = rng.standard_normal((pairs, d))
        X = r * X / np.linalg.norm(X, axis=1, keepdims=True)
        D = rng.standard_normal((pairs, d))
        D = (0.01 * r) * D / np.linalg.norm(D, axis=1, keepdims=True)
        X = np.vstack([X, r * bases])
        Y = np.vstack([X[:pairs] + D, r * bases + (0.01 * r) * offs])
        HX = hmap.forward_batch(X)
        HY = hmap.forward_batch(Y)
        q = np.linalg.norm(HX - HY, axis=1) / np.linalg.norm(X - Y, axis=1)
        p = np.linalg.norm(HX, axis=1) / np.linalg.norm(X, axis=1)
        radii.append(r)
        uni.append(float(np.max(q)))
        ptw.append(float(np.max(p)))
    return LipschitzReport(
        hmap.name, tuple(radii), tuple(uni), tuple(ptw), _trend(uni), _trend(ptw)
    )


# ---------------------------------------------------------------------------
# distortion of relative distances under time reparametrization


@dataclass(frozen=True)
class DistortionReport:
    member: bool
    branch: str
    estimate: float
    threshold: float
    passed: bool
    detail: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "member": self.member,
            "branch": self.branch,
            "estimate": self.estimate,
            "threshold": self.threshold,
            "passed": self.passed,
            "detail": self.detail,
        }


def _choose_witness_block(spec):
    """A largest block at the top growth rate; prefer one without rotation
    (its probe schedule needs no subsequence)."""
    lam = top_rate(spec)
    M = top_size(spec)
    cands = [b for b in spec.blocks if b.re == lam and b.size == M]
    cands.sort(key=lambda b: (b.im != 0, b.im))
    blk = cands[0]
    off = 0
    for b in spec.blocks:
        if b is blk:
            break
        off += b.dim
    return blk, off


def distortion_probe(
    spec,
    x,
    member_bound=0.45,
    outside_bound=0.05,
    eps=0.5,
    t_max=200.0,
    n_grid=400,
    seed=0,
):
    """Measures whether relative distances near x survive every time
    reparametrization of the comparison orbit.

    For x inside the distortion-carrying subspace the probe builds the
    explicit partner y at distance eps/2 and follows the documented
    schedule rho(s) = s - (M-1) log s + log (M-1)! in normalized time,
    reporting the max ratio |Phi_s x - Phi_rho y| / |Phi_rho y| over a log
    grid on [1, t_max] (plus the rotation-aligned subsequence when the
    witness block rotates).  Outside the subspace it checks that the ratio
    at equal times dies off on shrinking balls around x.
    """
    sub = distortion_subspace(spec)  # raises NotStable on non-stable input
    x = np.asarray(x, dtype=float)
    if x.shape != (spec.dim,):
        raise PreconditionViolated(f"point must have shape ({spec.dim},)")
    scale = max(1.0, float(np.max(np.abs(x))) if x.size else 1.0)
    inside = set(sub.coords)
    member = all(
        abs(x[i]) <= 1e-12 * scale for i in range(spec.dim) if i not in inside
    )
    flow = FlowEvaluator.from_spec(spec, guard=_PROBE_GUARD)
    lam = abs(float(top_rate(spec)))
    M = top_size(spec)
    blk, off = _choose_witness_block(spec)
    m = blk.size
    rot = float(blk.im) / lam  # rotation rate in normalized time

    if not member:
        rng = np.random.default_rng(seed)
        s_grid = np.geomspace(1.0, t_max, n_grid)
        shells = []
        base = 0.1 * max(1.0, float(np.linalg.norm(x)))
        for k in range(6):
            r = base * 2.0**-k
            best = 0.0
            for _ in range(8):
                eta = rng.standard_normal(spec.dim)
                eta /= np.linalg.norm(eta)
                y = x + r * eta
                ts = s_grid / lam
                fx = flow.apply_batch(ts, np.tile(x, (len(ts), 1)))
                fy = flow.apply_batch(ts, np.tile(y, (len(ts), 1)))
                den = np.linalg.norm(fy, axis=1)
                num = np.linalg.norm(fx - fy, axis=1)
                ok = den > 0
                best = max(best, float(np.max(num[ok] / den[ok])))
            shells.append(best)
        estimate = shells[-1]
        return DistortionReport(
            member=False,
            branch="outside",
            estimate=estimate,
            threshold=outside_bound,
            passed=estimate < outside_bound,
            detail={"shell_ratios": shells, "t_max": t_max},
        )

    # membership branch: build the explicit partner
    half = m  # offset of the second half-chain within the block
    u = x[off : off + m].copy()
    v = x[off + m : off + 2 * m].copy() if blk.im != 0 else np.zeros(m)
    support = [i for i in range(m) if u[i] != 0 or v[i] != 0]
    y = x.copy()
    if not support:
        branch = "partner-axis"
        y[off + m - 1] += eps / 2.0
    else:
        branch = "partner-rotated"
        lmax = max(support) + 1  # highest occupied chain position, 1-based
        theta = float(np.arctan2(v[lmax - 1], u[lmax - 1]))
        y[off + m - 1] -= (eps / 2.0) * np.cos(theta)
        if blk.im != 0:
            y[off + 2 * m - 1] -= (eps / 2.0) * np.sin(theta)

    s_grid = np.geomspace(1.0, t_max, n_grid)
    snapped = []
    if rot != 0.0 and M >= 2:
        # rotation-aligned subsequence: rot * (rho(s) - s) in 2 pi Z
        c = lgamma(M)  # log (M-1)!
        n_lo = int(np.floor((c - (M - 1) * np.log(t_max)) * rot / (2 * pi))) - 1
        n_hi = int(np.ceil(c * rot / (2 * pi))) + 1
        for n in range(n_lo, n_hi + 1):
            s = float(np.exp((c - 2 * pi * n / rot) / (M - 1)))
            if 1.0 <= s <= t_max:
                snapped.append(s)
    s_all = np.unique(np.concatenate([s_grid, np.array(snapped)]))
    rho = s_all - (M - 1) * np.log(s_all) + lgamma(M)
    fx = flow.apply_batch(s_all / lam, np.tile(x, (len(s_all), 1)))
    fy = flow.apply_batch(rho / lam, np.tile(y, (len(s_all), 1)))
    den = np.linalg.norm(fy, axis=1)
    num = np.linalg.norm(fx - fy, axis=1)
    ok = den > 0
    ratios = num[ok] / den[ok]
    estimate = float(np.max(ratios))
    return DistortionReport(
        member=True,
        branch=branch,
        estimate=estimate,
        threshold=member_bound,
        passed=estimate >= member_bound,
        detail={
            "partner_distance": eps / 2.0,
            "t_max": t_max,
            "snapped_times": snapped,
            "witness_block": {"size": m, "rate": str(blk.re), "rotation": str(blk.im)},
        },
    )


# ---------------------------------------------------------------------------
# growth-rate and polynomial-degree recovery


@dataclass(frozen=True)
class DecayReport:
    rate_fit: float
    degree_fit: float
    rate: float
    degree: int
    expected_rate: float
    expected_degree: int
    match: bool

    def to_json(self):
        return {
            "rate_fit": self.rate_fit,
            "degree_fit": self.degree_fit,
            "rate": self.rate,
            "degree": self.degree,
            "expected_rate": self.expected_rate,
            "expected_degree": self.expected_degree,
            "match": self.match,
        }


def _expected_decay(spec, x):
    """Dominant (rate, degree) of |Phi_t x| from the block structure."""
    best = None
    off = 0
    for b in spec.blocks:
        m = b.size
        u = x[off : off + m]
        v = x[off + m : off + 2 * m] if b.im != 0 else np.zeros(m)
        support = [i for i in range(m) if u[i] != 0 or v[i] != 0]
        if support:
            cand = (float(b.re), max(support))
            if best is None or cand > best:
                best = cand
        off += b.dim
    if best is None:
        raise PreconditionViolated("decay probe needs a nonzero point")
    return best


def decay_rate_probe(spec, x, window=(5.0, 60.0), n=120):
    """Least-squares fit of log |Phi_t x| = rate * t + degree * log t + c
    over the window, snapped to the nearest block rate and integer degree
    and compared with the structural prediction."""
    if any(b.re >= 0 for b in spec.blocks):
        raise NotStable("decay probe requires a stable generator")
    x = np.asarray(x, dtype=float)
    if x.shape != (spec.dim,):
        raise PreconditionViolated(f"point must have shape ({spec.dim},)")
    exp_rate, exp_deg = _expected_decay(spec, x)
    flow = FlowEvaluator.from_spec(spec, guard=_PROBE_GUARD)
    ts = np.linspace(window[0], window[1], n)
    Z = flow.apply_batch(ts, np.tile(x, (n, 1)))
    vals = np.log(np.linalg.norm(Z, axis=1))
    design = np.column_stack([ts, np.log(ts), np.ones(n)])
    (rate_fit, deg_fit, _), *_ = np.linalg.lstsq(design, vals, rcond=None)
    rates = sorted({float(b.re) for b in spec.blocks})
    rate = min(rates, key=lambda r: abs(r - rate_fit))
    degree = max(0, int(round(deg_fit)))
    match = rate == exp_rate and degree == exp_deg
    return DecayReport(
        float(rate_fit), float(deg_fit), rate, degree, exp_rate, exp_deg, match
    )


# ---------------------------------------------------------------------------
# period recovery for bounded flows


@dataclass(frozen=True)
class PeriodReport:
    period: float
    predicted: float
    residual: float
    match: bool

    def to_json(self):
        return {
            "period": self.period,
            "predicted": self.predicted,
            "residual": self.residual,
            "match": self.match,
        }


def period_probe(spec, x, t_max=None, tol=1e-9):
    """Recovers the minimal period of the orbit of x by grid search plus
    derivative-sign refinement, and compares with the exact prediction."""
    x = np.asarray(x, dtype=float)
    q = minimal_period(spec, x)  # raises NotBounded on unbounded input
    predicted = float(q) * 2.0 * pi
    flow = FlowEvaluator.from_spec(spec, guard=_PROBE_GUARD)
    nx = float(np.linalg.norm(x))
    if q == 0:
        drift = float(np.linalg.norm(flow.apply(0.7, x) - x))
        return PeriodReport(0.0, 0.0, drift, drift <= tol * (1.0 + nx))
    rates = [abs(float(b.im)) for b in spec.blocks if b.im != 0]
    fastest = max(rates)
    horizon = t_max if t_max is not None else 1.25 * predicted
    step = (2.0 * pi / fastest) / 64.0
    n = min(1 << 16, max(64, int(np.ceil(horizon / step))))
    # the minimal period is at least the fastest carrier period, so the
    # search may skip the initial stretch where the orbit has barely moved
    ts = np.linspace(0.45 * (2.0 * pi / fastest), horizon, n)
    Z = flow.apply_batch(ts, np.tile(x, (n, 1)))
    gap = np.linalg.norm(Z - x[None, :], axis=1)
    A = flow.generator_matrix()

    def dgap(t):
        z = flow.apply(t, x)
        return float((z - x) @ (A @ z))

    period = None
    order = np.argsort(gap)
    tried = []
    for idx in order[:12]:
        lo = ts[max(0, idx - 1)]
        hi = ts[min(n - 1, idx + 1)]
        if dgap(lo) >= 0 or dgap(hi) <= 0:
            t_star = ts[idx]
        else:
            for _ in range(90):
                mid = 0.5 * (lo + hi)
                if dgap(mid) < 0:
                    lo = mid
                else:
                    hi = mid
            t_star = 0.5 * (lo + hi)
        resid = float(np.linalg.norm(flow.apply(t_star, x) - x))
        tried.append((t_star, resid))
        if resid <= tol * (1.0 + nx):
            period = min(period, t_star) if period is not None else t_star
    if period is None:
        t_star, resid = min(tried, key=lambda p: p[1])
        return PeriodReport(float(t_star), predicted, resid, False)
    resid = float(np.linalg.norm(flow.apply(period, x) - x))
    match = abs(period - predicted) <= 1e-6 * max(1.0, predicted)
    return PeriodReport(float(period), predicted, resid, match)
