"""Norms and extensions on sampled functions over bounded intervals.

A ``SampledFunction`` is interpreted through the piecewise-linear interpolant
of its modulus samples: every L^p integral has a closed form per affine
segment and the weak-L^p supremum is maximized exactly on each affine piece
of the distribution function, never by grid search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .curves import Curve, CutoffWindowCurve, ProductCurve, RadicalBranchCurve, TaylorExtendedCurve
from .errors import InsufficientData, NonvanishingBoundary
from .quadrature import radical_l1_accumulator


@dataclass(frozen=True)
class SampledFunction:
    grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.grid, dtype=float)
        v = np.asarray(self.values, dtype=complex)
        if g.ndim != 1 or v.shape != g.shape or len(g) < 2:
            raise ValueError("need matching 1-d grid/values with at least two samples")
        if not np.all(np.diff(g) > 0):
            raise ValueError("grid must be strictly increasing")
        object.__setattr__(self, "grid", g)
        object.__setattr__(self, "values", v)

    @property
    def interval_length(self) -> float:
        return float(self.grid[-1] - self.grid[0])

    def restricted(self, a: float, b: float) -> "SampledFunction":
        """Restriction to [a, b]; endpoints are interpolated in if missing."""
        inside = (self.grid > a) & (self.grid < b)
        ts = np.concatenate([[a], self.grid[inside], [b]])
        re = np.interp(ts, self.grid, self.values.real)
        im = np.interp(ts, self.grid, self.values.imag)
        return SampledFunction(ts, re + 1j * im)

    def to_json(self):
        return {
            "grid": [float(t) for t in self.grid],
            "values": [[v.real, v.imag] for v in self.values],
        }

    @classmethod
    def from_json(cls, data) -> "SampledFunction":
        vals = np.array([complex(re, im) for re, im in data["values"]])
        return cls(np.asarray(data["grid"], dtype=float), vals)

    @classmethod
    def from_curve(cls, curve: Curve, grid) -> "SampledFunction":
        grid = np.asarray(grid, dtype=float)
        return cls(grid, curve.values(grid))


@dataclass(frozen=True)
class NormReport:
    p: float
    lp: float
    weak_lp: float
    normalized_lp: float
    normalized_weak: float
    interval_length: float

    def to_json(self):
        return {
            "p": self.p,
            "lp": self.lp,
            "weak_lp": self.weak_lp,
            "normalized_lp": self.normalized_lp,
            "normalized_weak": self.normalized_weak,
            "interval_length": self.interval_length,
        }


@dataclass(frozen=True)
class HolderData:
    k: int
    alpha: float
    sup_norms: tuple
    top_holder: float
    source: str  # "oracle" or "finite-difference"

    @property
    def cka_norm(self) -> float:
        """sup over derivative orders of the sup norms, plus the top Hoelder
        constant (the Banach norm of C^{k,alpha})."""
        return max(self.sup_norms) + self.top_holder


# ---------------------------------------------------------------------------
# segment-level primitives


def _segment_data(f: SampledFunction):
    mags = np.abs(f.values)
    return mags[:-1], mags[1:], np.diff(f.grid)


def _lp_power_from_segments(m0, m1, h, p: float) -> float:
    """Exact integral of the p-th power of a piecewise-linear modulus."""
    lo = np.minimum(m0, m1)
    hi = np.maximum(m0, m1)
    span = hi - lo
    mid = 0.5 * (lo + hi)
    flat = span <= 1e-7 * np.maximum(hi, 1e-300)
    out = np.empty_like(mid)
    out[flat] = mid[flat] ** p * h[flat]
    if np.any(~flat):
        l, u, hh, sp = lo[~flat], hi[~flat], h[~flat], span[~flat]
        out[~flat] = hh * (u ** (p + 1) - l ** (p + 1)) / ((p + 1) * sp)
    return float(out.sum())


def _weak_lp_from_segments(m0, m1, h, p: float) -> float:
    """sup_r r |{ |f| > r }|^{1/p} for a piecewise-linear modulus.

    The distribution function is affine between the sorted sample moduli
    (with downward jumps at flat-segment levels); each closed piece is
    maximized in closed form at its endpoints and interior critical point.
    """
    m0 = np.asarray(m0, dtype=float)
    m1 = np.asarray(m1, dtype=float)
    h = np.asarray(h, dtype=float)
    lo = np.minimum(m0, m1)
    hi = np.maximum(m0, m1)
    span = hi - lo
    flat = span <= 1e-14 * np.maximum(hi, 1e-300)
    crit = np.unique(np.concatenate([[0.0], lo, hi]))

    slope_delta = np.zeros(len(crit))
    if np.any(~flat):
        w = h[~flat] / span[~flat]
        np.add.at(slope_delta, np.searchsorted(crit, lo[~flat]), -w)
        np.add.at(slope_delta, np.searchsorted(crit, hi[~flat]), w)
    slope = np.cumsum(slope_delta)  # slope of m(r) on [crit_q, crit_{q+1})

    jumps = np.zeros(len(crit))
    if np.any(flat):
        keep = flat & (hi > 0)
        np.add.at(jumps, np.searchsorted(crit, hi[keep]), h[keep])

    m_start0 = float(h[~flat].sum() + h[flat & (hi > 0)].sum())
    dq = np.diff(crit)
    inc = slope[:-1] * dq - jumps[1:]
    m_start = m_start0 + np.concatenate([[0.0], np.cumsum(inc[:-1])]) if len(dq) else np.array([])
    if len(dq) == 0:
        return 0.0
    m_end = np.maximum(m_start + slope[:-1] * dq, 0.0)
    m_start = np.maximum(m_start, 0.0)

    c0, c1 = crit[:-1], crit[1:]
    best = max(float(np.max(c0 * m_start ** (1.0 / p))), float(np.max(c1 * m_end ** (1.0 / p))))
    B = -slope[:-1]
    pos = B > 0
    if np.any(pos):
        A = m_start[pos] + B[pos] * c0[pos]
        r_star = A * p / (B[pos] * (p + 1.0))
        ok = (r_star > c0[pos]) & (r_star < c1[pos])
        if np.any(ok):
            mval = np.maximum(A[ok] - B[pos][ok] * r_star[ok], 0.0)
            best = max(best, float(np.max(r_star[ok] * mval ** (1.0 / p))))
    return best


def weak_lp_over_segments(m0, m1, lengths, p: float) -> float:
    """Weak-L^p quasinorm of a piecewise-linear modulus given directly by
    per-segment endpoint values; segments need not be contiguous (used when
    cells around isolated zeros are excluded)."""
    return _weak_lp_from_segments(np.asarray(m0, dtype=float), np.asarray(m1, dtype=float),
                                  np.asarray(lengths, dtype=float), p)


def step_lp_norm(levels, lengths, p: float) -> float:
    """L^p norm of a piecewise-constant density."""
    levels = np.abs(np.asarray(levels, dtype=float))
    lengths = np.asarray(lengths, dtype=float)
    return float((levels**p @ lengths) ** (1.0 / p))


def step_weak_lp(levels, lengths, p: float) -> float:
    levels = np.abs(np.asarray(levels, dtype=float))
    return _weak_lp_from_segments(levels, levels, np.asarray(lengths, dtype=float), p)


# ---------------------------------------------------------------------------
# the public norm operations


def lp_norm(f: SampledFunction, p: float) -> float:
    if p < 1:
        raise ValueError("p must be at least 1")
    m0, m1, h = _segment_data(f)
    return _lp_power_from_segments(m0, m1, h, p) ** (1.0 / p)


def weak_lp_quasinorm(f: SampledFunction, p: float) -> float:
    if p < 1:
        raise ValueError("p must be at least 1")
    m0, m1, h = _segment_data(f)
    return _weak_lp_from_segments(m0, m1, h, p)


def norm_report(f: SampledFunction, p: float) -> NormReport:
    length = f.interval_length
    lp = lp_norm(f, p)
    wk = weak_lp_quasinorm(f, p)
    scale = length ** (-1.0 / p)
    return NormReport(p, lp, wk, lp * scale, wk * scale, length)


def oscillation(f: SampledFunction) -> float:
    """Diameter of the sampled value set (exact over samples)."""
    pts = np.unique(np.round(np.column_stack([f.values.real, f.values.imag]), decimals=300), axis=0)
    if len(pts) == 1:
        return 0.0
    hull = _convex_hull(pts)
    d2 = ((hull[:, None, :] - hull[None, :, :]) ** 2).sum(axis=2)
    return float(np.sqrt(d2.max()))


def _convex_hull(pts: np.ndarray) -> np.ndarray:
    """Andrew's monotone chain; degenerates gracefully for collinear input."""
    pts = pts[np.lexsort((pts[:, 1], pts[:, 0]))]
    if len(pts) <= 2:
        return pts

    def half(points):
        out = []
        for pt in points:
            while len(out) >= 2:
                o, a = out[-2], out[-1]
                if (a[0] - o[0]) * (pt[1] - o[1]) - (a[1] - o[1]) * (pt[0] - o[0]) <= 0:
                    out.pop()
                else:
                    break
            out.append(pt)
        return out

    lower = half(pts)
    upper = half(pts[::-1])
    return np.array(lower[:-1] + upper[:-1])


def holder_constant(ts: np.ndarray, vals: np.ndarray, alpha: float,
                    pair_budget: int = 200_000) -> float:
    """sup |g(t)-g(s)| / |t-s|^alpha over sample pairs.

    All pairs when they fit in the budget, otherwise stratified by dyadic
    index gaps so every distance scale is represented.
    """
    n = len(ts)
    if n < 2:
        return 0.0
    total_pairs = n * (n - 1) // 2
    best = 0.0
    if total_pairs <= pair_budget:
        for i in range(n - 1):
            dt = ts[i + 1 :] - ts[i]
            dv = np.abs(vals[i + 1 :] - vals[i])
            best = max(best, float(np.max(dv / dt**alpha)))
        return best
    gaps = []
    g = 1
    while g < n:
        gaps.append(g)
        g *= 2
    per_gap = max(pair_budget // len(gaps), 1)
    for g in gaps:
        idx = np.arange(0, n - g)
        if len(idx) > per_gap:
            stride = int(np.ceil(len(idx) / per_gap))
            idx = idx[::stride]
        dt = ts[idx + g] - ts[idx]
        dv = np.abs(vals[idx + g] - vals[idx])
        best = max(best, float(np.max(dv / dt**alpha)))
    return best


def _divided_differences(ts: np.ndarray, vals: np.ndarray, order: int):
    """Newton divided differences; order i estimates f^(i)/i! on windows."""
    d = vals.astype(complex)
    t = ts
    for i in range(1, order + 1):
        d = (d[1:] - d[:-1]) / (t[i:] - t[: len(t) - i])
    centers = 0.5 * (ts[order:] + ts[: len(ts) - order])
    return centers, d


def holder_data(f, k: int, alpha: float, domain=None, samples: int = 2049,
                pair_budget: int = 200_000) -> HolderData:
    """Sup norms of derivatives 0..k and the alpha-Hoelder constant of the
    k-th derivative.

    Curve inputs are sampled densely through their exact jets (source
    "oracle"); SampledFunction inputs use divided differences (source
    "finite-difference").
    """
    if not 0 < alpha <= 1:
        raise ValueError("alpha must lie in (0, 1]")
    if isinstance(f, Curve):
        if domain is None:
            raise ValueError("curve input needs an explicit domain")
        ts = np.linspace(domain[0], domain[1], samples)
        jets = f.jets(ts, k)
        fact = 1.0
        sups = []
        for i in range(k + 1):
            sups.append(float(np.max(np.abs(jets[:, i])) * fact))
            fact *= i + 1
        topvals = jets[:, k] * math.factorial(k)
        top = holder_constant(ts, topvals, alpha, pair_budget)
        return HolderData(k, alpha, tuple(sups), top, "oracle")

    ts, vals = f.grid, f.values
    if len(ts) < k + 2:
        raise InsufficientData(f"need at least {k + 2} samples for order {k}")
    sups = []
    fact = 1.0
    for i in range(k + 1):
        _, d = _divided_differences(ts, vals, i)
        sups.append(float(np.max(np.abs(d)) * fact))
        fact *= i + 1
    centers, dk = _divided_differences(ts, vals, k)
    top = holder_constant(centers, dk * math.factorial(k), alpha, pair_budget)
    return HolderData(k, alpha, tuple(sups), top, "finite-difference")


def extend_by_zero(f: SampledFunction, support, p: float, ztol: float = 1e-9) -> NormReport:
    """Norms of f' computed over the support only, reported over the whole
    interval (extension by zero preserves the derivative norm).

    Each support-component endpoint interior to the interval must carry a
    (numerically) vanishing sample.
    """
    a_all, b_all = float(f.grid[0]), float(f.grid[-1])
    scale = float(np.max(np.abs(f.values)))
    levels = []
    lengths = []
    for a, b in support:
        a, b = float(a), float(b)
        if not (a_all <= a < b <= b_all):
            raise ValueError(f"support component ({a}, {b}) outside the interval")
        for endpoint in (a, b):
            if a_all < endpoint < b_all:
                val = np.interp(endpoint, f.grid, f.values.real) + 1j * np.interp(
                    endpoint, f.grid, f.values.imag
                )
                if abs(val) > ztol * max(scale, 1.0):
                    raise NonvanishingBoundary(
                        f"f({endpoint}) = {val:.3g} does not vanish at a support boundary"
                    )
        sub = f.restricted(a, b)
        slopes = np.diff(sub.values) / np.diff(sub.grid)
        levels.append(np.abs(slopes))
        lengths.append(np.diff(sub.grid))
    levels = np.concatenate(levels) if levels else np.zeros(1)
    lengths = np.concatenate(lengths) if lengths else np.zeros(1)
    lp = step_lp_norm(levels, lengths, p)
    wk = step_weak_lp(levels, lengths, p)
    length = f.interval_length
    s = length ** (-1.0 / p)
    return NormReport(p, lp, wk, lp * s, wk * s, length)


@dataclass(frozen=True)
class SandwichReport:
    weak_q: float
    lq: float
    upper: float
    normalized_chain: tuple
    passed: bool

    def to_json(self):
        return {
            "weak_q": self.weak_q,
            "lq": self.lq,
            "upper": self.upper,
            "normalized_chain": list(self.normalized_chain),
            "passed": self.passed,
        }


def norm_sandwich_check(f: SampledFunction, q: float, p: float, slack: float = 1e-9) -> SandwichReport:
    """Verify ||f||_{q,w} <= ||f||_{L^q} <= (p/(p-q))^{1/q} |O|^{1/q-1/p} ||f||_{p,w}
    together with the normalized variants."""
    if not 1 <= q < p:
        raise ValueError("need 1 <= q < p")
    length = f.interval_length
    wq = weak_lp_quasinorm(f, q)
    lq = lp_norm(f, q)
    wp = weak_lp_quasinorm(f, p)
    lp = lp_norm(f, p)
    c = (p / (p - q)) ** (1.0 / q)
    upper = c * length ** (1.0 / q - 1.0 / p) * wp
    nq, nlq, nlp, nwp = (
        wq * length ** (-1 / q),
        lq * length ** (-1 / q),
        lp * length ** (-1 / p),
        wp * length ** (-1 / p),
    )
    tol = slack * max(1.0, lq, upper)
    ok = (
        wq <= lq + tol
        and lq <= upper + tol
        and nlq <= nlp + tol
        and nq <= nlq + tol
        and nlq <= c * nwp + tol
    )
    return SandwichReport(wq, lq, upper, (nq, nlq, nlp, nwp), ok)


# ---------------------------------------------------------------------------
# Whitney-style cutoff extension


def whitney_extend_curves(coeff_curves, domain, order: int):
    """Extend coefficient closures from [a, b] to (a-1, b+1), equal to the
    input inside and identically zero at and beyond the new endpoints.

    Taylor-polynomial extension at the seams keeps C^{order,1} regularity;
    the product cutoff phi(a-t) phi(t-b) kills the extension outside.
    """
    a, b = float(domain[0]), float(domain[1])
    window = CutoffWindowCurve(a, b)
    extended = [
        ProductCurve(TaylorExtendedCurve(c, a, b, order), window) for c in coeff_curves
    ]
    return extended, (a - 1.0, b + 1.0)


def whitney_extend(family):
    """CurveFamily wrapper around :func:`whitney_extend_curves`."""
    from .tracking import CurveFamily

    ext, dom = whitney_extend_curves(family.coeffs, family.domain, family.degree - 1)
    return CurveFamily(family.degree, tuple(ext), dom)


def sufficient_inequality_check(reduced_curves, domain, samples: int = 4097):
    """After the cutoff extension the sup norms are controlled by the L^1
    norms of the radical derivatives:
    max_j ||a~_j||^{1/j}_inf <= sum_j ||(a~_j^{1/j})'||_{L^1}."""
    a, b = domain
    ts = np.linspace(a, b, samples)
    lhs = 0.0
    radicals = []
    for j, curve in zip(range(2, len(reduced_curves) + 2), reduced_curves):
        lhs = max(lhs, float(np.max(np.abs(curve.values(ts))) ** (1.0 / j)))
        radicals.append(RadicalBranchCurve(curve, j, (a, b)))
    acc = radical_l1_accumulator(radicals, a, b)
    rhs = acc.total
    return {"lhs": lhs, "rhs": rhs, "passed": bool(lhs <= rhs * (1 + 1e-9))}


# ---------------------------------------------------------------------------
# grid builders


def dyadic_grid(a: float, b: float, depth: int) -> np.ndarray:
    return np.linspace(a, b, 2**depth + 1)


def geometric_grid(a: float, b: float, n: int, t_min_rel: float) -> np.ndarray:
    """Grid on (a, b] accumulating geometrically toward a; first node at
    a + (b-a)*t_min_rel."""
    offsets = np.geomspace(t_min_rel, 1.0, n)
    return a + (b - a) * offsets


def singularity_graded_grid(a: float, b: float, zeros, bulk: int = 2048,
                            per_side: int = 1600, t_min_rel: float = 1e-7) -> np.ndarray:
    """Uniform bulk grid plus two-sided geometric refinement into each zero."""
    parts = [np.linspace(a, b, bulk + 1)]
    span = b - a
    for z in zeros:
        reach = min(0.25 * span, z - a if z > a else span, b - z if z < b else span)
        if reach <= 0:
            reach = 0.25 * span
        lad = np.geomspace(t_min_rel * span, reach, per_side)
        for side in (-1.0, 1.0):
            pts = z + side * lad
            parts.append(pts[(pts > a) & (pts < b)])
    grid = np.unique(np.concatenate(parts))
    # drop nodes too close to a zero for the interpolant to be meaningful
    keep = np.ones(len(grid), dtype=bool)
    for z in zeros:
        keep &= np.abs(grid - z) >= 0.5 * t_min_rel * span
    return grid[keep]
