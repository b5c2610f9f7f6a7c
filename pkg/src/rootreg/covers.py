"""Interval growth solving the budget identity, first/second-kind
classification, and extraction of subcovers with pointwise overlap <= 2.

The budget functional phi_{t1,+-}(s) = L|s - t1| + sum_i ||(b_i^{1/i})'||_{L^1}
is evaluated through a cached monotone accumulator (adaptive quadrature on the
radical derivative oracles); interval endpoints are located by bisection on
these monotone maps.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetExhausted, NonterminatingChain, OutsideDomain
from .quadrature import radical_l1_accumulator


@dataclass
class GrowthBudget:
    """Linear rate L, budget constant D in (0, 1/3), and the continuous
    radical branches (with derivative oracles) driving the growth."""

    L: float
    D: float
    radicals: tuple  # RadicalBranchCurve-like objects exposing .k, .base, .abs_derivative
    domain: tuple

    _acc: object = field(default=None, repr=False, compare=False)
    _scale_ref: float = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if not 0 < self.D < 1.0 / 3.0:
            raise ValueError("D must lie in (0, 1/3)")
        if self.L <= 0:
            raise ValueError("L must be positive")
        self.domain = (float(self.domain[0]), float(self.domain[1]))

    @property
    def accumulator(self):
        if self._acc is None:
            a, b = self.domain
            self._acc = radical_l1_accumulator(self.radicals, a, b)
        return self._acc

    def growth_profile(self) -> np.ndarray:
        """F(s) = L s + W(s) at the accumulator edges; both growth
        functionals are phi_+-(s) = +-(F(s) - F(t1)), so interval endpoints
        are single searchsorted solves on this array."""
        if getattr(self, "_F", None) is None:
            acc = self.accumulator
            self._F = self.L * acc.edges + acc.W
        return self._F

    def scales(self, ts) -> np.ndarray:
        """|b_i(t)|^{1/i} per radical; shape (len(ts), #radicals)."""
        ts = np.asarray(ts, dtype=float)
        cols = [np.abs(r.base.values(ts)) ** (1.0 / r.k) for r in self.radicals]
        return np.stack(cols, axis=-1)

    def scale_reference(self) -> float:
        if self._scale_ref is None:
            a, b = self.domain
            ts = np.linspace(a, b, 2049)
            self._scale_ref = float(self.scales(ts).max(initial=0.0))
        return self._scale_ref

    def dominant_at(self, t1: float):
        """(radical order ell, scale |b_ell(t1)|^{1/ell}), smallest-index ties."""
        s = self.scales(np.array([t1]))[0]
        i = int(np.argmax(s))
        return self.radicals[i].k, float(s[i])

    def phi_plus(self, t1: float, s) -> np.ndarray:
        acc = self.accumulator
        return self.L * (np.asarray(s) - t1) + acc(s) - acc(t1)

    def phi_minus(self, t1: float, s) -> np.ndarray:
        acc = self.accumulator
        return self.L * (t1 - np.asarray(s)) + acc(t1) - acc(s)


@dataclass(frozen=True)
class IntervalCoverRecord:
    J: tuple
    t1: float
    ell: int
    kind: str  # "first" | "second"
    residual: float
    target: float
    flagged: bool = False

    @property
    def length(self) -> float:
        return self.J[1] - self.J[0]

    def to_json(self):
        return {
            "J": [self.J[0], self.J[1]],
            "t1": self.t1,
            "ell": self.ell,
            "kind": self.kind,
            "residual": self.residual,
            "target": self.target,
            "flagged": self.flagged,
        }


@dataclass(frozen=True)
class CoverReport:
    records: tuple
    max_overlap: int
    total_length: float
    domain_length: float
    components: tuple

    def to_json(self):
        return {
            "records": [r.to_json() for r in self.records],
            "max_overlap": self.max_overlap,
            "total_length": self.total_length,
            "domain_length": self.domain_length,
            "components": [list(c) for c in self.components],
        }

    def to_csv_rows(self):
        yield ("s_minus", "s_plus", "t1", "ell", "kind")
        for r in self.records:
            yield (repr(r.J[0]), repr(r.J[1]), repr(r.t1), r.ell, r.kind)


def _solve_piecewise(edges: np.ndarray, phi: np.ndarray, target: float) -> float:
    """Exact crossing of a nondecreasing piecewise-linear function."""
    i = int(np.searchsorted(phi, target, side="left"))
    if i == 0:
        return float(edges[0])
    if i >= len(edges):
        return float(edges[-1])
    p0, p1 = phi[i - 1], phi[i]
    if p1 == p0:
        return float(edges[i])
    frac = (target - p0) / (p1 - p0)
    return float(edges[i - 1] + frac * (edges[i] - edges[i - 1]))


def grow_interval(budget: GrowthBudget, t1: float, zero_rel: float = 1e-14) -> IntervalCoverRecord:
    """Grow J = (s_-, s_+) around t1 until the budget identity holds.

    Symmetric split of the budget when possible (first kind); otherwise the
    domain boundary clips one side and the rest of the budget is spent on the
    other (second kind).  A record with both sides clipped is flagged.
    The budget functional is piecewise linear on the accumulator's panels, so
    endpoints are exact panel-level solves.
    """
    a, b = budget.domain
    if not a <= t1 <= b:
        raise ValueError("base point outside the domain")
    ell, scale = budget.dominant_at(t1)
    if scale <= zero_rel * max(budget.scale_reference(), 1e-300):
        raise OutsideDomain(f"all radicals vanish at t1={t1}")
    target = budget.D * scale
    half = 0.5 * target

    acc = budget.accumulator
    L = budget.L
    edges = acc.edges
    F = budget.growth_profile()
    f_t1 = L * t1 + float(acc(t1))
    plus_max = float(F[-1]) - f_t1
    minus_max = f_t1 - float(F[0])

    def solve_plus(tgt):
        s = _solve_piecewise(edges, F, f_t1 + tgt)
        return max(s, t1)

    def solve_minus(tgt):
        i = int(np.searchsorted(F, f_t1 - tgt, side="right"))
        i = min(max(i, 1), len(edges) - 1)
        p0, p1 = F[i - 1], F[i]
        if p1 == p0:
            s = edges[i - 1]
        else:
            frac = (f_t1 - tgt - p0) / (p1 - p0)
            s = edges[i - 1] + frac * (edges[i] - edges[i - 1])
        return min(float(np.clip(s, a, b)), t1)

    if plus_max >= half and minus_max >= half:
        s_plus = solve_plus(half)
        s_minus = solve_minus(half)
        kind, flagged = "first", False
    elif plus_max + minus_max >= target:
        if plus_max < half:
            s_plus = b
            s_minus = solve_minus(target - plus_max)
        else:
            s_minus = a
            s_plus = solve_plus(target - minus_max)
        kind, flagged = "second", False
    else:
        s_minus, s_plus = a, b
        kind, flagged = "second", True

    w_t1 = f_t1 - L * t1
    achieved = (L * (t1 - s_minus) + w_t1 - float(acc(s_minus))) + (
        L * (s_plus - t1) + float(acc(s_plus)) - w_t1
    )
    residual = abs(achieved - target)
    return IntervalCoverRecord((float(s_minus), float(s_plus)), float(t1), ell, kind,
                               residual, target, flagged)


# ---------------------------------------------------------------------------
# component detection


def _components(budget: GrowthBudget, samples: int = 4097, zero_rel: float = 1e-14):
    """Connected components of {max_i |b_i|^{1/i} > 0} with vanishing flags."""
    a, b = budget.domain
    ts = np.linspace(a, b, samples)
    sigma = budget.scales(ts).max(axis=1)
    ref = float(sigma.max(initial=0.0))
    if ref == 0.0:
        return []
    thr = zero_rel * ref
    alive = sigma > thr

    def refine(lo, hi, want_alive_right):
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if (budget.scales(np.array([mid])).max() > thr) == want_alive_right:
                hi = mid
            else:
                lo = mid
        return 0.5 * (lo + hi)

    comps = []
    i = 0
    n = len(ts)
    while i < n:
        if not alive[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and alive[j + 1]:
            j += 1
        lo = ts[i] if i == 0 else refine(ts[i - 1], ts[i], True)
        hi = ts[j] if j == n - 1 else refine(ts[j + 1], ts[j], True)
        van_lo = not (i == 0 and sigma[0] > thr)
        van_hi = not (j == n - 1 and sigma[-1] > thr)
        comps.append((float(lo), float(hi), van_lo, van_hi))
        i = j + 1
    return comps


# ---------------------------------------------------------------------------
# selection helpers


def select_interlacing(records, start_index: int, span) -> list:
    """Subcollection of a bidirectional chain in which consecutive selected
    intervals overlap and every point lies in at most two of them.

    Walking right, always jump to the last chain interval whose left endpoint
    still precedes the current right endpoint (maximality forces the
    interlacing); symmetrically to the left.
    """
    lefts = np.array([r.J[0] for r in records])
    rights = np.array([r.J[1] for r in records])
    lo, hi = span
    sel = [start_index]
    cur = start_index
    while rights[cur] < hi:
        cand = np.flatnonzero(lefts < rights[cur])
        cand = cand[cand > cur]
        if len(cand) == 0:
            break
        nxt = int(cand.max())
        sel.append(nxt)
        cur = nxt
    cur = start_index
    while lefts[cur] > lo:
        cand = np.flatnonzero(rights > lefts[cur])
        cand = cand[cand < cur]
        if len(cand) == 0:
            break
        prev = int(cand.min())
        sel.insert(0, prev)
        cur = prev
    return [records[i] for i in sel]


def select_greedy_thin(records) -> list:
    """Thin a greedy left-to-right chain (increasing endpoints) so that every
    point is covered at most twice, keeping the cover property.

    A gap in the chain (where no later interval reaches back) starts a fresh
    segment: the construction only produces such gaps across numerically
    unresolvable dips, whose crossing record never reaches back before the
    gap."""
    lefts = [r.J[0] for r in records]
    rights = [r.J[1] for r in records]
    sel = [0]
    cur = 0
    while cur < len(records) - 1:
        nxt = cur
        for i in range(cur + 1, len(records)):
            if lefts[i] < rights[cur]:
                nxt = i
        if nxt == cur:
            nxt = cur + 1
        sel.append(nxt)
        cur = nxt
    return [records[i] for i in sel]


def cover_is_valid(intervals, span, max_overlap: int = 2, grid: int = 4096, tol: float = 1e-9) -> bool:
    """Check covering of (span) and the pointwise overlap bound on a grid."""
    lo, hi = span
    ts = np.linspace(lo + tol * (hi - lo), hi - tol * (hi - lo), grid)
    counts = np.zeros(len(ts), dtype=int)
    for a, b in intervals:
        counts += (ts > a) & (ts < b)
    return bool(np.all(counts >= 1) and np.all(counts <= max_overlap))


def overlap_count(intervals, span, grid: int = 10_000) -> int:
    lo, hi = span
    ts = np.linspace(lo, hi, grid)
    counts = np.zeros(len(ts), dtype=int)
    for a, b in intervals:
        counts += (ts > a) & (ts < b)
    return int(counts.max(initial=0))


# ---------------------------------------------------------------------------
# the subcover extraction


RESIDUAL_CAP_REL = 1e-10  # identity residual allowed per record, relative


def extract_subcover(budget: GrowthBudget, eps_len_rel: float = 1e-9,
                     max_records: int = 1_000_000, grow_fn=None) -> CoverReport:
    """Per connected component of the nonvanishing set, build the interval
    chains dictated by the endpoint cases and select a subcollection in which
    every point lies in at most two intervals.

    Chains truncate once intervals shrink below eps_len_rel * |domain| or the
    float grid can no longer resolve the budget identity to RESIDUAL_CAP_REL
    (the mathematical chains toward vanishing endpoints are infinite).
    """
    a, b = budget.domain
    eps_len = eps_len_rel * (b - a)
    if grow_fn is None:
        grow_fn = grow_interval
    comps = _components(budget)
    selected = []
    for lo, hi, van_lo, van_hi in comps:
        if van_lo and van_hi:
            sel = _case_both_vanish(budget, lo, hi, eps_len, max_records, grow_fn)
        elif van_lo != van_hi:
            sel = _case_one_vanishes(budget, lo, hi, van_lo, eps_len, max_records, grow_fn)
        else:
            sel = _case_none_vanish(budget, lo, hi, eps_len, max_records, grow_fn)
        selected.extend(sel)

    total = float(sum(r.length for r in selected))
    dom_len = float(sum(hi - lo for lo, hi, _, _ in comps))
    if comps:
        mo = max(
            overlap_count([r.J for r in selected if r.J[1] > lo and r.J[0] < hi], (lo, hi))
            for lo, hi, _, _ in comps
        )
    else:
        mo = 0
    return CoverReport(tuple(selected), mo, total, dom_len,
                       tuple((lo, hi) for lo, hi, _, _ in comps))


def _resolvable(rec: IntervalCoverRecord) -> bool:
    return rec.residual <= RESIDUAL_CAP_REL * rec.target


def _chain_right(budget, start: float, hi: float, eps_len: float, cap: int, grow_fn):
    out = []
    t = start
    while t < hi - eps_len:
        try:
            rec = grow_fn(budget, t)
        except OutsideDomain:
            break
        if not _resolvable(rec):
            break
        out.append(rec)
        if len(out) > cap:
            raise NonterminatingChain("right chain exceeded the record cap")
        if rec.J[1] <= t + eps_len or rec.length < eps_len:
            break
        t = rec.J[1]
    return out


def _chain_left(budget, start: float, lo: float, eps_len: float, cap: int, grow_fn):
    out = []
    t = start
    while t > lo + eps_len:
        try:
            rec = grow_fn(budget, t)
        except OutsideDomain:
            break
        if not _resolvable(rec):
            break
        out.append(rec)
        if len(out) > cap:
            raise NonterminatingChain("left chain exceeded the record cap")
        if rec.J[0] >= t - eps_len or rec.length < eps_len:
            break
        t = rec.J[0]
    out.reverse()
    return out


def _case_both_vanish(budget, lo, hi, eps_len, cap, grow_fn):
    """Vanishing at both endpoints: bidirectional first-kind chain plus the
    interlacing selection."""
    ts = np.linspace(lo, hi, 513)[1:-1]
    sigma = budget.scales(ts).max(axis=1)
    t0 = float(ts[int(np.argmax(sigma))])
    rec0 = grow_fn(budget, t0)
    right = _chain_right(budget, rec0.J[1], hi, eps_len, cap, grow_fn)
    left = _chain_left(budget, rec0.J[0], lo, eps_len, cap, grow_fn)
    chain = left + [rec0] + right
    return select_interlacing(chain, len(left), (lo + eps_len, hi - eps_len))


class _Probe:
    """Cheap approximate growth probes used only to steer base-point searches;
    every emitted record comes from an exact grow at the chosen point."""

    def __init__(self, budget: GrowthBudget, lo: float, hi: float, samples: int = 513):
        self.budget = budget
        ts = np.linspace(lo, hi, samples)
        self._ts = ts
        self._sig = budget.scales(ts).max(axis=1)
        self.acc = budget.accumulator

    def target(self, t1: float) -> float:
        return self.budget.D * float(np.interp(t1, self._ts, self._sig))

    def _phi_parts(self, t1: float):
        a, b = self.budget.domain
        L = self.budget.L
        w = float(self.acc(t1))
        plus_max = L * (b - t1) + float(self.acc(b)) - w
        minus_max = L * (t1 - a) + w - float(self.acc(a))
        return w, plus_max, minus_max

    def kind_first(self, t1: float) -> bool:
        half = 0.5 * self.target(t1)
        _, plus_max, minus_max = self._phi_parts(t1)
        return plus_max >= half and minus_max >= half

    def left_endpoint_before(self, t1: float, x: float) -> bool:
        """Approximate test alpha(J(t1)) < x for x <= t1."""
        T = self.target(t1)
        half = 0.5 * T
        w, plus_max, minus_max = self._phi_parts(t1)
        L = self.budget.L
        phi_minus_x = L * (t1 - x) + w - float(self.acc(x))
        if plus_max >= half and minus_max >= half:
            return phi_minus_x < half
        if plus_max + minus_max >= T:
            if plus_max < half:
                return phi_minus_x < T - plus_max
            return True  # the minus side clamps at the domain edge
        return True


def _case_one_vanishes(budget, lo, hi, van_lo, eps_len, cap, grow_fn):
    """One vanishing endpoint: locate the first/second-kind transition, take
    the clamped interval at the nonvanishing end, and chain toward the zero."""
    off = max(eps_len, 1e-12 * (hi - lo))
    probe = _Probe(budget, lo, hi)

    if van_lo:
        inner, outer = lo + off, hi - off
    else:
        inner, outer = hi - off, lo + off
    # locate the first/second-kind transition tau on the cheap probe, grow
    # the second-kind interval clamped at the nonvanishing boundary, and
    # chain from its inner endpoint toward the vanishing one
    t_first, t_second = inner, outer
    if probe.kind_first(outer):
        rec0 = grow_fn(budget, outer)
    else:
        for _ in range(40):
            mid = 0.5 * (t_first + t_second)
            if probe.kind_first(mid):
                t_first = mid
            else:
                t_second = mid
        toward_boundary = 1.0 if van_lo else -1.0
        rec0 = grow_fn(budget, t_second)
        step = abs(t_second - t_first) + 1e-15 * (hi - lo)
        guard = 0
        while rec0.kind != "second" and guard < 40:
            t_second = min(max(t_second + toward_boundary * step, lo + off), hi - off)
            step *= 2.0
            rec0 = grow_fn(budget, t_second)
            guard += 1
    if van_lo:
        left = _chain_left(budget, rec0.J[0], lo, eps_len, cap, grow_fn)
        chain = left + [rec0]
        return select_interlacing(chain, len(left), (lo + eps_len, hi - off))
    right = _chain_right(budget, rec0.J[1], hi, eps_len, cap, grow_fn)
    chain = [rec0] + right
    return select_interlacing(chain, 0, (lo + off, hi - eps_len))


def _case_none_vanish(budget, lo, hi, eps_len, cap, grow_fn):
    """Nonvanishing endpoints: greedy chain whose next interval has maximal
    right endpoint among those containing the current one, then thinning."""
    off = max(eps_len, 1e-12 * (hi - lo))
    probe = _Probe(budget, lo, hi)
    first = grow_fn(budget, lo + off)
    records = [first]
    cur_right = first.J[1]
    guard = 0
    while cur_right < hi - off:
        guard += 1
        if guard > cap:
            raise NonterminatingChain("greedy chain exceeded the record cap")
        # largest base point whose interval still contains cur_right
        lo_t, hi_t = cur_right, hi - off
        best = None
        if probe.left_endpoint_before(hi_t, cur_right):
            best = hi_t
        else:
            for _ in range(40):
                mid = 0.5 * (lo_t + hi_t)
                if probe.left_endpoint_before(mid, cur_right):
                    lo_t = mid
                    best = mid
                else:
                    hi_t = mid
        rec = grow_fn(budget, best if best is not None else cur_right)
        if rec.J[0] >= cur_right or rec.J[1] <= cur_right + eps_len:
            # probe misjudged the borderline base point; fall back to exact
            rec = grow_fn(budget, cur_right)
            if rec.J[1] <= cur_right + eps_len:
                rec = grow_fn(budget, min(cur_right + 0.5 * rec.length + eps_len, hi - off))
                if rec.J[1] <= cur_right + eps_len:
                    raise BudgetExhausted("greedy chain cannot advance")
        if not _resolvable(rec):
            # the radical scales dip so low that float granularity cannot
            # close the identity; skip the dip and resume on the far side
            rec, cur_right = _skip_dip(budget, grow_fn, cur_right, hi, off, eps_len)
            if rec is None:
                break
            records.append(rec)
            continue
        records.append(rec)
        cur_right = rec.J[1]
    return select_greedy_thin(records)


def _skip_dip(budget, grow_fn, hole_start, hi, off, eps_len):
    """Advance past an unresolvable dip.  The returned record starts at or
    after the old frontier, so it overlaps nothing emitted before the dip and
    the two-overlap bound survives the gap."""
    skip = max(eps_len, 1e-10 * (hi - hole_start))
    probe_t = hole_start
    for _ in range(300):
        probe_t = min(probe_t + skip, hi - off)
        skip *= 1.7
        try:
            rec = grow_fn(budget, probe_t)
        except OutsideDomain:
            if probe_t >= hi - off:
                return None, hole_start
            continue
        if _resolvable(rec) and rec.J[0] >= hole_start:
            return rec, rec.J[1]
        if probe_t >= hi - off:
            return None, hole_start
    return None, hole_start
