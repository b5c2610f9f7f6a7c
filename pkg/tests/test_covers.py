import numpy as np
import pytest

from rootreg.covers import (
    GrowthBudget,
    cover_is_valid,
    extract_subcover,
    grow_interval,
    select_greedy_thin,
)
from rootreg.curves import ConstCurve, PolyCurve, RadicalBranchCurve
from rootreg.errors import OutsideDomain


def const_budget(L=2.0, D=0.1, domain=(0.0, 1.0)):
    rad = RadicalBranchCurve(ConstCurve(1.0), 2, domain)
    return GrowthBudget(L=L, D=D, radicals=(rad,), domain=domain)


class TestGrowInterval:
    def test_constant_radical_closed_form(self):
        budget = const_budget()
        rec = grow_interval(budget, 0.5)
        half_width = budget.D / (2 * budget.L)
        assert rec.kind == "first"
        np.testing.assert_allclose(rec.J, (0.5 - half_width, 0.5 + half_width), atol=1e-12)
        assert rec.residual <= 1e-10 * rec.target

    def test_second_kind_at_boundary(self):
        budget = const_budget()
        t1 = 0.01  # within D/(2L) = 0.025 of the left boundary
        rec = grow_interval(budget, t1)
        assert rec.kind == "second"
        assert rec.J[0] == 0.0
        # remaining budget spent on the right: L*(s+ - t1) = D - L*t1
        expected = t1 + (budget.D - budget.L * t1) / budget.L
        np.testing.assert_allclose(rec.J[1], expected, atol=1e-12)

    def test_outside_domain(self):
        rad = RadicalBranchCurve(PolyCurve([0.0, 1.0]), 2, (0.0, 1.0))
        budget = GrowthBudget(L=1.0, D=0.1, radicals=(rad,), domain=(0.0, 1.0))
        with pytest.raises(OutsideDomain):
            grow_interval(budget, 0.0)

    def test_first_kind_symmetric_split(self):
        base = PolyCurve([0.5, 1.0, -0.8])
        budget = GrowthBudget(L=1.0, D=0.15,
                              radicals=(RadicalBranchCurve(base, 2, (0, 1)),), domain=(0, 1))
        rec = grow_interval(budget, 0.5)
        assert rec.kind == "first"
        half = 0.5 * rec.target
        assert abs(float(budget.phi_minus(rec.t1, rec.J[0])) - half) <= 1e-10 * rec.target
        assert abs(float(budget.phi_plus(rec.t1, rec.J[1])) - half) <= 1e-10 * rec.target

    def test_d_monotonicity(self):
        base = PolyCurve([0.5, 1.0, -0.8])
        rad = RadicalBranchCurve(base, 2, (0, 1))
        j_small = grow_interval(GrowthBudget(L=1.0, D=0.05, radicals=(rad,), domain=(0, 1)), 0.5)
        j_large = grow_interval(GrowthBudget(L=1.0, D=0.12, radicals=(rad,), domain=(0, 1)), 0.5)
        assert j_large.J[0] < j_small.J[0] and j_small.J[1] < j_large.J[1]


class TestExtractSubcover:
    def test_single_interval_covers_component(self):
        budget = const_budget(L=0.05, D=0.3)  # budget large enough for one pass
        rep = extract_subcover(budget)
        assert rep.max_overlap <= 2
        assert cover_is_valid([r.J for r in rep.records], (1e-6, 1 - 1e-6))

    def test_case_i_parabola(self):
        base = PolyCurve([0.0, 1.0, -1.0])  # t(1-t): vanishing endpoints
        budget = GrowthBudget(L=0.5, D=0.2,
                              radicals=(RadicalBranchCurve(base, 2, (0, 1)),), domain=(0, 1))
        rep = extract_subcover(budget)
        assert rep.max_overlap <= 2
        eps_len = 1e-9
        assert rep.total_length <= 2 * rep.domain_length + eps_len * len(rep.records)
        lo = min(r.J[0] for r in rep.records)
        hi = max(r.J[1] for r in rep.records)
        assert cover_is_valid([r.J for r in rep.records], (lo + 1e-12, hi - 1e-12))
        for r in rep.records:
            assert r.residual <= 1e-10 * r.target

    def test_interlacing_endpoints(self):
        base = PolyCurve([0.0, 1.0, -1.0])
        budget = GrowthBudget(L=0.5, D=0.2,
                              radicals=(RadicalBranchCurve(base, 2, (0, 1)),), domain=(0, 1))
        rep = extract_subcover(budget)
        lefts = np.array([r.J[0] for r in rep.records])
        rights = np.array([r.J[1] for r in rep.records])
        assert np.all(np.diff(lefts) > 0) and np.all(np.diff(rights) > 0)
        # strict interlacing: each left endpoint lies inside the previous interval
        assert np.all(lefts[1:] < rights[:-1])
        assert np.all(lefts[2:] >= rights[:-2])

    def test_identity_residuals_and_kinds(self, rng):
        from rootreg.experiments import random_budget

        for seed in range(8):
            rep = extract_subcover(random_budget(seed * 7 + 1))
            assert rep.max_overlap <= 2
            for r in rep.records:
                assert r.residual <= 1e-10 * r.target
                if r.kind == "second" and not r.flagged:
                    comps = np.asarray(rep.components)
                    touches = np.any(
                        np.isclose(r.J[0], comps[:, 0], atol=1e-7)
                        | np.isclose(r.J[1], comps[:, 1], atol=1e-7)
                    )
                    assert touches

    def test_case_ii_one_vanishing_endpoint(self):
        # base identically zero on a left stretch: the single component has a
        # vanishing left boundary and a nonvanishing right one
        from rootreg.curves import ProductCurve, RampCurve

        base = ProductCurve(PolyCurve([0.5, 0.7]), RampCurve(0.25, 3))
        budget = GrowthBudget(
            L=1.0, D=0.15,
            radicals=(RadicalBranchCurve(base, 2, (0, 1)),),
            domain=(0.0, 1.0),
        )
        rep = extract_subcover(budget)
        assert len(rep.components) == 1
        lo_c, hi_c = rep.components[0]
        assert abs(lo_c - 0.25) < 1e-3 and hi_c == 1.0
        assert rep.max_overlap <= 2
        kinds = {r.kind for r in rep.records}
        assert kinds == {"first", "second"}
        # second-kind records clamp at the nonvanishing right boundary
        for r in rep.records:
            if r.kind == "second":
                assert abs(r.J[1] - 1.0) < 1e-7
            assert r.residual <= 1e-10 * r.target
        lo = min(r.J[0] for r in rep.records)
        assert cover_is_valid([r.J for r in rep.records], (lo + 1e-12, 1.0 - 1e-9))


def brute_force_min_two_overlap_covers(intervals, span, grid=2048):
    """All subcollections that cover span with pointwise overlap <= 2."""
    best = None
    valid = []
    n = len(intervals)
    for mask in range(1, 2**n):
        chosen = [intervals[i] for i in range(n) if (mask >> i) & 1]
        if cover_is_valid(chosen, span, grid=grid):
            valid.append(mask)
            if best is None or bin(mask).count("1") < bin(best).count("1"):
                best = mask
    return valid, best


class TestFiniteGreedySelection:
    def test_seven_interval_instance_vs_brute_force(self):
        from rootreg.covers import IntervalCoverRecord

        intervals = [
            (0.0, 0.22), (0.15, 0.42), (0.18, 0.55), (0.40, 0.70),
            (0.52, 0.81), (0.67, 0.93), (0.78, 1.0),
        ]
        records = [
            IntervalCoverRecord(J, 0.5 * (J[0] + J[1]), 2, "second", 0.0, 1.0)
            for J in intervals
        ]
        # the greedy maximal-right-endpoint chain, then thinning
        chain = [records[0]]
        cur = records[0]
        while cur.J[1] < 1.0:
            containing = [r for r in records if r.J[0] < cur.J[1] < r.J[1]]
            if not containing:
                break
            cur = max(containing, key=lambda r: r.J[1])
            chain.append(cur)
        selected = select_greedy_thin(chain)
        span = (0.0, 1.0)
        assert cover_is_valid([r.J for r in selected], span)
        valid, best = brute_force_min_two_overlap_covers(intervals, span)
        assert valid, "brute force found no valid subcollection"
        sel_mask = sum(1 << intervals.index(r.J) for r in selected)
        assert sel_mask in valid
        assert bin(sel_mask).count("1") == bin(best).count("1")
