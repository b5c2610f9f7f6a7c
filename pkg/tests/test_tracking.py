import numpy as np
import pytest

from conftest import multiset_close
from rootreg.curves import ConstCurve
from rootreg.errors import MonodromyObstruction, SizeMismatch
from rootreg.pipeline import tschirnhausen_curves
from rootreg.tracking import (
    BoxFamily,
    CurveFamily,
    MultiValued,
    an_distance,
    chain_match,
    family_random_trig,
    family_zn_minus_loop,
    family_zn_minus_t,
    intrinsic_w1p_energy,
    match_step,
    monodromy_loop,
    regularity_report,
    track_box,
    track_curve,
)


class TestMatchStep:
    def test_identity(self):
        perm = match_step([1, -1, 2j], [1, -1, 2j])
        assert list(perm) == [0, 1, 2]

    def test_nearest_assignment(self):
        perm = match_step([1, -1], [0.9, -1.1])
        assert list(perm) == [0, 1]
        perm = match_step([1, -1], [-1.1, 0.9])
        assert list(perm) == [1, 0]

    def test_tie_break_lexicographic(self):
        perm = match_step([1, -1], [1j, -1j])
        assert list(perm) == [0, 1]

    def test_size_mismatch(self):
        with pytest.raises(SizeMismatch):
            match_step([1, 2], [1, 2, 3])


class TestTrackCurve:
    def test_sqrt_branches(self):
        fam = family_zn_minus_t(2, (0.0, 1.0))
        system = track_curve(fam, initial_grid=257)
        ts = system.grid
        expected = {tuple(np.round(np.sqrt(ts), 8)), tuple(np.round(-np.sqrt(ts), 8))}
        got = {tuple(np.round(tr.real, 8)) for tr in system.trajectories}
        # trajectories are +-sqrt(t) up to labeling
        for tr in system.trajectories:
            assert np.allclose(np.abs(tr), np.sqrt(ts), atol=1e-9)
        assert len(got) == 2

    def test_constant_family(self):
        fam = CurveFamily(2, (ConstCurve(0.0), ConstCurve(-4.0)), (0.0, 1.0))
        system = track_curve(fam, initial_grid=33)
        assert system.max_step_jump == 0.0
        for tr in system.trajectories:
            assert np.allclose(tr, tr[0])

    def test_half_loop_square_root(self):
        # Z^2 - e^{it} on [0, pi]: branches +-e^{it/2}, endpoints {i, -i}
        fam = family_zn_minus_loop(2)
        fam = CurveFamily(2, fam.coeffs, (0.0, np.pi))
        system = track_curve(fam, initial_grid=257)
        start = system.trajectories[:, 0]
        end = system.trajectories[:, -1]
        assert multiset_close(start, [1, -1], 1e-8)
        assert multiset_close(end, [1j, -1j], 1e-8)
        for tr, s in zip(system.trajectories, start):
            assert np.allclose(tr, s * np.exp(1j * system.grid / 2), atol=1e-7)

    def test_label_shuffle_invariance(self, rng):
        fam = family_random_trig(3, 99)
        ts = np.linspace(*fam.domain, 257)
        from rootreg.polynomials import solve_batch_coeffs

        roots = solve_batch_coeffs(fam.coeff_matrix(ts))
        ref = chain_match(roots)
        shuffled = roots.copy()
        for i in range(len(ts)):
            shuffled[i] = shuffled[i][rng.permutation(3)]
        got = chain_match(shuffled)
        ref_set = {tuple(np.round(tr, 9)) for tr in ref}
        got_set = {tuple(np.round(tr, 9)) for tr in got}
        assert ref_set == got_set

    def test_tschirnhausen_equivariance(self):
        fam = family_random_trig(3, 5)
        reduced, shift = tschirnhausen_curves(fam.coeffs, 3)
        red_fam = CurveFamily(3, (ConstCurve(0.0),) + reduced, fam.domain)
        grid = np.linspace(*fam.domain, 513)
        sys_orig = track_curve(fam, grid=grid)
        sys_red = track_curve(red_fam, grid=grid)
        shift_vals = shift.values(grid)
        # compare as sets of curves within 1e-9
        for tr_b in sys_red.trajectories:
            shifted = tr_b - shift_vals
            dmin = min(np.max(np.abs(shifted - tr_o)) for tr_o in sys_orig.trajectories)
            assert dmin <= 1e-9


class TestMonodromy:
    def test_constant_loop_identity(self):
        fam = CurveFamily(2, (ConstCurve(0.0), ConstCurve(-1.0)), (0.0, 2 * np.pi))
        assert monodromy_loop(fam) == (0, 1)

    def test_square_root_transposition(self):
        perm = monodromy_loop(family_zn_minus_loop(2))
        assert perm == (1, 0)

    def test_cube_root_three_cycle(self):
        perm = monodromy_loop(family_zn_minus_loop(3))
        seen = set()
        i = 0
        for _ in range(3):
            i = perm[i]
            seen.add(i)
        assert len(seen) == 3  # a single 3-cycle

    def test_not_closed_raises(self):
        fam = family_zn_minus_t(2, (0.0, 1.0))
        with pytest.raises(ValueError):
            monodromy_loop(fam)


class TestRegularityReport:
    def test_sqrt_derivative_l1(self):
        fam = family_zn_minus_t(2, (0.0, 1.0))
        system = track_curve(fam, initial_grid=513)
        rep = regularity_report(system, 0, 1.0, fam, coefficient_scale=1.0)
        assert abs(rep.lp_of_derivative - 1.0) < 1e-9  # telescoping: var of sqrt
        assert rep.holder_quotient <= rep.lp_of_derivative * (1 + 1e-9)

    def test_constant_root(self):
        fam = CurveFamily(2, (ConstCurve(0.0), ConstCurve(-1.0)), (0.0, 1.0))
        system = track_curve(fam, initial_grid=33)
        rep = regularity_report(system, 0, 1.5, fam)
        assert rep.lp_of_derivative == 0.0 and rep.w1p_norm > 0

    def test_cube_root_range_flag(self):
        fam = family_zn_minus_t(3, (0.0, 1.0))
        grid = np.geomspace(1e-8, 1.0, 4001)
        system = track_curve(fam, grid=grid)
        branch = int(np.argmax(system.trajectories[:, -1].real))
        rep_in = regularity_report(system, branch, 1.4, fam, coefficient_scale=1.0)
        rep_out = regularity_report(system, branch, 1.5, fam, coefficient_scale=1.0)
        assert rep_in.in_guaranteed_range and not rep_out.in_guaranteed_range
        closed = (3 ** (-1.4) * (1 - 1e-8 ** (1 - 1.4 * 2 / 3)) / (1 - 1.4 * 2 / 3)) ** (1 / 1.4)
        assert abs(rep_in.lp_of_derivative - closed) < 0.02 * closed


class TestAnDistance:
    def test_same_multiset(self):
        assert an_distance([1, 2, 3], [3, 1, 2]) == 0.0

    def test_pair_examples(self):
        assert abs(an_distance([0, 0], [1, 1]) - np.sqrt(2)) < 1e-14
        assert abs(an_distance([0, 2], [1, 1]) - np.sqrt(2)) < 1e-14


class TestIntrinsicEnergy:
    def test_constant_map(self):
        ts = np.linspace(0, 1, 33)
        mv = MultiValued(ts, np.stack([np.ones_like(ts), -np.ones_like(ts)]).astype(complex))
        assert intrinsic_w1p_energy(mv, 1.0) == 0.0

    def test_sqrt_pair(self):
        ts = np.linspace(0, 1, 8193)
        mv = MultiValued(ts, np.stack([np.sqrt(ts), -np.sqrt(ts)]).astype(complex))
        assert abs(intrinsic_w1p_energy(mv, 1.0) - np.sqrt(2)) < 1e-12

    def test_loop(self):
        th = np.linspace(0, 2 * np.pi, 8193)
        b = np.exp(1j * th / 2)
        mv = MultiValued(th, np.stack([b, -b]))
        assert abs(intrinsic_w1p_energy(mv, 1.0) - 2 * np.pi * np.sqrt(2) / 2) < 1e-5

    def test_matches_branch_energy(self):
        fam = family_random_trig(3, 17)
        system = track_curve(fam, initial_grid=4097)
        mv = system.as_multivalued()
        direct = intrinsic_w1p_energy(mv, 1.3)
        steps = np.diff(system.grid)
        slopes = np.abs(np.diff(system.trajectories, axis=1)) / steps
        density = np.sqrt((slopes**2).sum(axis=0))
        matched = float(((density**1.3 * steps).sum()) ** (1 / 1.3))
        assert abs(direct - matched) <= 1e-4 * max(direct, matched)


class TestTrackBox:
    def test_cone_branches(self):
        bf = BoxFamily(2, (lambda x, y: 0 * x, lambda x, y: -(x**2 + y**2)), ((-1, 1), (-1, 1)))
        rep = track_box(bf, 1.5, grid=5, samples_per_line=65)
        assert rep.obstruction is None
        assert np.isfinite(rep.lp_dx) and np.isfinite(rep.lp_dy)
        # the stitched branch is +-sqrt(x^2+y^2); compare |branch|
        gx, gy = np.meshgrid(rep.grid_x, rep.grid_y)
        assert np.allclose(np.abs(rep.branch), np.sqrt(gx**2 + gy**2), atol=1e-8)

    def test_constant_in_y_reduces_to_lines(self):
        bf = BoxFamily(2, (lambda x, y: 0 * x, lambda x, y: -(2 + np.sin(x))), ((0, 1), (0, 1)))
        rep = track_box(bf, 1.5, grid=5, samples_per_line=33)
        for row in range(1, len(rep.grid_y)):
            assert np.allclose(rep.branch[row], rep.branch[0], atol=1e-10)
        assert rep.lp_dy < 1e-8

    def test_obstruction_around_branch_point(self):
        bf = BoxFamily(2, (lambda x, y: 0 * x, lambda x, y: -(x + 1j * y)), ((-1, 1), (-1, 1)))
        with pytest.raises(MonodromyObstruction) as exc:
            track_box(bf, 1.5, grid=4)
        assert sorted(exc.value.permutation) == [0, 1]
        assert exc.value.permutation == (1, 0)
        rep = track_box(bf, 1.5, grid=4, detect=True)
        cell, perm = rep.obstruction
        assert perm == (1, 0)
