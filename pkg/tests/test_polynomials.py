import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import multiset_close
from rootreg.errors import AllCoefficientsZero, NoSplit, SingularJacobian, ZeroDominant
from rootreg.kernels import available_backends
from rootreg.polynomials import (
    MonicPolynomial,
    SplitResult,
    TschirnhausenPolynomial,
    cauchy_bound,
    companion_roots,
    dominant_index,
    evaluate,
    from_roots,
    refine_split_newton,
    rescale_to_model,
    resultant,
    solve_roots,
    split_clusters,
    tschirnhausen,
)


def P(*coeffs):
    return MonicPolynomial(tuple(coeffs))


class TestEvaluate:
    def test_z2_minus_1_at_2(self):
        assert evaluate(P(0, -1), 2) == 3

    def test_root_by_symmetry(self):
        assert abs(evaluate(P(0, 1), 1j)) < 1e-15

    def test_constant_term(self):
        assert evaluate(P(0, 2, 1), 0) == 1


class TestSolveRoots:
    def test_symmetric_pair(self):
        rm = solve_roots(P(0, -1))
        assert multiset_close(rm.roots, [1, -1], 1e-10)

    def test_double_root(self):
        rm = solve_roots(P(-2, 1))  # (Z-1)^2
        assert multiset_close(rm.roots, [1, 1], 1e-5)

    def test_cube_roots_of_8(self):
        expected = [2 * np.exp(2j * np.pi * k / 3) for k in range(3)]
        rm = solve_roots(P(0, 0, -8))
        assert multiset_close(rm.roots, expected, 1e-9)

    def test_residual_contract(self):
        rm = solve_roots(P(3, -2, 5, 1j), tol=1e-12)
        bound = 1e-12 * (1 + cauchy_bound(P(3, -2, 5, 1j))) ** 4
        assert rm.residual <= bound

    def test_deterministic(self):
        a = solve_roots(P(1j, -2, 0.5)).roots
        b = solve_roots(P(1j, -2, 0.5)).roots
        assert a == b

    def test_degree_one(self):
        rm = solve_roots(P(3 + 4j))
        assert rm.roots == (-3 - 4j,)


class TestFromRoots:
    def test_symmetric_pair(self):
        assert from_roots([1, -1]).coeffs == (0, -1)

    def test_double_root(self):
        assert from_roots([1, 1]).coeffs == (-2, 1)

    def test_conjugate_pair(self):
        got = from_roots([1j, -1j]).coeffs
        assert abs(got[0]) < 1e-15 and abs(got[1] - 1) < 1e-15


class TestCauchyBound:
    def test_zero_polynomial(self):
        assert cauchy_bound(P(0, 0)) == 0.0

    def test_z2_minus_1(self):
        b = cauchy_bound(P(0, -1))
        assert b == 2.0
        for r in solve_roots(P(0, -1)).roots:
            assert abs(r) <= b + 1e-12

    def test_z2_minus_4z(self):
        b = cauchy_bound(P(-4, 0))
        assert b == 8.0
        for r in solve_roots(P(-4, 0)).roots:
            assert abs(r) <= b + 1e-12


class TestTschirnhausen:
    def test_already_reduced(self):
        Q = tschirnhausen(P(0, 5, -1))
        assert Q.coeffs == (5, -1) and Q.shift == 0

    def test_quadratic(self):
        Q = tschirnhausen(P(2, 2))
        assert Q.shift == 1
        assert abs(Q.coeffs[0] - 1) < 1e-15

    def test_cubic(self):
        Q = tschirnhausen(P(3, 0, 0))
        assert Q.shift == 1
        np.testing.assert_allclose(Q.coeffs, [-3, 2], atol=1e-14)
        # roots {0,0,-3} shift to {1,1,-2}
        shifted = solve_roots(Q.to_monic())
        assert multiset_close(shifted.roots, [1, 1, -2], 1e-5)

    def test_root_shift_identity(self, rng):
        for _ in range(30):
            n = int(rng.integers(2, 7))
            coeffs = rng.normal(size=n) + 1j * rng.normal(size=n)
            poly = MonicPolynomial(tuple(coeffs))
            Q = tschirnhausen(poly)
            orig = np.asarray(solve_roots(poly).roots)
            red = np.asarray(solve_roots(Q.to_monic()).roots)
            assert multiset_close(red, orig + Q.shift, 1e-9 * (1 + cauchy_bound(poly)))


class TestDominantIndex:
    def test_weighted_comparison(self):
        assert dominant_index(TschirnhausenPolynomial(3, (4, 1))) == 2

    def test_cube_weight(self):
        assert dominant_index(TschirnhausenPolynomial(3, (0, 8))) == 3

    def test_tie_break_smallest(self):
        assert dominant_index(TschirnhausenPolynomial(3, (1, 1))) == 2

    def test_all_zero_raises(self):
        with pytest.raises(AllCoefficientsZero):
            dominant_index(TschirnhausenPolynomial(3, (0, 0)))


class TestResultant:
    def test_two_by_two(self):
        assert abs(resultant(P(-1), P(1)) - 2) < 1e-14

    def test_common_root(self):
        a = 0.7 - 0.2j
        assert abs(resultant(P(-a), P(-a))) < 1e-14

    def test_three_by_three(self):
        assert abs(resultant(P(0, -1), P(0)) - (-1)) < 1e-14

    def test_root_product_identity(self, rng):
        for _ in range(25):
            n, m = int(rng.integers(1, 5)), int(rng.integers(1, 5))
            pa = MonicPolynomial(tuple(rng.normal(size=n) + 1j * rng.normal(size=n)))
            pb = MonicPolynomial(tuple(rng.normal(size=m) + 1j * rng.normal(size=m)))
            res = resultant(pa, pb)
            prod = np.prod(evaluate(pb, np.asarray(solve_roots(pa).roots)))
            assert abs(res - prod) <= 1e-8 * max(1.0, abs(res))


class TestRescaleToModel:
    def test_k2(self):
        out = rescale_to_model(TschirnhausenPolynomial(3, (4, 0)), 2)
        assert out.coeffs == (1, 0)

    def test_unit_coordinate_exact(self, rng):
        for _ in range(20):
            coeffs = tuple(rng.normal(size=3) + 1j * rng.normal(size=3))
            Q = TschirnhausenPolynomial(4, coeffs)
            k = dominant_index(Q)
            out = rescale_to_model(Q, k)
            assert out.coeffs[k - 2] == 1.0 + 0j

    def test_k3(self):
        out = rescale_to_model(TschirnhausenPolynomial(3, (0, 8)), 3)
        np.testing.assert_allclose(out.coeffs, [0, 1], atol=1e-15)

    def test_zero_dominant(self):
        with pytest.raises(ZeroDominant):
            rescale_to_model(TschirnhausenPolynomial(3, (0, 8)), 2)


class TestSplitClusters:
    def test_separated_pair(self):
        s = split_clusters(P(0, -1))
        assert abs(s.gap - 2) < 1e-9
        got = {tuple(np.round(np.asarray(f.coeffs), 9)) for f in (s.left, s.right)}
        assert got == {(1.0,), (-1.0,)} or multiset_close(
            list(s.left_roots) + list(s.right_roots), [1, -1], 1e-9
        )

    def test_modulus_grouping(self):
        # Z^3 - 100 Z: the {0} vs {+-10} partition wins on the modulus line
        s = split_clusters(P(0, -100, 0))
        sizes = sorted([s.left.degree, s.right.degree])
        assert sizes == [1, 2]
        small = s.left if s.left.degree == 1 else s.right
        assert abs(small.coeffs[0]) < 1e-9  # the factor Z
        assert abs(s.gap - 10) < 1e-8

    def test_all_roots_equal(self):
        with pytest.raises(NoSplit):
            split_clusters(P(0, 0))  # Z^2

    def test_product_reconstructs(self, rng):
        for _ in range(25):
            n = int(rng.integers(2, 7))
            coeffs = rng.normal(size=n) + 1j * rng.normal(size=n)
            poly = MonicPolynomial(tuple(coeffs))
            try:
                s = split_clusters(poly, gap_factor=1.05)
            except NoSplit:
                continue
            prod = np.convolve(s.left.full_coeffs(), s.right.full_coeffs())[1:]
            scale = max(1.0, float(np.max(np.abs(poly.array()))))
            assert np.max(np.abs(prod - poly.array())) <= 1e-9 * scale
            assert s.resultant_abs > 0
            both = list(s.left_roots) + list(s.right_roots)
            assert multiset_close(both, list(solve_roots(poly).roots), 1e-7 * (1 + cauchy_bound(poly)))


class TestRefineSplitNewton:
    def test_fixed_point(self):
        s = split_clusters(P(0, -1))
        refined, iters = refine_split_newton(P(0, -1), s)
        assert iters <= 2

    def test_perturbed_guess(self):
        guess = SplitResult(P(-1.001), P(0.999), 2.0, 2.0)
        refined, iters = refine_split_newton(P(0, -1), guess)
        assert iters <= 8
        np.testing.assert_allclose(refined.left.coeffs, [-1], atol=1e-12)
        np.testing.assert_allclose(refined.right.coeffs, [1], atol=1e-12)

    def test_shared_root_singular(self):
        a = 0.5 + 0j
        guess = SplitResult(P(-a), P(-a), 0.0, 0.0)
        with pytest.raises(SingularJacobian):
            refine_split_newton(P(-2 * a, a * a), guess)


class TestRoundTrip:
    def test_random_roots_round_trip(self, rng):
        for _ in range(60):
            n = int(rng.integers(1, 9))
            roots = rng.uniform(-10, 10, size=n) + 1j * rng.uniform(-10, 10, size=n)
            poly = from_roots(roots)
            rm = solve_roots(poly)
            assert multiset_close(rm.roots, roots, 1e-8 * (1 + cauchy_bound(poly)))

    def test_companion_matrix_agrees(self, rng):
        for _ in range(20):
            n = int(rng.integers(2, 8))
            poly = MonicPolynomial(tuple(rng.normal(size=n) + 1j * rng.normal(size=n)))
            a = solve_roots(poly).roots
            b = companion_roots(poly)
            assert multiset_close(a, b, 1e-7 * (1 + cauchy_bound(poly)))

    def test_backends_agree(self, rng):
        backends = available_backends()
        if len(backends) < 2:
            pytest.skip("compiled backend not built")
        for _ in range(20):
            n = int(rng.integers(1, 8))
            rows = (rng.normal(size=(3, n)) + 1j * rng.normal(size=(3, n)))
            out = {}
            for name, solver in backends.items():
                roots, _, ok = solver(rows.copy(), 1e-12, 300)
                assert ok.all()
                out[name] = roots
            for i in range(rows.shape[0]):
                scale = 1 + cauchy_bound(MonicPolynomial(tuple(rows[i])))
                assert multiset_close(out["python"][i], out["compiled"][i], 1e-8 * scale)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
                min_size=1, max_size=6))
def test_cauchy_containment_property(roots):
    poly = from_roots(np.asarray(roots, dtype=complex))
    bound = cauchy_bound(poly)
    solved = solve_roots(poly)
    for r in solved.roots:
        assert abs(r) <= bound + 1e-6 * (1 + bound)
