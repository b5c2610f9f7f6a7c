import numpy as np
import pytest

from rootreg.curves import ConstCurve, PolyCurve, PowerCurve, RadicalBranchCurve, TrigCurve, random_trig_curve
from rootreg.errors import SignChange
from rootreg.function_spaces import SampledFunction, singularity_graded_grid, weak_lp_quasinorm
from rootreg.glaeser import (
    check_interpolation_hypothesis,
    glaeser_check,
    glaeser_constant_transform,
    interpolation_bound,
    radical_envelope,
    taylor_bound_check,
)
from rootreg.quadrature import detect_zeros


class TestInterpolationBound:
    def test_single_node_at_one(self):
        ib = interpolation_bound(1, 1.0, 1.0, 1.0, 1.0)
        assert ib.branch == "nodes"
        assert abs(ib.nodes[0] - 1.0) < 1e-14

    def test_zero_m_classical(self):
        ib = interpolation_bound(3, 0.5, 2.0, 1.5, 0.0)
        assert ib.branch == "classical"
        assert ib.nodes == ()

    def test_linear_monomial_within_bound(self):
        # P(x) = x satisfies |P| <= 1 + x^2 on [0, 1]
        ib = interpolation_bound(1, 1.0, 1.0, 1.0, 1.0)
        assert 1.0 <= ib.per_coefficient_bounds[0]

    def test_fallback_branch(self):
        ib = interpolation_bound(2, 1.0, 1.0, 1.0, 1e-6)
        assert ib.branch == "large-node-fallback"

    def test_oracle_500_random(self, rng):
        # brute-force validation: whenever the hypothesis holds on a dense
        # grid, the published per-coefficient bounds hold
        violations = 0
        held = 0
        for _ in range(500):
            m = int(rng.integers(1, 5))
            alpha = float(rng.uniform(0.25, 1.0))
            coeffs = rng.normal(size=m) + 1j * rng.normal(size=m)
            A = float(rng.uniform(0.5, 3.0))
            B = float(rng.uniform(0.5, 2.0))
            M = float(rng.choice([0.0, rng.uniform(0.0, 4.0)]))
            if not check_interpolation_hypothesis(coeffs, A, B, M, alpha):
                continue
            held += 1
            ib = interpolation_bound(m, alpha, A, B, M)
            if np.any(np.abs(coeffs) > np.asarray(ib.per_coefficient_bounds)):
                violations += 1
        assert held > 50
        assert violations == 0


class TestTaylorBound:
    def test_affine(self):
        chk = taylor_bound_check(PolyCurve([0.3, 2.0]), (0.0, 1.0), 1, 1.0, 0.5, 1)
        assert chk.holds
        assert abs(chk.lhs - 2.0) < 1e-12

    def test_constant(self):
        chk = taylor_bound_check(ConstCurve(5.0), (0.0, 1.0), 1, 1.0, 0.5, 1)
        assert chk.lhs == 0.0 and chk.holds

    def test_square_rhs_core(self):
        chk = taylor_bound_check(PolyCurve([0, 0, 1]), (-1.0, 1.0), 1, 1.0, 0.5, 1)
        assert abs(chk.lhs - 1.0) < 1e-12
        # RHS core (1/2)(1 + sqrt(2) * 2) times the published constant
        core = 0.5 * (1.0 + np.sqrt(2.0) * 2.0)
        assert abs(chk.rhs - chk.constant * core) < 1e-6 * chk.rhs
        assert chk.holds

    def test_order_out_of_range(self):
        from rootreg.errors import OrderOutOfRange

        with pytest.raises(OrderOutOfRange):
            taylor_bound_check(PolyCurve([0, 1]), (0, 1), 1, 1.0, 0.5, 2)


class TestGlaeserCheck:
    def test_decaying_exponential(self):
        # e^{-t} = e^{-i(i t)}: positive and decreasing on (-1, 1)
        curve = TrigCurve([1j], [1.0])  # exp(i * i t) = exp(-t)
        checks = glaeser_check(curve, (-1.0, 1.0), 1, 1.0)
        assert all(c.holds for c in checks)
        assert all(c.lhs > 0 for c in checks)

    def test_constant(self):
        checks = glaeser_check(ConstCurve(2.0), (-1.0, 1.0), 1, 1.0)
        assert checks[0].lhs == 0.0

    def test_sign_change(self):
        with pytest.raises(SignChange):
            glaeser_check(PolyCurve([0, 1]), (-1.0, 1.0), 1, 1.0)


class TestConstantTransform:
    def test_fixed_point(self):
        for m, alpha in ((1, 1.0), (2, 0.5), (3, 1.0)):
            assert glaeser_constant_transform(1.0, m, alpha, "to_eq4") == 1.0
            assert glaeser_constant_transform(1.0, m, alpha, "to_eq3") == 1.0

    def test_c4(self):
        assert glaeser_constant_transform(4.0, 1, 1.0, "to_eq4") == 4.0

    def test_c_quarter(self):
        assert abs(glaeser_constant_transform(0.25, 1, 1.0, "to_eq4") - 0.5) < 1e-15

    def test_round_trip_dominant_branch(self, rng):
        # for C >= 1 the dominant branch of each max is the constant itself,
        # so the forward transform is the identity and the round trip through
        # that branch returns C
        for _ in range(50):
            C = float(rng.uniform(1.0, 20.0))
            m = int(rng.integers(1, 4))
            alpha = float(rng.uniform(0.25, 1.0))
            fwd = glaeser_constant_transform(C, m, alpha, "to_eq4")
            assert fwd == C
            assert glaeser_constant_transform(fwd, m, alpha, "to_eq3") >= C


class TestRadicalEnvelope:
    def test_linear_g_unit_mass_per_component(self):
        env_half = radical_envelope(PolyCurve([0, 1]), (0.0, 1.0), 1, 1.0)
        assert abs(env_half.weak_p_norm**2 - 1.0) < 1e-3
        env_full = radical_envelope(PolyCurve([0, 1]), (-1.0, 1.0), 1, 1.0)
        assert abs(env_full.weak_p_norm**2 - 2.0) < 2e-3

    def test_constant_g(self):
        env = radical_envelope(ConstCurve(3.0), (0.0, 1.0), 1, 1.0)
        assert np.max(env.lam) == 0.0 and env.weak_p_norm == 0.0

    def test_square_g(self):
        env = radical_envelope(PolyCurve([0, 0, 1]), (0.1, 1.0), 1, 1.0)
        np.testing.assert_allclose(env.lam, 2.0, rtol=1e-12)

    def test_pointwise_identity_exact(self, rng):
        g = random_trig_curve(rng, degree=3, scale=1.0)
        ts = np.linspace(0, 1, 257)
        jets = g.jets(ts, 1)
        ka = 2.0
        lam = np.abs(jets[:, 1]) * np.abs(jets[:, 0]) ** (1.0 / ka - 1.0)
        assert np.allclose(lam * np.abs(jets[:, 0]) ** (1.0 - 1.0 / ka), np.abs(jets[:, 1]),
                           rtol=1e-12)


class TestRadicalWeakNormMatch:
    def test_branch_derivative_matches_envelope(self):
        # f = g^{1/n}: the weak-p norm of f' computed by central differences
        # of the continued branch matches the weak-p norm of Lam/n
        rng = np.random.default_rng(3)
        g = random_trig_curve(rng, degree=2, scale=1.0, real=True)
        n = 2
        p = n / (n - 1.0)
        zeros = detect_zeros(g, 0.0, 1.0)
        grid = singularity_graded_grid(0.0, 1.0, zeros, bulk=2048, per_side=1600)
        rad = RadicalBranchCurve(g, n, (0.0, 1.0))
        fvals = rad.branch_values(grid)
        fd = (fvals[2:] - fvals[:-2]) / (grid[2:] - grid[:-2])
        mid = grid[1:-1]
        lam_over_n = rad.abs_derivative(mid)
        keep = np.isfinite(lam_over_n)
        w_fd = weak_lp_quasinorm(SampledFunction(mid[keep], np.abs(fd[keep]).astype(complex)), p)
        w_env = weak_lp_quasinorm(SampledFunction(mid[keep], lam_over_n[keep].astype(complex)), p)
        assert abs(w_fd - w_env) <= 1e-4 * max(w_fd, w_env)
