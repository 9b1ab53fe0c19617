import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gaborzak.cocycle import (
    SyntheticPhaseField,
    ThetaEstimate,
    balanced_fraction,
    case3_verdict,
    cluster_set_c1,
    cluster_set_c2,
    cluster_sets_match,
    normalized_phase_sequence,
    phase_branch,
    phase_cocycle_iterate,
    phase_mean_along_orbit,
    propagate,
    rigidity_scan,
    theta_birkhoff,
    theta_haar,
)
from gaborzak.errors import NumericalFailure, PhaseUndefined
from gaborzak.numerics import (
    QuadratureSpec,
    mod1_dist,
    parse_coordinate,
    reduce_mod1,
)
from gaborzak.orbit import Gamma, classify, orbit_points, subgroup_closure
from gaborzak.trigpoly import TrigPolynomial
from gaborzak.windows import GaussianWindow
from gaborzak.zak import zak_transform

mk = parse_coordinate

# 1 + e^{-2 pi i t} - e^{-2 pi i w}: mean log-modulus over w has the closed
# form ln max(2|cos pi t|, 1)
P1 = TrigPolynomial(2, [((0, 0), 1.0), ((-1, 0), 1.0), ((0, -1), -1.0)])
# never vanishes: |p| >= 1 - 1/4 - 1/4 = 1/2
P2 = TrigPolynomial(2, [((0, 0), 1.0), ((1, 1), 0.25), ((4, -2), 0.25)])


def _closure(tokens):
    g = Gamma.from_tokens(tokens)
    return subgroup_closure(g, classify(g))


VERT = _closure("0,sqrt2")  # {0} x T
HORIZ = _closure("sqrt2,0")  # T x {0}
DIAG = _closure("sqrt2,sqrt2")  # {(s, s)}

MID_REFINE = QuadratureSpec("composite-midpoint", 1024, True)

# 50-digit quadrature values of the w-mean of ln|P2(t, .)|
P2_VERTICAL_THETA = {
    0.0: 0.0150479661889,
    0.1: -0.0128163092881,
    0.37: 0.00347460978505,
}


class TestPropagate:
    def setup_method(self):
        self.gamma = Gamma.from_tokens("0,sqrt2")
        self.base = reduce_mod1([0.1, 0.2])

    def test_increments_are_log_moduli(self):
        traj = propagate(1.0, self.base, self.gamma, P2, 200)
        q = np.abs(P2.eval_points(orbit_points(self.base, self.gamma, 200)))
        steps = np.diff(traj.logF)
        assert np.max(np.abs(steps - np.log(q))) < 1e-10

    def test_exponential_matches_direct_product(self):
        traj = propagate(2.0, self.base, self.gamma, P2, 1000)
        q = np.abs(P2.eval_points(orbit_points(self.base, self.gamma, 1000)))
        direct = 2.0
        for n in (1, 10, 100, 1000):
            direct = 2.0 * float(np.prod(q[:n]))
            got = math.exp(traj.logF[n])
            assert abs(got - direct) <= 1e-8 * direct

    def test_time_average_approaches_coset_mean(self):
        # the forward averages converge to the w-mean of ln|p| on the
        # invariant vertical coset through the base point
        traj = propagate(1.0, self.base, self.gamma, P2, 100_000)
        avg = traj.logF[100_000] / 100_000
        assert abs(avg - P2_VERTICAL_THETA[0.1]) < 1e-4

    def test_skipped_steps_poison_later_comparisons(self):
        traj = propagate(1.0, self.base, self.gamma, P2, 300, skip_threshold=0.8)
        assert traj.skipped
        first = traj.skipped[0][0]
        assert traj.comparable[: first + 1].all()
        assert not traj.comparable[first + 1 :].any()
        assert "below skip threshold" in traj.skipped[0][1]

    def test_zero_start_is_absorbing(self):
        traj = propagate(0.0, self.base, self.gamma, P2, 50)
        assert traj.zero_orbit
        assert np.all(np.isneginf(traj.logF))
        assert traj.comparable.all()

    def test_validation(self):
        with pytest.raises(ValueError):
            propagate(1.0, self.base, self.gamma, P2, 0)
        with pytest.raises(ValueError):
            propagate(-1.0, self.base, self.gamma, P2, 10)
        with pytest.raises(ValueError):
            propagate(1.0, self.base, self.gamma, P2, 10, skip_threshold=0.0)


class TestThetaBirkhoff:
    def test_smooth_coset(self):
        est = theta_birkhoff(
            P1, reduce_mod1([0.0, 0.2]), Gamma.from_tokens("0,sqrt2"), 200_000
        )
        assert est.method == "birkhoff"
        assert est.reliable
        assert abs(est.value - math.log(2)) < 1e-4

    def test_unimodular_coset_is_exact_zero(self):
        # at t = 1/2 the polynomial reduces to -e^{-2 pi i w}
        est = theta_birkhoff(
            P1, reduce_mod1([0.5, 0.2]), Gamma.from_tokens("0,sqrt2"), 2000
        )
        assert abs(est.value) < 1e-12

    def test_finite_orbit_equals_representative_mean(self):
        gamma = Gamma.from_tokens("1/2,1/3")
        lam = reduce_mod1([0.05, 0.11])
        est = theta_birkhoff(P2, lam, gamma, 6000)
        H = _closure("1/2,1/3")
        manual = np.mean(
            [
                math.log(abs(P2.eval(np.mod(lam.array() + r.array(), 1.0))))
                for r in H.torsion_representatives
            ]
        )
        assert abs(est.value - manual) < 1e-12

    def test_needs_minimum_samples(self):
        with pytest.raises(ValueError):
            theta_birkhoff(P1, reduce_mod1([0, 0]), Gamma.from_tokens("0,sqrt2"), 999)


class TestThetaHaar:
    def test_reference_values_on_vertical_cosets(self):
        cases = [
            (0.0, math.log(2.0), 1e-12),
            (0.25, 0.5 * math.log(2.0), 1e-12),
            (0.4, 0.0, 1e-9),
        ]
        for t, want, tol in cases:
            est = theta_haar(P1, reduce_mod1([t, 0.0]), VERT, MID_REFINE)
            assert abs(est.value - want) < tol, f"t={t}"
            assert est.method == "haar-quadrature"

    def test_singular_coset_within_budget(self):
        # |1 + e^{-2 pi i /3}| = 1, so the zero sits on the coset itself
        est = theta_haar(P1, reduce_mod1([1 / 3, 0.0]), VERT, MID_REFINE)
        assert abs(est.value) < 1e-3
        assert est.skipped_fraction < 1e-6

    def test_gauss_legendre_on_smooth_coset(self):
        quad = QuadratureSpec("gauss-legendre", 64, False)
        est = theta_haar(P1, reduce_mod1([0.0, 0.0]), VERT, quad)
        assert abs(est.value - math.log(2)) < 1e-10

    def test_nonvanishing_poly_frozen_values(self):
        quad = QuadratureSpec("composite-midpoint", 1024, False)
        for t, want in P2_VERTICAL_THETA.items():
            est = theta_haar(P2, reduce_mod1([t, 0.0]), VERT, quad)
            assert abs(est.value - want) < 1e-10

    def test_horizontal_mean_vanishes_for_p2(self):
        # as a function of t the polynomial has all its reciprocal roots
        # inside the unit disk, so the t-mean of the log-modulus is zero
        quad = QuadratureSpec("composite-midpoint", 512, False)
        est = theta_haar(P2, reduce_mod1([0.0, 0.37]), HORIZ, quad)
        assert abs(est.value) < 1e-12

    def test_finite_subgroup_is_representative_average(self):
        H = _closure("1/2,1/3")
        lam = reduce_mod1([0.05, 0.11])
        est = theta_haar(P2, lam, H, MID_REFINE)
        manual = np.mean(
            [
                math.log(abs(P2.eval(np.mod(lam.array() + r.array(), 1.0))))
                for r in H.torsion_representatives
            ]
        )
        assert abs(est.value - manual) < 1e-12

    def test_identically_zero_coset_fails_loudly(self):
        # 1 - e^{2 pi i (t - w)} vanishes on the whole diagonal coset, so
        # refinement can never isolate the zero set
        p = TrigPolynomial(2, [((0, 0), 1.0), ((1, -1), -1.0)])
        quad = QuadratureSpec("composite-midpoint", 32, True)
        with pytest.raises(NumericalFailure):
            theta_haar(p, reduce_mod1([0.0, 0.0]), DIAG, quad)

    def test_unrefined_singular_estimate_is_flagged(self):
        p = TrigPolynomial(2, [((0, 0), 1.0), ((1, -1), -1.0)])
        quad = QuadratureSpec("composite-midpoint", 32, False)
        est = theta_haar(p, reduce_mod1([0.0, 0.0]), DIAG, quad)
        assert est.skipped_fraction == 1.0
        assert not est.reliable
        with pytest.raises(ValueError):
            case3_verdict(est)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            theta_haar(P1, reduce_mod1([0.3]), VERT, MID_REFINE)


class TestCase3Verdict:
    def test_three_regimes(self):
        quad = QuadratureSpec("composite-midpoint", 1024, False)
        grow = theta_haar(P2, reduce_mod1([0.0, 0.0]), VERT, quad)
        decay = theta_haar(P2, reduce_mod1([0.1, 0.0]), VERT, quad)
        flat = theta_haar(P1, reduce_mod1([0.4, 0.0]), VERT, MID_REFINE)
        assert case3_verdict(grow) == "growth"
        assert case3_verdict(decay) == "decay"
        assert case3_verdict(flat) == "balanced"

    def test_tolerance_validated(self):
        est = ThetaEstimate(0.0, "birkhoff", 1000, 0.0)
        with pytest.raises(ValueError):
            case3_verdict(est, tolerance=0.0)

    def test_unreliable_estimate_refused(self):
        est = ThetaEstimate(0.0, "birkhoff", 1000, 0.5)
        with pytest.raises(ValueError):
            case3_verdict(est)


def test_balanced_fraction_matches_closed_form():
    # ln max(2|cos pi t|, 1) vanishes exactly for t in [1/3, 2/3]; on the
    # 8-point grid that is t in {3/8, 4/8, 5/8}, at every w
    quad = QuadratureSpec("composite-midpoint", 256, True)
    frac = balanced_fraction(P1, VERT, quad, resolution=8)
    assert frac == 3 / 8


class TestPhaseBranch:
    def test_axis_cases(self):
        assert phase_branch(1.0).theta == 0.0
        assert phase_branch(1.0).case_tag == "re-positive"
        assert phase_branch(-2.0).theta == 0.5
        assert phase_branch(-2.0).case_tag == "re-negative"
        assert phase_branch(3j).theta == 0.25
        assert phase_branch(3j).case_tag == "im-positive"
        assert phase_branch(-0.5j).theta == 0.75
        assert phase_branch(-0.5j).case_tag == "im-negative"

    def test_quadrant_values(self):
        assert abs(phase_branch(1 + 1j).theta - 0.125) < 1e-15
        assert abs(phase_branch(1 - 1j).theta - 0.875) < 1e-15
        assert abs(phase_branch(-1 + 1j).theta - 0.375) < 1e-15
        assert abs(phase_branch(-1 - 1j).theta - 0.625) < 1e-15

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            phase_branch(0.0)

    @given(
        st.complex_numbers(
            min_magnitude=1e-6, max_magnitude=1e6, allow_nan=False, allow_infinity=False
        )
    )
    @settings(max_examples=200, deadline=None)
    def test_differs_from_principal_argument_by_integer(self, z):
        theta = phase_branch(z).theta
        assert 0.0 <= theta < 1.0
        rebuilt = abs(z) * cmath.exp(2j * math.pi * theta)
        assert abs(rebuilt - z) <= 1e-9 * abs(z)


class TestPhaseCocycleIterate:
    BASE = reduce_mod1([0.3, 0.7])
    PAIRS = [  # <alpha, beta> in {0, 1/2, 1, sqrt2}
        ("sqrt2", "0"),
        ("1/2", "1"),
        ("1", "1"),
        ("1", "sqrt2"),
    ]

    def test_zero_steps_returns_seed(self):
        got = phase_cocycle_iterate(0.37, P2, self.BASE, (mk("1"),), (mk("1"),), 0)
        assert got == 0.37

    def test_single_step_formula(self):
        alpha, beta = (mk("1/2"),), (mk("1"),)
        got = phase_cocycle_iterate(0.37, P2, self.BASE, alpha, beta, 1)
        phi0 = phase_branch(P2.eval(self.BASE.array())).theta
        want = (0.37 + phi0 + self.BASE[0] * 1.0) % 1.0
        assert mod1_dist(got - want) < 1e-10

    def test_closed_form_matches_stepwise_recursion(self):
        for a_tok, b_tok in self.PAIRS:
            alpha, beta = (mk(a_tok),), (mk(b_tok),)
            field = SyntheticPhaseField(P2, self.BASE, alpha, beta, theta0=0.37)
            for n in range(65):
                lhs = field.phase_at_step(n)
                rhs = phase_cocycle_iterate(0.37, P2, self.BASE, alpha, beta, n)
                assert mod1_dist(lhs - rhs) < 1e-8, (a_tok, b_tok, n)

    def test_constant_polynomial_telescopes_to_quadratic_term(self):
        # p = 1 has zero branch angle, and n(n-1)/2 <a,b> is an integer for
        # <a,b> = 1, so only the n <t,b> term survives
        one = TrigPolynomial(2, [((0, 0), 1.0)])
        alpha, beta = (mk("1"),), (mk("1"),)
        for n in (1, 2, 7, 50):
            got = phase_cocycle_iterate(0.2, one, self.BASE, alpha, beta, n)
            want = (0.2 + n * self.BASE[0]) % 1.0
            assert mod1_dist(got - want) < 1e-10

    def test_vanishing_orbit_point_raises_with_step(self):
        # P1(1/3, 1/6) = 0; place the zero at step 1
        base = reduce_mod1([1 / 3, 1 / 6 - 0.25])
        with pytest.raises(PhaseUndefined) as exc:
            phase_cocycle_iterate(0.0, P1, base, (mk("0"),), (mk("1/4"),), 3)
        assert exc.value.step == 1

    def test_validation(self):
        with pytest.raises(ValueError):
            phase_cocycle_iterate(0.0, P2, self.BASE, (mk("1"),), (mk("1"),), -1)
        with pytest.raises(ValueError):
            phase_cocycle_iterate(0.0, P2, reduce_mod1([0.3]), (mk("1"),), (mk("1"),), 1)


class TestSyntheticPhaseField:
    def test_point_at_step_walks_the_orbit(self):
        field = SyntheticPhaseField(
            P2, reduce_mod1([0.3, 0.7]), (mk("sqrt2"),), (mk("sqrt3"),)
        )
        pt = field.point_at_step(3)
        want_t = (0.3 - 3 * math.sqrt(2)) % 1.0
        want_w = (0.7 + 3 * math.sqrt(3)) % 1.0
        assert abs(pt[0] - want_t) < 1e-12
        assert abs(pt[1] - want_w) < 1e-12

    def test_lift_extension_is_order_independent(self):
        args = (P2, reduce_mod1([0.3, 0.7]), (mk("sqrt2"),), (mk("sqrt3"),))
        eager = SyntheticPhaseField(*args, theta0=0.1)
        lazy = SyntheticPhaseField(*args, theta0=0.1)
        direct = eager.phase_lift(40)
        lazy.phase_lift(7)
        lazy.phase_lift(23)
        assert lazy.phase_lift(40) == direct

    def test_vanishing_orbit_raises(self):
        field = SyntheticPhaseField(
            P1, reduce_mod1([1 / 3, 1 / 6]), (mk("0"),), (mk("0"),)
        )
        with pytest.raises(PhaseUndefined) as exc:
            field.phase_lift(1)
        assert exc.value.step == 0


class TestNormalizedPhaseSequence:
    BASE = reduce_mod1([0.3, 0.7])

    def test_unit_modulus_and_determinism(self):
        field = SyntheticPhaseField(P2, self.BASE, (mk("sqrt2"),), (mk("sqrt3"),))
        ns = [1, 5, 25, 125]
        first = normalized_phase_sequence(
            field, self.BASE, (mk("sqrt2"),), (mk("sqrt3"),), ns
        )
        again = normalized_phase_sequence(
            field, self.BASE, (mk("sqrt2"),), (mk("sqrt3"),), ns
        )
        assert first == again
        for z in first:
            assert abs(abs(z) - 1.0) < 1e-12

    def test_untwisted_sequence_converges_to_branch_mean(self):
        # with beta = 0 the lift is theta0 plus the plain branch sum, so
        # zeta_n tends to exp(2 pi i mean(phi)); the witness polynomial
        # stays inside one branch sheet (no winding)
        pw = TrigPolynomial(2, [((0, 0), 4 + 1j), ((1, 1), 1.0)])
        alpha, beta = (mk("sqrt2"),), (mk("0"),)
        n = 4000
        field = SyntheticPhaseField(pw, self.BASE, alpha, beta, theta0=0.11)
        zeta = normalized_phase_sequence(field, self.BASE, alpha, beta, [n])[0]
        mean, winding = phase_mean_along_orbit(pw, self.BASE, alpha, beta, n)
        assert winding == 0
        want = cmath.exp(2j * math.pi * (0.11 / n + mean))
        assert abs(zeta - want) < 1e-10

    def test_zak_grid_branch_matches_fresh_sums(self):
        # the reduced-point branch plus quasi-periodicity correction must
        # reproduce the measurable branch of the unreduced lattice sum
        Z = zak_transform(GaussianWindow(), resolution=16, truncation=6)
        alpha, beta = (mk("sqrt2"),), (mk("sqrt3"),)
        ns = [1, 2, 3, 7]
        zetas = normalized_phase_sequence(Z, self.BASE, alpha, beta, ns)
        for n, zeta in zip(ns, zetas):
            t_n = self.BASE[0] - n * math.sqrt(2)
            w_n = self.BASE[1] + n * math.sqrt(3)
            direct = phase_branch(Z.point_value(np.array([t_n]), np.array([w_n]))).theta
            theta_n = (np.angle(zeta**n) / (2 * np.pi)) % 1.0
            assert mod1_dist(theta_n - direct) < 1e-10

    def test_zak_zero_raises(self):
        Z = zak_transform(GaussianWindow(), resolution=16, truncation=6)
        base = reduce_mod1([0.5, 0.5])
        with pytest.raises(PhaseUndefined):
            normalized_phase_sequence(Z, base, (mk("1"),), (mk("1"),), [1])

    def test_n_must_be_positive(self):
        field = SyntheticPhaseField(P2, self.BASE, (mk("1"),), (mk("1"),))
        with pytest.raises(ValueError):
            normalized_phase_sequence(field, self.BASE, (mk("1"),), (mk("1"),), [0])


class TestPhaseMeanAlongOrbit:
    BASE = reduce_mod1([0.3, 0.7])

    def test_no_wrap_polynomial_recovers_harmonic_mean(self):
        # mean of arg(c + u) over |u| = 1 is arg(c) when |c| > 1
        pw = TrigPolynomial(2, [((0, 0), 4 + 1j), ((1, 1), 1.0)])
        mean, winding = phase_mean_along_orbit(
            pw, self.BASE, (mk("sqrt2"),), (mk("sqrt3"),), 20000
        )
        assert winding == 0
        assert abs(mean - math.atan2(1, 4) / (2 * math.pi)) < 1e-4

    def test_wrapping_branch_averages_to_integer(self):
        # P2's branch oscillates across the 0/1 seam; the unwrapped mean is
        # an integer mod 1 and the winding count records the crossings
        mean, winding = phase_mean_along_orbit(
            P2, self.BASE, (mk("sqrt2"),), (mk("sqrt3"),), 1001
        )
        assert winding > 0
        assert mod1_dist(mean) < 1e-3

    def test_validation(self):
        with pytest.raises(ValueError):
            phase_mean_along_orbit(P2, self.BASE, (mk("1"),), (mk("1"),), 0)
        with pytest.raises(PhaseUndefined):
            phase_mean_along_orbit(
                P1, reduce_mod1([1 / 3, 1 / 6]), (mk("0"),), (mk("0"),), 5
            )


class TestClusterSets:
    def test_c1_orders(self):
        assert len(cluster_set_c1(mk("2")).points) == 1
        assert len(cluster_set_c1(mk("0")).points) == 1
        assert len(cluster_set_c1(mk("1")).points) == 2
        assert len(cluster_set_c1(mk("1/2")).points) == 4
        assert len(cluster_set_c1(mk("2/3")).points) == 3

    def test_c1_finite_is_a_group(self):
        pts = cluster_set_c1(mk("1/2")).points
        assert any(abs(p - 1.0) < 1e-12 for p in pts)
        for a in pts:
            for b in pts:
                assert any(abs(a * b - c) < 1e-12 for c in pts)

    def test_c1_irrational_is_full_circle(self):
        c1 = cluster_set_c1(mk("sqrt2"))
        assert c1.kind == "full-circle"
        assert c1.points == ()
        assert abs(c1.generator_angle - ((-math.sqrt(2) / 2) % 1.0)) < 1e-12

    def test_c2_integer_beta_freezes_fractional_part(self):
        pts = cluster_set_c2((mk("sqrt2"),), (mk("2"),), reduce_mod1([0.3]), 500)
        assert len(pts) == 1
        want = cmath.exp(-2j * math.pi * math.sqrt(2) * 0.3)
        assert abs(pts[0] - want) < 1e-12

    def test_c2_rational_beta_cycles(self):
        pts = cluster_set_c2((mk("sqrt2"),), (mk("1/3"),), reduce_mod1([0.3]), 500)
        assert len(pts) == 3
        want = {
            cmath.exp(-2j * math.pi * math.sqrt(2) * ((0.3 + k / 3) % 1.0))
            for k in range(3)
        }
        for p in pts:
            assert min(abs(p - w) for w in want) < 1e-10

    def test_c2_keeps_earliest_representative(self):
        pts = cluster_set_c2((mk("sqrt2"),), (mk("1/3"),), reduce_mod1([0.3]), 500)
        direct = [
            cmath.exp(-2j * math.pi * math.sqrt(2) * ((0.3 + n / 3) % 1.0))
            for n in (1, 2, 3)
        ]
        for got, want in zip(pts, direct):
            assert abs(got - want) < 1e-12

    def test_c2_irrational_beta_fills_circle(self):
        pts = cluster_set_c2((mk("1"),), (mk("sqrt2"),), reduce_mod1([0.0]), 4000)
        assert len(pts) > 500
        angles = np.sort(np.angle(pts))
        gaps = np.diff(np.concatenate([angles, [angles[0] + 2 * np.pi]]))
        assert np.max(gaps) < 0.05

    def test_match_accepts_rotation(self):
        c1 = cluster_set_c1(mk("1"))  # {1, -1}
        rho = cmath.exp(0.3j)
        assert cluster_sets_match(c1, [rho, -rho])
        assert not cluster_sets_match(c1, [rho])
        assert not cluster_sets_match(c1, [rho, rho * cmath.exp(1j)])

    def test_match_full_circle_is_uninformative(self):
        c1 = cluster_set_c1(mk("sqrt2"))
        assert cluster_sets_match(c1, [1.0 + 0j])

    def test_validation(self):
        with pytest.raises(ValueError):
            cluster_set_c2((mk("1"),), (mk("1"),), reduce_mod1([0.0]), 0)
        with pytest.raises(ValueError):
            cluster_set_c2((mk("1"),), (mk("1"), mk("1")), reduce_mod1([0.0]), 10)


class TestRigidityScan:
    def test_integer_beta_has_no_defect(self):
        out = rigidity_scan(P2, (mk("sqrt2"),), (mk("2"),), [(1,), (3,), (-2,)])
        assert [d for _, d in out] == [0.0, 0.0, 0.0]

    def test_fractional_beta_defects(self):
        out = rigidity_scan(P2, (mk("1"),), (mk("1/3"),), [(1,), (3,)])
        assert out[0] == ((1,), pytest.approx(1 / 3, abs=1e-15))
        assert out[1] == ((3,), 0.0)

    def test_irrational_beta_defect(self):
        out = rigidity_scan(P2, (mk("1"),), (mk("sqrt2"),), [(1,)])
        assert abs(out[0][1] - (math.sqrt(2) - 1)) < 1e-12

    def test_two_dimensional_shift(self):
        p4 = TrigPolynomial(4, [((0, 0, 0, 0), 1.0)])
        out = rigidity_scan(
            p4, (mk("1"), mk("1")), (mk("1/2"), mk("1/3")), [(1, 2)]
        )
        # <(1,2), (1/2,1/3)> = 7/6, one sixth away from the integers
        assert out[0][1] == pytest.approx(1 / 6, abs=1e-15)

    def test_validation(self):
        with pytest.raises(ValueError):
            rigidity_scan(P2, (mk("1"),), (mk("1"),), [(0,)])
        with pytest.raises(ValueError):
            rigidity_scan(P2, (mk("1"),), (mk("1"),), [(1, 1)])
