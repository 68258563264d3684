"""Stone/moment apparatus and the identity suite."""

import pytest

from rqlab import invariants as inv
from rqlab.exppoly import ExpPoly
from rqlab.problem import ProblemSpec
from rqlab.solver import cached_eigenpair, cached_spectrum, eigenpair_from_function, rescaled

from conftest import PI, quad_integral

S = "symmetric"


@pytest.fixture(scope="module")
def z1():
    return eigenpair_from_function(ProblemSpec(1, 1, S), PI * PI / 4, ExpPoly.cosine(PI / 2), 0)


@pytest.fixture(scope="module")
def z2():
    fn = ExpPoly.constant(1) + ExpPoly.cosine(PI)
    return eigenpair_from_function(ProblemSpec(2, 1, S), PI * PI, fn, 0)


class TestStone:
    def test_closed_form_value(self, z2):
        assert inv.stone(z2) == pytest.approx(-PI * PI, rel=1e-13)

    def test_undefined_for_order_equal_offset(self, z1):
        with pytest.raises(ValueError):
            inv.stone(z1)

    def test_kernel_alone_gives_zero(self, z2):
        kernel_only = eigenpair_from_function(z2.spec, z2.Lambda, z2.kernel_part, 0)
        assert abs(inv.stone(kernel_only)) < 1e-10

    def test_antisymmetric_residue_is_linear(self):
        # odd parity: the reduced-operator residue is c*x and the slope is
        # reported; for (2,1,a) with z = A sin(rho x) + B x it equals -Lambda*B
        pair = cached_spectrum(2, 1, "antisymmetric", 1).pairs[0]
        slope = inv.stone(pair)
        expect = -pair.Lambda * pair.poly_coeffs[1]
        assert slope == pytest.approx(expect, rel=1e-10)
        assert abs(slope) > 1e-8

    def test_scaling_invariance_of_checks(self, z2):
        base = inv.check_stone_identity(z2)
        doubled = inv.check_stone_identity(rescaled(z2, 2.0))
        assert doubled.passed and base.passed
        assert doubled.lhs == pytest.approx(4 * base.lhs, rel=1e-12)
        assert doubled.rhs == pytest.approx(4 * base.rhs, rel=1e-12)


class TestStonePolynomials:
    def test_hand_values_for_3_1(self):
        pair = cached_eigenpair(3, 1, S, 0)
        lam2 = pair.Lambda
        b, c = pair.poly_coeffs[0], pair.poly_coeffs[2]
        sp = inv.stone_polynomials(pair)
        assert sp.coefficients[0] == pytest.approx(2 * c * lam2, rel=1e-10)
        assert sp.coefficients[1] == pytest.approx(2 * c + lam2 * b, rel=1e-10)
        h1 = sp.h(1).zero_frequency_coefficients()
        assert h1[2].real == pytest.approx(lam2 * c, rel=1e-10)
        ladder = sp.h(1).differentiate(2) - sp.h(0)
        assert ladder.magnitude_bound() <= 1e-12 * sp.h(0).magnitude_bound()

    def test_negative_index_convention(self, z2):
        sp = inv.stone_polynomials(z2)
        assert sp.h(-1).is_zero()
        assert sp.h(-5).is_zero()

    def test_single_stone_for_2_1(self, z2):
        sp = inv.stone_polynomials(z2, k_max=0)
        assert sp.coefficients == pytest.approx((-PI * PI,), rel=1e-12)

    def test_cross_order_consistency_enforced(self):
        pair = cached_eigenpair(5, 1, S, 0)
        sp = inv.stone_polynomials(pair)
        assert len(sp.coefficients) == 4  # k = 0..n-p-1

    def test_rejects_wrong_parity(self):
        pair = cached_spectrum(3, 1, "antisymmetric", 1).pairs[0]
        with pytest.raises(ValueError):
            inv.stone_polynomials(pair)


class TestMomentsAndBrackets:
    def test_moment_anchors(self, z1, z2):
        assert inv.moments(z1, 0)[0] == pytest.approx(4 / PI, rel=1e-13)
        a = inv.moments(z2, 1)
        assert a[0] == pytest.approx(2.0, rel=1e-13)
        # independent quadrature confirmation of the closed-form value 1/3 - 2/pi^2
        oracle = quad_integral(z2.z * ExpPoly.monomial(2)).real / 2.0
        assert a[1] == pytest.approx(1 / 3 - 2 / PI**2, rel=1e-12)
        assert a[1] == pytest.approx(oracle, rel=1e-10)

    def test_zero_function_moments(self):
        zero = eigenpair_from_function(ProblemSpec(2, 1, S), PI * PI, ExpPoly.zero(), 0)
        assert inv.moments(zero, 3) == [0.0, 0.0, 0.0, 0.0]

    def test_bracket_conventions(self):
        assert inv.bracket([1.0], [1.0], -1) == 0.0
        assert inv.bracket([4 / PI], [-PI * PI], 0) == pytest.approx(-4 * PI, rel=1e-14)
        assert inv.bracket([1.0, 0.0], [1.0, 0.0], 1) == 0.0
        with pytest.raises(IndexError):
            inv.bracket([1.0], [1.0], 1)

    def test_stone_moment_data_bundle(self, z2):
        data = inv.stone_moment_data(z2, moment_count=3)
        assert data.stone == pytest.approx(-PI * PI, rel=1e-12)
        assert data.lambda_sq == pytest.approx(PI * PI)
        assert data.eps == pytest.approx(1 / (PI * PI))
        assert len(data.moments) == 4


class TestStoneIdentity:
    def test_closed_form_anchor(self, z2):
        report = inv.check_stone_identity(z2)
        assert report.passed
        assert report.lhs == pytest.approx(2 * PI**4, rel=1e-12)
        assert report.rhs == pytest.approx(2 * PI**4, rel=1e-12)

    def test_not_applicable_for_n_equal_p(self, z1):
        assert inv.check_stone_identity(z1).verdict == "not-applicable"

    def test_strictly_positive_on_numeric_pair(self):
        report = inv.check_stone_identity(cached_eigenpair(3, 1, S, 0))
        assert report.passed and report.lhs > 0


class TestCrossIdentity:
    def test_closed_form_anchor(self, z1, z2):
        report = inv.check_cross_identity(z1, z2)
        assert report.passed
        assert report.lhs == pytest.approx(-4 * PI, rel=1e-12)
        assert report.rhs == pytest.approx(-4 * PI, rel=1e-12)

    def test_numeric_adjacent_orders(self):
        report = inv.check_cross_identity(cached_eigenpair(2, 1, S, 0), cached_eigenpair(3, 1, S, 0))
        assert report.passed and report.rel_residual < 1e-8

    def test_order_validation(self, z1, z2):
        with pytest.raises(ValueError):
            inv.check_cross_identity(z2, z1)


class TestBilinearFamily:
    def test_closed_form_anchor_both_routes(self, z1, z2):
        report = inv.check_bilinear_family(z1, z2, -1)
        assert report.passed
        assert report.lhs == pytest.approx(-4 * PI, rel=1e-12)
        assert report.details["bracket_lhs"] == pytest.approx(4 * PI, rel=1e-12)
        assert report.details["matched_variant"] == "plain"
        assert report.details["route_consistency"] < 1e-12

    def test_out_of_range_not_applicable(self, z1, z2):
        assert inv.check_bilinear_family(z1, z2, -3).verdict == "not-applicable"
        assert inv.check_bilinear_family(z1, z2, 5).verdict == "not-applicable"

    def test_numeric_family_all_admissible_shifts(self):
        zn = cached_eigenpair(3, 1, S, 0)
        zm = cached_eigenpair(5, 1, S, 1)
        q = (5 - 3) // 2
        for k in range(-1 - q, 3 - 1):
            report = inv.check_bilinear_family(zn, zm, k)
            assert report.passed, (k, report)
            assert report.details["route_consistency"] < 1e-9


class TestPositivityFamily:
    def test_closed_form_anchor(self, z2):
        report = inv.check_positivity_family(z2, 0)
        assert report.passed
        for route in ("norm_route", "h_route", "bracket_route"):
            assert report.details[route] == pytest.approx(2 * PI**4, rel=1e-12)

    def test_numeric_3_1_both_shifts(self):
        pair = cached_eigenpair(3, 1, S, 0)
        for k in (0, 1):
            report = inv.check_positivity_family(pair, k)
            assert report.passed
            assert report.rel_residual < 1e-8
            assert min(report.details["norm_route"], report.details["bracket_route"]) > 0

    def test_out_of_range(self, z2):
        assert inv.check_positivity_family(z2, 3).verdict == "not-applicable"


class TestCauchySchwarz:
    def test_equality_case_flagged_proportional(self):
        pair = cached_eigenpair(3, 1, S, 0)
        report = inv.check_cauchy_schwarz(pair, pair, l=0, k=0)
        assert report.passed
        assert report.details["proportional"]

    def test_strict_case(self):
        report = inv.check_cauchy_schwarz(
            cached_eigenpair(2, 1, S, 0), cached_eigenpair(3, 1, S, 0), l=0, k=0
        )
        assert report.passed
        assert not report.details["proportional"]
        assert report.lhs >= 0 and report.rhs >= 0

    def test_out_of_range_combinations(self):
        zn = cached_eigenpair(2, 1, S, 0)
        zm = cached_eigenpair(3, 1, S, 0)
        assert inv.check_cauchy_schwarz(zn, zm, l=5, k=0).verdict == "not-applicable"
        assert inv.check_cauchy_schwarz(zn, zm, l=0, k=7).verdict == "not-applicable"


class TestRootCompleteness:
    def test_closed_form(self, z2):
        report = inv.check_root_completeness(z2)
        assert report.passed
        assert report.details["weight_ratios"] == pytest.approx((1.0, 1.0))

    def test_2_2_all_four_roots_present(self):
        report = inv.check_root_completeness(cached_eigenpair(2, 2, S, 0))
        assert report.passed

    def test_synthetic_missing_root_fails(self):
        Lam = 31.285243858777125
        rho = Lam**0.25
        missing = eigenpair_from_function(ProblemSpec(2, 2, S), Lam, ExpPoly.cosine(rho), 0)
        assert not inv.check_root_completeness(missing).passed


class TestXiDerivatives:
    def test_expansion_coefficients(self):
        expansion = inv.square_variable_derivative(2)
        assert expansion.coefficients == (inv.Fraction(-1, 4), inv.Fraction(1, 4))

    def test_closed_form_2_1(self, z2):
        assert inv.check_xi_derivatives(z2).passed

    def test_numeric_3_2(self):
        report = inv.check_xi_derivatives(cached_eigenpair(3, 2, S, 0))
        assert report.passed
        assert "kernel_k1" in report.details and "kernel_k2" in report.details

    def test_full_grid_row(self):
        for (n, p) in [(4, 1), (5, 2), (6, 3)]:
            assert inv.check_xi_derivatives(cached_eigenpair(n, p, S, 0)).passed

    def test_non_eigenfunction_fails(self):
        # negative control: a clamped-looking but wrong function is caught
        fake = ExpPoly.cosine(PI) + ExpPoly.cosine(2 * PI)
        pair = eigenpair_from_function(ProblemSpec(3, 1, S), PI * PI, fake, 0)
        assert not inv.check_xi_derivatives(pair).passed


class TestGammaExpansion:
    def test_degree_zero(self, z2):
        assert inv.gamma_expansion(z2) == pytest.approx([1.0])

    def test_3_1_substitution(self):
        pair = cached_eigenpair(3, 1, S, 0)
        b, c = pair.poly_coeffs[0], pair.poly_coeffs[2]
        gamma = inv.gamma_expansion(pair)
        assert gamma[0] == pytest.approx(b + c, rel=1e-12)
        assert gamma[1] == pytest.approx(c, rel=1e-12)

    def test_requires_polynomial_part(self, z1):
        with pytest.raises(ValueError):
            inv.gamma_expansion(z1)


class TestSuiteRunner:
    def test_all_pass_on_sample_cells(self):
        for (n, p) in [(3, 1), (4, 2)]:
            reports = inv.run_identity_suite(n, p, count=2)
            failed = [r for r in reports if r.verdict == "fail"]
            assert not failed, failed
            ids = {r.identity_id for r in reports}
            assert {"stone-identity", "cross-order", "bilinear", "positivity",
                    "root-completeness", "xi-flatness"} <= ids

    def test_explicit_partner_order(self):
        reports = inv.run_identity_suite(3, 1, count=1, m=5)
        bilinear = [r for r in reports if r.identity_id == "bilinear" and r.applicable]
        assert bilinear and all(r.passed for r in bilinear)
        assert all(r.index[0] == 3 and r.index[1] == 5 for r in bilinear)
