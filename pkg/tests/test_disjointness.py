"""Gap tables, conditional-collision diagnostics, conjecture sweeps."""

import dataclasses
import math

import pytest

from rqlab.disjointness import (
    alpha_sequence,
    compare_spectra,
    evaluate_necessary_conditions,
    gf_coefficients,
    series_product,
    sweep_conjecture,
)
from rqlab.errors import ConfigError
from rqlab.invariants import bracket
from rqlab.solver import cached_eigenpair

from conftest import PI


class TestGeneratingFunctions:
    def test_bracket_equals_series_coefficient(self, rng):
        for _ in range(50):
            f = [float(v) for v in rng.uniform(-3, 3, size=6)]
            g = [float(v) for v in rng.uniform(-3, 3, size=6)]
            product = series_product(gf_coefficients(f), gf_coefficients(g), truncate=5)
            for k in range(6):
                assert product[k] == pytest.approx(bracket(f, g, k), rel=1e-12, abs=1e-12)

    def test_alpha_is_one_minus_eps_t_times_a(self, rng):
        a = [float(v) for v in rng.uniform(-3, 3, size=5)]
        eps = 0.37
        alpha = alpha_sequence(a, eps)
        lhs = series_product([1.0, -eps], gf_coefficients(a), truncate=4)
        assert lhs == pytest.approx(gf_coefficients(alpha), rel=1e-13)


class TestCompareSpectra:
    def test_closed_form_gap_table(self):
        table = compare_spectra(1, 2, 1, 3)
        ev_n = [((k + 0.5) * PI) ** 2 for k in range(3)]
        ev_m = [(k * PI) ** 2 for k in (1, 2, 3)]
        for i, li in enumerate(ev_n):
            for j, lj in enumerate(ev_m):
                expect = abs(li - lj) / max(li, lj)
                assert table.gaps[i][j] == pytest.approx(expect, rel=1e-10)
        mins = min(min(row) for row in table.gaps)
        assert table.min_gap == pytest.approx(mins)
        assert not table.candidates

    def test_2_3_gaps_bounded_away(self):
        table = compare_spectra(2, 3, 1, 2)
        assert table.min_gap > 0.3
        assert not table.candidates

    def test_guards(self):
        with pytest.raises(ConfigError):
            compare_spectra(2, 2, 1, 3)  # same order rejected
        with pytest.raises(ConfigError):
            compare_spectra(1, 2, 2, 3)  # n < p
        with pytest.raises(ConfigError):
            compare_spectra(1, 2, 1, 0)


class TestNecessaryConditions:
    def test_gap_precondition(self):
        zn = cached_eigenpair(3, 1, "symmetric", 0)
        zm = cached_eigenpair(4, 1, "symmetric", 0)
        with pytest.raises(ConfigError):
            evaluate_necessary_conditions(zn, zm, collision_tol=1e-4)

    def test_cloned_pair_rejected(self):
        # a forced zero order gap is refused outright, however close the values
        zn = cached_eigenpair(3, 1, "symmetric", 0)
        with pytest.raises(ConfigError):
            evaluate_necessary_conditions(zn, dataclasses.replace(zn), collision_tol=1.0)

    def test_adjacent_order_contradiction(self):
        zn = cached_eigenpair(3, 1, "symmetric", 0)
        zm = dataclasses.replace(
            cached_eigenpair(4, 1, "symmetric", 0), Lambda=zn.Lambda * (1 + 1e-8)
        )
        report = evaluate_necessary_conditions(zn, zm, collision_tol=1e-6)
        assert report.verdict == "violated"
        head = [r for r in report.pair_equalities if r.identity_id == "collision-head-vanishing"]
        assert head[0].verdict == "fail" and abs(head[0].lhs) > 0.1

    def test_order_gap_two_contradiction(self):
        zn = cached_eigenpair(3, 1, "symmetric", 0)
        zm = dataclasses.replace(
            cached_eigenpair(5, 1, "symmetric", 0), Lambda=zn.Lambda * (1 + 1e-8)
        )
        report = evaluate_necessary_conditions(zn, zm, collision_tol=1e-6)
        assert report.verdict == "violated"

    def test_manufactured_diagnostic_run_is_finite(self):
        zn = cached_eigenpair(3, 1, "symmetric", 0)
        zm = dataclasses.replace(
            cached_eigenpair(6, 1, "symmetric", 0), Lambda=zn.Lambda * (1 + 1e-6)
        )
        report = evaluate_necessary_conditions(zn, zm, collision_tol=1e-5)
        assert report.all_reports
        for r in report.all_reports:
            assert math.isfinite(r.lhs) and math.isfinite(r.rhs)
        assert report.data_consistency[0] < 1e-12  # genuine side
        assert report.data_consistency[1] > 1e-3  # manufactured side, recorded

    def test_translation_identity_is_internal(self):
        zn = cached_eigenpair(3, 1, "symmetric", 0)
        zm = dataclasses.replace(
            cached_eigenpair(4, 1, "symmetric", 0), Lambda=zn.Lambda * (1 + 1e-8)
        )
        report = evaluate_necessary_conditions(zn, zm, collision_tol=1e-6)
        trans = [
            r for r in report.pair_equalities if r.identity_id == "collision-head-translation"
        ]
        assert trans[0].verdict == "pass"

    def test_midpoint_and_endpoint_epsilons(self):
        zn = cached_eigenpair(3, 1, "symmetric", 0)
        zm = dataclasses.replace(
            cached_eigenpair(4, 1, "symmetric", 0), Lambda=zn.Lambda * (1 + 1e-8)
        )
        report = evaluate_necessary_conditions(zn, zm, collision_tol=1e-6)
        assert report.eps_mid == pytest.approx(report.Lambda_mid ** (-1.0), rel=1e-12)
        assert len(report.eps_endpoints) == 2


class TestSweep:
    def test_p1_grid_is_candidate_free(self):
        summary = sweep_conjecture(1, 4, 5)
        assert summary.candidate_free
        assert not summary.partial
        assert summary.global_min_gap > 1e-3
        assert len(summary.pairs) == 6  # (n, m) pairs with 1 <= n < m <= 4

    def test_p2_grid_is_candidate_free(self):
        summary = sweep_conjecture(2, 4, 4)
        assert summary.candidate_free
        assert summary.global_min_gap > 1e-3

    def test_deterministic(self):
        a = sweep_conjecture(1, 3, 3)
        b = sweep_conjecture(1, 3, 3)
        assert a == b

    def test_jobs_parameter_gives_same_answer(self):
        a = sweep_conjecture(2, 4, 3)
        b = sweep_conjecture(2, 4, 3, jobs=4)
        assert a == b

    def test_degenerate_grid_guard(self):
        with pytest.raises(ConfigError):
            sweep_conjecture(2, 2, 3)  # no n < m pair above p
        with pytest.raises(ConfigError):
            sweep_conjecture(1, 1, 3)
