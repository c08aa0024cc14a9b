"""Tests for the perceptual privacy criterion."""

import math

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from likenessrisk.nnstats import approximation_ratio, nn_mean_exact
from likenessrisk.perception import (
    DEFAULT_DIMENSION,
    DIMENSION_RANGE,
    PerceptualParams,
    confusion_probability,
    critical_population,
    risk_verdict,
)

from oracles import mp_confusion_probability, mp_nn_mean_exact


class TestPerceptualParams:
    def test_defaults(self):
        p = PerceptualParams()
        assert p.d_bar_prime == 1.0 and p.c == 1.0

    @pytest.mark.parametrize(
        "kw",
        [dict(d_bar_prime=-0.1), dict(c=0.0), dict(c=-1.0), dict(d_bar_prime=math.nan), dict(c=math.inf)],
    )
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            PerceptualParams(**kw)


class TestRiskVerdict:
    def test_full_population_ten_dimensions(self):
        out = risk_verdict(PerceptualParams(1.0, 1.0), 2e11, 10)
        assert out.at_risk
        assert math.isclose(out.mean_nn_jnd, mp_nn_mean_exact(10, 1, 2e11), rel_tol=1e-10)
        assert abs(out.mean_nn_jnd - 0.06416) <= 1e-4

    def test_undiscriminating_observer_always_confused(self):
        out = risk_verdict(PerceptualParams(0.0, 1.0), 1e6, 10)
        assert out.mean_nn_jnd == 0.0
        assert out.at_risk
        assert out.confusion_probability == 1.0
        assert out.critical_population is None

    def test_sharp_observer_small_population(self):
        out = risk_verdict(PerceptualParams(100.0, 1.0), 100, 10)
        # 100 * C(10,1) * 100^(-1/10) ~ 54.7 JND, far above a 1 JND threshold
        assert math.isclose(out.mean_nn_jnd, 100.0 * nn_mean_exact(10, 1, 100), rel_tol=0.0)
        assert math.isclose(out.mean_nn_jnd, 54.7, rel_tol=1e-3)
        assert not out.at_risk

    def test_headline_claim_across_dimension_range(self):
        lo, hi = DIMENSION_RANGE
        for D in range(lo, hi + 1):
            assert risk_verdict(PerceptualParams(1.0, 1.0), 2e11, D).at_risk

    def test_boundary_equality_is_not_at_risk(self):
        params = PerceptualParams(1.0, nn_mean_exact(DEFAULT_DIMENSION, 1, 1000.0))
        out = risk_verdict(params, 1000.0, DEFAULT_DIMENSION)
        assert out.mean_nn_jnd == out.threshold_jnd
        assert not out.at_risk

    def test_to_dict_round_trip(self):
        out = risk_verdict(PerceptualParams(), 1e9, 10)
        doc = out.to_dict()
        assert doc["at_risk"] is True
        assert set(doc) == {
            "mean_nn_distance",
            "mean_nn_jnd",
            "threshold_jnd",
            "at_risk",
            "confusion_probability",
            "critical_population",
        }

    def test_domain(self):
        with pytest.raises(ValueError):
            risk_verdict(PerceptualParams(), 1.0, 10)
        with pytest.raises(ValueError):
            risk_verdict(PerceptualParams(), -5.0, 10)


class TestConfusionProbability:
    def test_no_entities(self):
        assert confusion_probability(PerceptualParams(), 0.0, 10) == 0.0

    def test_ball_covering_space_clamps_to_one(self):
        # radius c/d' >= sqrt(D) covers the diameter of the unit cube
        params = PerceptualParams(d_bar_prime=1.0, c=4.0)
        assert confusion_probability(params, 5.0, 10) == 1.0

    def test_reference_value(self):
        # V_10(0.0741) = 2.5502 * 0.0741^10 = 1.2728e-11; N V ~ 2.55
        params = PerceptualParams(d_bar_prime=1.0, c=0.0741)
        got = confusion_probability(params, 2e11, 10)
        assert abs(got - 0.922) <= 0.005
        assert math.isclose(got, mp_confusion_probability(10, 0.0741, 2e11), rel_tol=1e-9)

    def test_undiscriminating_observer(self):
        assert confusion_probability(PerceptualParams(0.0, 1.0), 3.0, 4) == 1.0

    @given(
        n1=st.floats(min_value=1.0, max_value=1e14),
        growth=st.floats(min_value=1.0, max_value=100.0),
        c=st.floats(min_value=1e-3, max_value=10.0),
        dprime=st.floats(min_value=1e-3, max_value=100.0),
        D=st.integers(min_value=1, max_value=32),
    )
    @settings(max_examples=150)
    def test_monotone_in_population(self, n1, growth, c, dprime, D):
        params = PerceptualParams(dprime, c)
        assert confusion_probability(params, n1 * growth, D) >= confusion_probability(params, n1, D)

    @given(
        c=st.floats(min_value=1e-3, max_value=1.0),
        bump=st.floats(min_value=1.0, max_value=10.0),
        dprime=st.floats(min_value=0.1, max_value=100.0),
        D=st.integers(min_value=1, max_value=32),
    )
    @settings(max_examples=150)
    def test_monotone_in_threshold_and_sensitivity(self, c, bump, dprime, D):
        N = 1e9
        base = confusion_probability(PerceptualParams(dprime, c), N, D)
        assert confusion_probability(PerceptualParams(dprime, c * bump), N, D) >= base
        assert confusion_probability(PerceptualParams(dprime * bump, c), N, D) <= base


class TestCriticalPopulation:
    def test_threshold_at_prefactor_gives_one(self):
        for D in (1, 2, 7, 10, 12):
            params = PerceptualParams(d_bar_prime=1.0, c=approximation_ratio(D, 1))
            assert math.isclose(critical_population(params, D, 1), 1.0, rel_tol=1e-12)

    def test_ten_dimensional_reference_value(self):
        # (C(10,1)/0.5)^10 from the 50-digit reference
        got = critical_population(PerceptualParams(1.0, 0.5), 10, 1)
        assert math.isclose(got, 243.85888224683679, rel_tol=1e-10)

    def test_one_dimensional_closed_form(self):
        assert math.isclose(critical_population(PerceptualParams(1.0, 0.5), 1, 1), 1.0, rel_tol=1e-12)

    def test_undefined_for_blind_observer(self):
        with pytest.raises(ValueError):
            critical_population(PerceptualParams(0.0, 1.0), 10, 1)

    @given(
        dprime=st.floats(min_value=0.01, max_value=100.0),
        c=st.floats(min_value=0.01, max_value=100.0),
        D=st.integers(min_value=2, max_value=16),
    )
    @settings(max_examples=150)
    def test_verdict_consistent_with_critical_population(self, dprime, c, D):
        # Large-N regime: the power-law inversion is only exact as N grows,
        # so probe at N* >= 1e6 where a 1e-6 multiplicative buffer dominates
        # the finite-N correction of the exact mean.
        params = PerceptualParams(dprime, c)
        nstar = critical_population(params, D, 1)
        assume(1e6 <= nstar <= 1e14)
        assert not risk_verdict(params, nstar * (1.0 - 1e-6), D).at_risk
        assert risk_verdict(params, nstar * (1.0 + 1e-6), D).at_risk


class TestScaleInvariance:
    @given(
        dprime=st.floats(min_value=0.01, max_value=100.0),
        c=st.floats(min_value=0.01, max_value=100.0),
        k=st.floats(min_value=0.01, max_value=100.0),
        N=st.floats(min_value=100.0, max_value=1e12),
        D=st.integers(min_value=1, max_value=16),
    )
    @settings(max_examples=150)
    def test_jnd_unit_rescaling_changes_nothing(self, dprime, c, k, N, D):
        base = risk_verdict(PerceptualParams(dprime, c), N, D)
        # stay away from the verdict boundary, where one ulp could flip it
        assume(abs(base.mean_nn_jnd - base.threshold_jnd) > 1e-9 * base.threshold_jnd)
        scaled = risk_verdict(PerceptualParams(dprime * k, c * k), N, D)
        assert scaled.at_risk == base.at_risk
        assert math.isclose(
            scaled.confusion_probability, base.confusion_probability, rel_tol=1e-9, abs_tol=1e-12
        )
        assert math.isclose(
            scaled.critical_population, base.critical_population, rel_tol=1e-9
        )
