import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from owpnlab.bounds import (
    lower_coherent_combining,
    lower_partially_coherent,
    upper_outer,
)
from owpnlab.gdof import (
    GdofFamily,
    NEAR_AWGN_GAP_NATS,
    NEAR_ONC_GAP_NATS,
    Regime,
    channel_at_power,
    classify_regime,
    empirical_prelog,
    gdof_exact_if_known,
    gdof_inner_cc,
    gdof_inner_combined,
    gdof_inner_pc,
    gdof_outer,
    regime_gap_nats,
)
from owpnlab.model import ChannelParams, GdofPoint

ALL_FAMILIES = (gdof_outer, gdof_inner_pc, gdof_inner_cc, gdof_inner_combined)


class TestOuter:
    @pytest.mark.parametrize(
        "alpha,beta,expected",
        [
            (0.5, 0.0, 0.75),
            (2.0, -1.0, 1.0),
            (0.3, 0.5, 0.5),
            (0.0, -3.0, 1.0),
            (1.7, 0.4, 0.65),  # (1 - beta)/4 branch above alpha = 1
        ],
    )
    def test_values(self, alpha, beta, expected):
        value = gdof_outer(GdofPoint(alpha, beta))
        assert value.total == expected
        assert value.amplitude == 0.5
        assert value.total == value.amplitude + value.phase


class TestInnerPc:
    @pytest.mark.parametrize(
        "alpha,beta,expected",
        [
            (0.25, 0.0, 0.625),
            (1.5, -3.0, 0.25),
            (1.5, 7.0, 0.25),
            (3.0, 0.0, 0.0),
            (0.4, 1.0, 0.5),
            (0.4, -0.5, 0.8),  # beta <= 2 alpha - 1 branch
        ],
    )
    def test_values(self, alpha, beta, expected):
        value = gdof_inner_pc(GdofPoint(alpha, beta))
        assert value.total == pytest.approx(expected, abs=1e-15)
        assert value.total == pytest.approx(value.amplitude + value.phase, abs=1e-15)


class TestInnerCc:
    @pytest.mark.parametrize(
        "alpha,beta,expected",
        [(0.3, -2.0, 1.0), (5.0, -2.0, 1.0), (1.0, -0.5, 0.5), (2.0, 0.5, 0.0)],
    )
    def test_values(self, alpha, beta, expected):
        value = gdof_inner_cc(GdofPoint(alpha, beta))
        assert value.total == expected
        assert value.amplitude == value.phase == expected / 2.0


class TestInnerCombined:
    @pytest.mark.parametrize(
        "alpha,beta,expected",
        [
            (1.5, 0.0, 0.25),
            (3.0, -0.8, 0.8),
            # at (0.5, -0.2) the (alpha-beta)/2 branch does not apply
            # (beta < 2 alpha - 1); both lemma functions give 1 - alpha/2
            (0.5, -0.2, 0.75),
            (2.5, 0.3, 0.0),
            (0.1, -5.0, 1.0),
        ],
    )
    def test_values(self, alpha, beta, expected):
        value = gdof_inner_combined(GdofPoint(alpha, beta))
        assert value.total == pytest.approx(expected, abs=1e-15)

    def test_equals_max_of_inner_families(self):
        # the explicit piecewise form must realize max(pc, cc) everywhere
        for alpha in np.arange(0.0, 3.001, 0.05):
            for beta in np.arange(-2.0, 2.001, 0.05):
                point = GdofPoint(round(float(alpha), 4), round(float(beta), 4))
                combined = gdof_inner_combined(point).total
                best = max(gdof_inner_pc(point).total, gdof_inner_cc(point).total)
                assert combined == pytest.approx(best, abs=1e-12), point


class TestExact:
    @pytest.mark.parametrize(
        "alpha,beta,expected,regime",
        [
            (0.4, 0.2, 0.6, "pc"),
            (5.0, 2.0, 0.0, "onc"),
            (1.5, 1.2, 0.25, "onc"),
            (0.3, 0.9, 0.5, "nc"),
            (0.7, -1.5, 1.0, "awgn"),
            (0.5, 0.0, 0.75, "pc"),
            (0.25, 0.0, 0.625, "pc"),
        ],
    )
    def test_known_points(self, alpha, beta, expected, regime):
        value = gdof_exact_if_known(GdofPoint(alpha, beta))
        assert value is not None
        assert value.total == pytest.approx(expected, abs=1e-15)
        assert value.regime == regime
        assert value.family is GdofFamily.EXACT_WHERE_KNOWN

    @pytest.mark.parametrize("alpha,beta", [(0.8, 0.1), (1.5, 0.0), (2.5, -0.5), (0.6, 0.3)])
    def test_open_region(self, alpha, beta):
        assert gdof_exact_if_known(GdofPoint(alpha, beta)) is None

    def test_exact_matches_inner_combined_everywhere(self):
        for alpha in np.arange(0.0, 3.001, 0.03):
            for beta in np.arange(-2.0, 2.001, 0.03):
                point = GdofPoint(round(float(alpha), 4), round(float(beta), 4))
                exact = gdof_exact_if_known(point)
                if exact is None:
                    continue
                assert exact.total == pytest.approx(
                    gdof_inner_combined(point).total, abs=1e-12
                ), point

    def test_exact_matches_outer_where_bounds_pinch(self):
        # "onc" exactness comes from an external converse; the outer bound
        # here is strictly looser there, so equality holds on nc/pc/awgn only
        for alpha in np.arange(0.0, 3.001, 0.03):
            for beta in np.arange(-2.0, 2.001, 0.03):
                point = GdofPoint(round(float(alpha), 4), round(float(beta), 4))
                exact = gdof_exact_if_known(point)
                if exact is None or exact.regime == "onc":
                    continue
                assert exact.total == pytest.approx(gdof_outer(point).total, abs=1e-12), point


class TestRegionProperties:
    def test_sandwich_dense_grid(self):
        for alpha in np.arange(0.0, 3.001, 0.02):
            for beta in np.arange(-2.0, 2.001, 0.02):
                point = GdofPoint(round(float(alpha), 4), round(float(beta), 4))
                assert (
                    gdof_inner_combined(point).total
                    <= gdof_outer(point).total + 1e-12
                ), point

    @pytest.mark.parametrize(
        "boundary",
        [
            lambda a: (a, a),            # beta = alpha
            lambda a: (a, 2.0 * a - 1.0),  # beta = 2 alpha - 1
            lambda a: (a, a / 2.0 - 1.0),  # beta = alpha/2 - 1
            lambda a: (a, -1.0),
            lambda a: (a, 0.0),
            lambda a: (a, 1.0),
        ],
    )
    def test_continuity_across_boundaries(self, boundary):
        eps = 1e-9
        for a in np.linspace(0.0, 3.0, 61):
            alpha, beta = boundary(float(a))
            if beta != max(beta, -10.0):
                continue
            at = GdofPoint(alpha, beta)
            for fn in ALL_FAMILIES:
                here = fn(at).total
                above = fn(GdofPoint(alpha, beta + eps)).total
                below = fn(GdofPoint(alpha, beta - eps)).total
                assert abs(above - here) <= 1e-8
                assert abs(below - here) <= 1e-8

    @given(
        alpha=st.floats(min_value=0.0, max_value=10.0),
        beta=st.floats(min_value=-10.0, max_value=10.0),
    )
    @settings(max_examples=300, deadline=None)
    def test_range_and_split(self, alpha, beta):
        point = GdofPoint(alpha, beta)
        for fn in ALL_FAMILIES:
            value = fn(point)
            assert 0.0 <= value.total <= 1.0
            assert value.total == pytest.approx(value.amplitude + value.phase, abs=1e-12)


class TestRegimeClassifier:
    def test_examples(self):
        assert classify_regime(ChannelParams(2.0, 1, 0.2)) is Regime.NEAR_AWGN
        assert classify_regime(ChannelParams(2.0, 1, 2.0)) is Regime.NEAR_ONC
        assert classify_regime(ChannelParams(2.0, 1, 1.0)) is Regime.GENERAL

    def test_onc_threshold_arithmetic(self):
        # threshold at L=1 is (2 pi / e) ln 2 = 1.602178...
        threshold = (2.0 * math.pi / math.e) * math.log(2.0)
        assert classify_regime(ChannelParams(2.0, 1, threshold)) is Regime.NEAR_ONC
        assert classify_regime(ChannelParams(2.0, 1, threshold * 0.999)) is Regime.GENERAL

    def test_gap_constants(self):
        assert NEAR_AWGN_GAP_NATS == pytest.approx(1.4189385332046727, abs=1e-12)
        assert NEAR_ONC_GAP_NATS == 0.2
        assert regime_gap_nats(Regime.NEAR_AWGN) == NEAR_AWGN_GAP_NATS
        assert regime_gap_nats(Regime.NEAR_ONC) == NEAR_ONC_GAP_NATS
        assert math.isnan(regime_gap_nats(Regime.GENERAL))

    def test_mutual_exclusivity_grid(self):
        # never raises: the two conditions cannot hold together
        for p in (1.01, 1.5, 1.6, 2.0, 10.0, 1e4):
            for big_l in (1, 2, 16, 256):
                for s2 in np.logspace(-8, 4, 25):
                    classify_regime(ChannelParams(p, big_l, float(s2)))


class TestEmpiricalPrelog:
    def test_outer_slope(self):
        slope = empirical_prelog(upper_outer, GdofPoint(0.0, 0.0), 1e8, 1e12)
        assert slope == pytest.approx(0.5, abs=0.05)

    def test_pc_slope(self):
        slope = empirical_prelog(lower_partially_coherent, GdofPoint(0.5, 0.0), 1e8, 1e12)
        assert slope == pytest.approx(0.75, abs=0.05)

    def test_cc_slope(self):
        slope = empirical_prelog(lower_coherent_combining, GdofPoint(0.0, -1.5), 1e8, 1e12)
        assert slope == pytest.approx(1.0, abs=0.05)

    def test_channel_at_power(self):
        params = channel_at_power(GdofPoint(0.5, 0.0), 1e8)
        assert params.oversampling == 10_000
        assert params.freq_noise_var == 1.0

    def test_overflow_guard(self):
        with pytest.raises(ValueError):
            channel_at_power(GdofPoint(3.0, 0.0), 1e12)
        with pytest.raises(ValueError):
            empirical_prelog(upper_outer, GdofPoint(3.0, 0.0), 1e8, 1e12)

    def test_rejects_small_power(self):
        with pytest.raises(ValueError):
            empirical_prelog(upper_outer, GdofPoint(0.0, 0.0), 10.0, 1e6)

    def test_rejects_nonfinite_bound(self):
        with pytest.raises(ValueError):
            empirical_prelog(lambda p: math.inf, GdofPoint(0.0, 0.0), 1e8, 1e12)
