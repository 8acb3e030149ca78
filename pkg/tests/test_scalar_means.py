import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from meanlab import scalar_means as sm
from meanlab.scalar_means import A, G, H, L, Family, MeanDomainError, MeanKind, ScalarPair, parse_mean

# 40-digit mpmath values at (a, b) = (2, 8)
ORACLE_2_8 = {
    "A": 5.0,
    "G": 4.0,
    "H": 3.2,
    "L": 4.32808512266689022207977404300567641228,
    "binomial:p=1/3": 4.330432363818459353214595140371573721149,
    "binomial:p=2": 5.830951894845300470874152877545583076521,
    "heron:s=1/3": 4.666666666666666666666666666666666666667,
    "heronhat:s=1/3": 4.333333333333333333333333333333333333333,
    "heinz:v=1/4": 4.242640687119285146405066172629094235709,
    "bridge:r=2/3": 4.308869380063767443518587133038700990519,
    "lehmer:alpha=1/2": 4.0,
    "powerdiff:u=3": 5.6,
    "powerdiff:u=-1": 3.2,
}

positive = st.floats(min_value=1e-6, max_value=1e6, allow_nan=False, allow_infinity=False)


class TestOracleValues:
    @pytest.mark.parametrize("spec,expected", sorted(ORACLE_2_8.items()))
    def test_against_high_precision(self, spec, expected):
        assert parse_mean(spec)(2.0, 8.0) == pytest.approx(expected, rel=1e-14)

    def test_bridge_at_rounded_two_thirds(self):
        assert sm.bridge(0.6667, 4.0, 1.0) == pytest.approx(2.15441866515122100054, rel=1e-14)

    def test_heron_half(self):
        assert sm.heron(0.5, 2.0, 8.0) == 4.5


class TestLimits:
    def test_log_mean_equal_arguments(self):
        assert sm.logarithmic(3.0, 3.0) == 3.0

    @pytest.mark.parametrize("eps", [1e-3, 1e-7, 1e-10, 1e-14])
    def test_log_mean_near_diagonal(self, eps):
        a, b = 1.0 + eps, 1.0
        exact = eps / math.log1p(eps)
        assert sm.logarithmic(a, b) == pytest.approx(exact, rel=1e-14)

    def test_log_mean_tiny_offset(self):
        assert sm.logarithmic(1 + 1e-13, 1.0) == pytest.approx(1 + 5e-14, rel=1e-15)

    @pytest.mark.parametrize("h", np.linspace(-1e-8, 1e-8, 9))
    def test_log_mean_matches_taylor(self, h):
        assert abs(sm.logarithmic(1 + h, 1.0) - (1 + h / 2 - h * h / 12)) <= 1e-15

    @pytest.mark.parametrize("p", [0.0, 1e-10, -1e-10])
    def test_binomial_at_zero_is_geometric(self, p):
        assert sm.binomial(p, 2.0, 8.0) == pytest.approx(4.0, rel=1e-9)

    def test_binomial_large_arguments_do_not_overflow(self):
        assert sm.binomial(3.0, 1e300, 1e300) == pytest.approx(1e300, rel=1e-12)

    @pytest.mark.parametrize("u,expected", [(0.0, 16 / 4.32808512266689022), (1.0, 4.32808512266689022)])
    def test_power_diff_limits(self, u, expected):
        assert sm.power_diff(u, 2.0, 8.0) == pytest.approx(expected, rel=1e-8)

    def test_power_diff_interpolates_classical(self):
        assert sm.power_diff(-1, 2.0, 8.0) == pytest.approx(3.2)
        assert sm.power_diff(0.5, 2.0, 8.0) == pytest.approx(4.0)
        assert sm.power_diff(2, 2.0, 8.0) == pytest.approx(5.0)

    @pytest.mark.parametrize("r,expected", [(0, 5.0), (1, 4.0), (2, 3.2)])
    def test_bridge_endpoints(self, r, expected):
        assert sm.bridge(r, 2.0, 8.0) == pytest.approx(expected, rel=1e-14)


class TestDomain:
    @pytest.mark.parametrize("a,b", [(0.0, 1.0), (-1.0, 2.0), (1.0, math.inf), (math.nan, 1.0)])
    def test_rejects_bad_arguments(self, a, b):
        with pytest.raises(MeanDomainError):
            sm.arithmetic(a, b)
        with pytest.raises(MeanDomainError):
            ScalarPair(a, b)

    @pytest.mark.parametrize("spec", ["heron:s=1.5", "heinz:v=-0.1", "bridge:r=2.5", "lehmer:alpha=2", "nosuch"])
    def test_rejects_bad_parameters(self, spec):
        with pytest.raises(MeanDomainError):
            parse_mean(spec)

    def test_parameter_required(self):
        with pytest.raises(MeanDomainError):
            MeanKind(Family.HERON)
        with pytest.raises(MeanDomainError):
            MeanKind(Family.ARITHMETIC, 0.5)


class TestParsing:
    @pytest.mark.parametrize("text,family,param", [
        ("L", Family.LOGARITHMIC, None),
        ("binomial:p=1/3", Family.BINOMIAL, 1 / 3),
        ("heron:0.5", Family.HERON, 0.5),
        ("Hz:v=0.25", Family.HEINZ, 0.25),
    ])
    def test_parse(self, text, family, param):
        kind = parse_mean(text)
        assert kind.family is family
        assert kind.param == param

    def test_str_round_trip(self):
        for kind in [A, L, MeanKind(Family.BRIDGE, 2 / 3), MeanKind(Family.LEHMER, 0.25)]:
            assert parse_mean(str(kind)) == kind


class TestVectorised:
    def test_arrays_match_scalars(self):
        a = np.array([0.5, 2.0, 7.0])
        b = np.array([3.0, 2.0, 0.1])
        for kind in [A, G, H, L, MeanKind(Family.BINOMIAL, 1 / 3), MeanKind(Family.POWER_DIFF, 3)]:
            out = kind(a, b)
            assert out.shape == (3,)
            for i in range(3):
                assert out[i] == pytest.approx(kind(float(a[i]), float(b[i])), rel=1e-14)


KINDS = [A, G, H, L, MeanKind(Family.BINOMIAL, 1 / 3), MeanKind(Family.HERON, 0.3),
         MeanKind(Family.HEINZ, 0.2), MeanKind(Family.BRIDGE, 0.6), MeanKind(Family.LEHMER, 0.3),
         MeanKind(Family.POWER_DIFF, 2.5)]


class TestMeanProperties:
    @pytest.mark.parametrize("kind", KINDS, ids=str)
    @settings(max_examples=200, deadline=None)
    @given(a=positive, b=positive)
    def test_between_min_and_max(self, kind, a, b):
        m = kind(a, b)
        assert min(a, b) * (1 - 1e-12) <= m <= max(a, b) * (1 + 1e-12)

    @pytest.mark.parametrize("kind", KINDS, ids=str)
    @settings(max_examples=100, deadline=None)
    @given(a=positive, b=positive, lam=st.floats(min_value=1e-3, max_value=1e3))
    def test_symmetric_and_homogeneous(self, kind, a, b, lam):
        assert kind(a, b) == pytest.approx(kind(b, a), rel=1e-12)
        assert kind(lam * a, lam * b) == pytest.approx(lam * kind(a, b), rel=1e-10)

    @settings(max_examples=300, deadline=None)
    @given(a=positive, b=positive)
    def test_classical_order(self, a, b):
        tol = 1e-12 * max(a, b)
        assert H(a, b) <= G(a, b) + tol
        assert G(a, b) <= L(a, b) + tol
        assert L(a, b) <= A(a, b) + tol


class TestZeroExtension:
    @pytest.mark.parametrize("kind", KINDS[:-1], ids=str)
    def test_matches_small_second_argument(self, kind):
        # L tends to zero only like 1/log, hence the loose tolerance
        a = np.array([0.5, 3.0])
        limit = sm.mean_limit_at_zero(kind, a)
        near = kind(a, np.full(2, 1e-300))
        np.testing.assert_allclose(near, limit, atol=5e-3)

    def test_unsupported_family_raises(self):
        with pytest.raises(MeanDomainError):
            sm.mean_limit_at_zero(MeanKind(Family.POWER_DIFF, 2.5), np.ones(2))
