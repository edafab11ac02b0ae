import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from amalgam_lab.errors import InvalidWeightError, OutOfDomainError, SpecError
from amalgam_lab.weights import (
    Exponential,
    Polynomial,
    Product,
    Tabulated,
    bd_condition,
    check_submultiplicative,
    dominance_constant,
    dominates,
    equivalent,
    parse_weight,
    poly,
    ratio_vanishes,
    weight_from_json,
)

orders = st.floats(0.0, 5.0, allow_nan=False)
rates = st.floats(0.0, 2.0, allow_nan=False)
points = st.floats(-200.0, 200.0, allow_nan=False)


def brute_sup(w1, w2, hi=1e4, n=400_001):
    """Dense-grid sup of w1/w2 on [0, hi]; both families are even."""
    x = np.concatenate([np.linspace(0, 50, n), np.geomspace(50, hi, n)])
    return float(np.exp(np.max(w1.log(x) - w2.log(x))))


class TestFamilies:
    def test_polynomial_values(self):
        w = poly(2)
        assert w(0.0) == 1.0
        assert w(3.0) == 16.0
        assert w(-3.0) == 16.0

    def test_exponential_values(self):
        w = Exponential(0.5)
        assert w(0.0) == 1.0
        assert w(2.0) == pytest.approx(math.e)

    def test_product_is_pointwise(self):
        w = parse_weight("poly:1*exp:0.5")
        assert isinstance(w, Product)
        x = np.linspace(-5, 5, 11)
        np.testing.assert_allclose(w(x), (1 + abs(x)) * np.exp(0.5 * abs(x)))
        assert w.growth() == (0.5, 1.0)

    @pytest.mark.parametrize("bad", ["poly:-1", "exp:-0.1", "poly:nan", "cosh:1", "poly:x"])
    def test_invalid_short_forms(self, bad):
        with pytest.raises(SpecError):
            parse_weight(bad)

    def test_negative_order_is_invalid_weight(self):
        with pytest.raises(InvalidWeightError):
            Polynomial(-1)

    def test_tabulated_below_one_rejected(self):
        with pytest.raises(InvalidWeightError):
            Tabulated((-1, 0, 1), (1.0, 0.5, 1.0))

    def test_tabulated_not_submultiplicative_rejected(self):
        with pytest.raises(InvalidWeightError):
            Tabulated((-2, -1, 0, 1, 2), (1.0, 1.0, 1.0, 1.0, 10.0))

    def test_tabulated_out_of_domain(self):
        w = Tabulated((-10, 0, 10), (11.0, 1.0, 11.0))
        assert w(5.0) == pytest.approx(6.0)
        with pytest.raises(OutOfDomainError):
            w(11.0)

    @pytest.mark.parametrize(
        "w",
        [poly(0), poly(1.5), Exponential(0.25), Product((poly(2), Exponential(1.0)))],
        ids=lambda w: w.label(),
    )
    def test_json_round_trip(self, w):
        assert weight_from_json(json.loads(json.dumps(w.to_json()))) == w
        assert parse_weight(json.dumps(w.to_json())) == w

    def test_malformed_json(self):
        with pytest.raises(SpecError):
            weight_from_json({"family": "polynomial"})
        with pytest.raises(SpecError):
            weight_from_json({"family": "spline", "s": 1})


class TestBeurlingProperties:
    @given(orders, points, points)
    def test_polynomial_submultiplicative(self, s, x, y):
        w = poly(s)
        assert w(x + y) <= w(x) * w(y) * (1 + 1e-12)

    @given(rates, orders, points, points)
    def test_product_submultiplicative(self, a, s, x, y):
        w = Product((poly(s), Exponential(a)))
        assert w.log(x + y) <= w.log(x) + w.log(y) + 1e-12

    @given(orders, points)
    def test_at_least_one(self, s, x):
        assert poly(s)(x) >= 1.0

    def test_check_submultiplicative_report(self):
        rep = check_submultiplicative(poly(3), [(1.0, 2.0), (-4.0, 4.0)])
        assert rep["pass"]
        assert rep["max_ratio"] <= 1.0


class TestDominance:
    @pytest.mark.parametrize(
        "w1, w2, holds",
        [
            (poly(1), poly(2), True),
            (poly(2), poly(1), False),
            (poly(5), Exponential(0.1), True),
            (Exponential(0.1), poly(5), False),
            (Exponential(0.5), Exponential(1.0), True),
            (Exponential(1.0), Exponential(0.5), False),
            (poly(1), poly(1), True),
        ],
    )
    def test_analytic_relation(self, w1, w2, holds):
        v = dominates(w1, w2)
        assert v.exact
        assert v.holds is holds
        assert math.isfinite(v.constant) is holds

    @given(orders, orders)
    def test_nested_polynomials_have_unit_constant(self, s1, s2):
        lo, hi = sorted((s1, s2))
        assert dominance_constant(poly(lo), poly(hi)) == 1.0

    @given(st.floats(0.5, 6.0), st.floats(0.05, 2.0))
    def test_constant_matches_brute_force(self, s, a):
        w1, w2 = poly(s), Exponential(a)
        c = dominance_constant(w1, w2)
        sup = brute_sup(w1, w2)
        assert sup <= c * (1 + 1e-9)
        assert sup == pytest.approx(c, rel=1e-6)

    def test_constant_at_interior_peak(self):
        # (1+x)^4 e^{-x}: peak at 1+x = 4, value 4^4 e^{-3}
        assert dominance_constant(poly(4), Exponential(1.0)) == pytest.approx(256 * math.exp(-3))

    @pytest.mark.parametrize("s1", [0.0, 3.0, 6.0])
    @pytest.mark.parametrize("s2", [0.0, 3.0, 6.0])
    @pytest.mark.parametrize("a", [0.0, 0.5, 1.0])
    def test_probe_path_agrees_on_separated_parameters(self, s1, s2, a):
        pairs = [(poly(s1), poly(s2)), (poly(s1), Product((poly(s2), Exponential(a))))]
        if a > 0:
            pairs.append((Exponential(a), poly(s2)))
        for w1, w2 in pairs:
            assert dominates(w1, w2, exact=False).holds == dominates(w1, w2).holds

    def test_probe_path_on_tabulated(self):
        t = Tabulated((-100, 0, 100), (101.0, 1.0, 101.0))
        v = dominates(t, poly(1))
        assert not v.exact
        assert v.holds
        assert v.constant == pytest.approx(1.0)

    def test_scalar_multiple_constants(self):
        x = np.arange(-200, 201.0)
        double = Tabulated(tuple(x), tuple(2 * (1 + np.abs(x))))
        assert dominates(double, poly(1)).constant == pytest.approx(2.0, rel=1e-12)
        assert dominates(poly(1), double).constant == pytest.approx(0.5, rel=1e-12)

    def test_ceiling_must_exceed_one(self):
        with pytest.raises(SpecError):
            dominates(poly(1), poly(1), ceiling=1.0)

    def test_equivalence(self):
        assert equivalent(poly(2), poly(2))
        assert not equivalent(poly(1), poly(2))


class TestRatioAndBD:
    @pytest.mark.parametrize(
        "w, w1, vanishes",
        [
            (poly(0), poly(1), True),
            (poly(1), poly(1), False),
            (poly(2), poly(1), False),
            (poly(9), Exponential(0.01), True),
        ],
    )
    def test_ratio_vanishes(self, w, w1, vanishes):
        assert ratio_vanishes(w, w1) is vanishes

    def test_ratio_undecidable_for_tables(self):
        t = Tabulated((-10, 0, 10), (11.0, 1.0, 11.0))
        assert ratio_vanishes(t, poly(1)) is None

    def test_bd_partial_sum_matches_direct_sum(self):
        res = bd_condition(poly(2), 1.5, 100)
        direct = math.fsum(2 * math.log1p(1.5 * n) / n**2 for n in range(1, 101))
        assert res.partial_sum == pytest.approx(direct, rel=1e-13)
        assert res.verdict == "converges"
        assert res.n_used == 100

    def test_bd_exponential_diverges(self):
        assert bd_condition(Exponential(0.3), 1.0, 50).verdict == "diverges"

    def test_bd_tabulated_inconclusive_and_clipped(self):
        t = Tabulated((-20, 0, 20), (21.0, 1.0, 21.0))
        res = bd_condition(t, 1.0, 50)
        assert res.verdict == "inconclusive"
        assert res.n_used == 20

    def test_bd_arguments(self):
        with pytest.raises(SpecError):
            bd_condition(poly(1), 0.0, 50)
        with pytest.raises(SpecError):
            bd_condition(poly(1), 1.0, 5)
