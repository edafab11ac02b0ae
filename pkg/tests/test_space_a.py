import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from amalgam_lab.amalgam import amalgam_norm, local_norms, weighted_lp_norm
from amalgam_lab.errors import HypothesisViolation, SpecError
from amalgam_lab.funcrep import GridSpec, make_bump, make_gaussian, make_indicator, make_zero
from amalgam_lab.spectral import fourier, modulate
from amalgam_lab.space_a import (
    UNWEIGHTED,
    DiscreteMeasure,
    SpaceSpec,
    a_norm,
    algebra_chain_check,
    band_limited_corpus,
    measure_convolve,
    membership,
    module_check,
    multiplier_norm_estimate,
    parse_space,
)
from amalgam_lab.weights import Exponential, poly

from conftest import A_STAR

S11 = SpaceSpec(2, 2, 2, poly(1), poly(1))
S00 = SpaceSpec(2, 2, 2)


@pytest.fixture(scope="module")
def band(grid):
    return band_limited_corpus(grid)


class TestSpaceSpec:
    @pytest.mark.parametrize("bad", [dict(p=0.5), dict(q=math.inf), dict(r=float("nan"))])
    def test_exponent_range(self, bad):
        args = dict(p=2.0, q=2.0, r=2.0)
        args.update(bad)
        with pytest.raises(SpecError):
            SpaceSpec(**args)

    def test_short_form(self):
        s = parse_space("3,2,1,poly:1,exp:0.5")
        assert (s.p, s.q, s.r) == (3.0, 2.0, 1.0)
        assert s.w1 == poly(1) and s.w2 == Exponential(0.5)
        assert parse_space("2,2,2").w1 == UNWEIGHTED

    @pytest.mark.parametrize("text", ["2,2", "2,2,2,poly:1", "a,2,2", "{", '{"p": 2}'])
    def test_bad_forms(self, text):
        with pytest.raises(SpecError):
            parse_space(text)

    def test_json_round_trip(self):
        s = SpaceSpec(2, 3, 1, poly(1), Exponential(0.1), poly(2))
        assert parse_space(json.dumps(s.to_json())) == s
        assert SpaceSpec.from_json(s.to_json()) == s

    def test_with_replaces_fields(self):
        assert S11.with_(p=3.0) == SpaceSpec(3, 2, 2, poly(1), poly(1))


class TestNorm:
    def test_zero(self, grid):
        assert a_norm(make_zero(grid), S11).total == 0.0

    @pytest.mark.parametrize("m", [256, 512])
    def test_gaussian_reference(self, m):
        assert a_norm(make_gaussian(GridSpec(16, m)), S11).total == pytest.approx(A_STAR, abs=1e-5)

    def test_parts_add_up(self, gauss):
        n = a_norm(gauss, S11)
        assert n.total == n.part_time.global_ + n.part_freq.global_
        assert n.part_time.global_ == amalgam_norm(gauss, 2, 1, poly(1)).global_
        body = n.to_json()
        # roundoff floor of the transform, far below the quadrature error
        assert body["freq_tail_bound"] < 1e-12

    @pytest.mark.parametrize("t", [1, -2, 5])
    def test_integer_modulation_invariant_without_frequency_weight(self, corpus, t):
        s = SpaceSpec(2, 3, 1, poly(1), UNWEIGHTED)
        for f in corpus:
            if "gaussian" not in f.label:
                continue
            assert a_norm(modulate(f, t), s).total == pytest.approx(a_norm(f, s).total, rel=1e-12)

    @given(st.integers(0, 5), st.integers(0, 5), st.floats(-3, 3), st.floats(-3, 3))
    def test_norm_axioms(self, corpus, i, j, a, b):
        f, g = corpus[i], corpus[j]
        lhs = a_norm(f.scale(a) + g.scale(b), S11).total
        rhs = abs(a) * a_norm(f, S11).total + abs(b) * a_norm(g, S11).total
        assert lhs <= rhs + 1e-12 * max(1.0, rhs)
        assert a_norm(f.scale(a), S11).total == pytest.approx(abs(a) * a_norm(f, S11).total, rel=1e-12, abs=1e-300)

    def test_bf_chain(self, corpus):
        for f in corpus:
            chain = [
                float(np.max(local_norms(f, 1, UNWEIGHTED))),
                weighted_lp_norm(f, 1, UNWEIGHTED),
                weighted_lp_norm(f, 1, S11.w1),
                amalgam_norm(f, 1, 1, S11.w1).global_,
                amalgam_norm(f, S11.p, 1, S11.w1).global_,
                a_norm(f, S11).total,
            ]
            assert all(x <= y * (1 + 1e-9) for x, y in zip(chain, chain[1:])), (f.label, chain)


class TestMembership:
    def test_gaussian_is_member(self, gauss):
        rep = membership(gauss, S11)
        assert rep["member"]
        assert rep["time_change"] < 1e-6
        assert "proxy" in rep

    def test_indicator_frequency_part_is_unstable(self, grid):
        # the transform of a jump decays like 1/xi, so a weighted l^1 sum keeps growing with the window
        s = SpaceSpec(1, 1, 1, UNWEIGHTED, poly(1))
        rep = membership(make_indicator(0, 1, grid), s)
        assert not rep["member"]
        assert rep["freq_change"] > 0.01


class TestAlgebra:
    def test_indicator_pair(self, grid):
        c = make_indicator(0, 1, grid)
        chk = algebra_chain_check(c, c, S00)
        assert chk.passed
        lhs, rhs = chk.links["conv_hat_qr<=fhat_sup*ghat_qr"]
        assert lhs / rhs <= 1 + 1e-12

    def test_gaussian_and_bump(self, gauss, grid):
        chk = algebra_chain_check(gauss, make_bump(0, 0.5, grid), S11)
        assert chk.passed
        assert chk.constant >= 0

    def test_zero(self, grid, gauss):
        chk = algebra_chain_check(make_zero(grid), gauss, S11)
        assert chk.passed
        for a, b in chk.links.values():
            assert a == 0.0 and b == 0.0

    @pytest.mark.parametrize("pqr", [(2, 2, 2), (3, 2, 1)])
    @pytest.mark.parametrize("w", [UNWEIGHTED, poly(1)], ids=["w0", "w1"])
    def test_corpus_pairs(self, corpus, pqr, w):
        s = SpaceSpec(*pqr, w, w)
        for f in corpus:
            for g in corpus:
                assert algebra_chain_check(f, g, s).passed, (f.label, g.label)

    def test_json(self, gauss):
        body = algebra_chain_check(gauss, gauss, S11).to_json()
        assert set(body) == {"lhs", "links", "constant", "pass"}
        assert all(set(v) == {"lhs", "rhs"} for v in body["links"].values())


class TestModule:
    def test_gaussian_bump(self, gauss, grid):
        s = S11.with_(w0=poly(2))
        chk = module_check(gauss, make_bump(0, 0.5, grid), s)
        assert chk.passed
        assert chk.ratio <= chk.bound

    def test_needs_domination(self, gauss, grid):
        s = SpaceSpec(2, 2, 2, poly(2), poly(1), poly(1))
        with pytest.raises(HypothesisViolation):
            module_check(gauss, make_bump(0, 0.5, grid), s)

    def test_needs_module_weight(self, gauss):
        with pytest.raises(SpecError):
            module_check(gauss, gauss, S11)

    def test_zero_partner(self, gauss, grid):
        chk = module_check(gauss, make_zero(grid), S11.with_(w0=poly(2)))
        assert chk.ratio == 0.0
        assert chk.passed


class TestMeasures:
    def test_dirac_at_origin(self, gauss):
        out = measure_convolve(DiscreteMeasure.dirac(), gauss)
        np.testing.assert_array_equal(out.values, gauss.values)

    def test_dirac_moves_indicator(self, grid):
        out = measure_convolve(DiscreteMeasure.dirac(1.0), make_indicator(0, 1, grid))
        np.testing.assert_array_equal(out.values, make_indicator(1, 2, grid).values)

    def test_linearity(self, grid):
        mu = DiscreteMeasure(((0.0, 0.5), (1.0, 0.5)))
        out = measure_convolve(mu, make_indicator(0, 1, grid))
        expect = make_indicator(0, 1, grid).scale(0.5) + make_indicator(1, 2, grid).scale(0.5)
        np.testing.assert_array_equal(out.values, expect.values)

    def test_weighted_mass_and_json(self):
        mu = DiscreteMeasure(((0.0, 1.0), (2.0, -1j)))
        assert mu.weighted_mass(poly(1)) == 4.0
        assert DiscreteMeasure.from_json(json.loads(json.dumps(mu.to_json()))) == mu

    def test_bad_measure(self):
        with pytest.raises(SpecError):
            DiscreteMeasure(((math.inf, 1.0),))
        with pytest.raises(SpecError):
            DiscreteMeasure.from_json({"atom": []})


class TestMultiplier:
    def test_identity_at_least_one(self, band):
        assert multiplier_norm_estimate(DiscreteMeasure.dirac(), S11, band) >= 1.0

    def test_homogeneous(self, band):
        one = multiplier_norm_estimate(DiscreteMeasure.dirac(), S11, band)
        two = multiplier_norm_estimate(DiscreteMeasure.dirac(0.0, 2.0), S11, band)
        assert two == pytest.approx(2 * one, rel=1e-14)

    @pytest.mark.parametrize("y", [1.0, 2.0, -3.0, 0.5])
    def test_translation_bound(self, band, y):
        one = multiplier_norm_estimate(DiscreteMeasure.dirac(), S11, band)
        est = multiplier_norm_estimate(DiscreteMeasure.dirac(y), S11, band)
        assert est <= S11.w1(y) * one * (1 + 1e-9)

    def test_monotone_in_corpus(self, band):
        mu = DiscreteMeasure.dirac()
        assert multiplier_norm_estimate(mu, S11, band[:1]) <= multiplier_norm_estimate(mu, S11, band)

    def test_empty_corpus(self):
        with pytest.raises(SpecError):
            multiplier_norm_estimate(DiscreteMeasure.dirac(), S11, [])

    def test_band_limited_corpus_is_cut(self, band):
        for f in band:
            F = fourier(f)
            assert np.max(np.abs(F.values[np.abs(F.grid.x) > 16])) <= 1e-8
