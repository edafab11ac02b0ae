import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from amalgam_lab.errors import AlignmentError, SpecError
from amalgam_lab.funcrep import (
    GridSpec,
    cell_quadrature,
    from_samples,
    function_from_json,
    make_bump,
    make_gaussian,
    make_indicator,
    make_zero,
    mass_outside_gaussian,
    parse_function,
    quadrature,
    refine,
    simpson_weights,
)


class TestGrid:
    def test_layout(self):
        g = GridSpec(2, 4)
        assert g.n_samples == 16
        assert g.h == 0.25
        assert g.x[0] == -2.0 and g.x[-1] == 1.75
        assert g.cell_slice(0) == slice(8, 12)
        assert list(g.cells) == [-2, -1, 0, 1]

    @pytest.mark.parametrize("L, m", [(0, 4), (2, 3), (1.5, 4), (2, 0)])
    def test_invalid(self, L, m):
        with pytest.raises(SpecError):
            GridSpec(L, m)

    def test_alignment(self, grid):
        assert grid.steps(0.5) == 128
        assert grid.index_of(0.0) == 16 * 256
        with pytest.raises(AlignmentError):
            grid.steps(0.001)
        with pytest.raises(SpecError):
            grid.cell_slice(16)


class TestQuadrature:
    @pytest.mark.parametrize("m", [1, 2, 4, 8, 256])
    def test_weights_positive_and_normalized(self, m):
        w = simpson_weights(m)
        assert np.all(w > 0)
        assert math.fsum(w) == pytest.approx(1.0, abs=1e-15)

    @pytest.mark.parametrize("deg", [0, 1, 2, 3])
    def test_exact_on_cubics(self, deg):
        g = GridSpec(2, 8)
        f = from_samples(g, g.x**deg)
        # cell 0 is interior, so its right edge reads the next sample
        exact = 1.0 / (deg + 1)
        assert quadrature(f, 0).real == pytest.approx(exact, abs=1e-15)

    def test_indicator_exact(self, grid):
        for a, b in [(0, 1), (-3, 5), (0.25, 0.75), (-16, 16)]:
            f = make_indicator(a, b, grid)
            assert quadrature(f).real == pytest.approx(b - a, abs=1e-13)

    def test_gaussian_mass(self, gauss):
        assert quadrature(gauss).real == pytest.approx(1 - mass_outside_gaussian(16), abs=1e-15)

    def test_gaussian_cell_integral_matches_erf(self, gauss):
        exact = 0.5 * math.erf(math.sqrt(math.pi))
        assert quadrature(gauss, 0).real == pytest.approx(exact, rel=1e-10)

    @given(st.lists(st.floats(-5, 5), min_size=32, max_size=32), st.floats(-3, 3))
    def test_linear(self, vals, c):
        g = GridSpec(2, 8)
        f = from_samples(g, vals)
        assert quadrature(f.scale(c)) == pytest.approx(c * quadrature(f), abs=1e-12)

    def test_batched_cell_quadrature(self):
        nodes = np.ones((3, 8))
        edges = np.ones((3, 2))
        np.testing.assert_allclose(cell_quadrature(nodes, edges, 4), np.ones((3, 2)))


class TestConstructors:
    def test_indicator_left_limits(self, small_grid):
        f = make_indicator(0, 1, small_grid)
        k0 = small_grid.index_of(0.0)
        k1 = small_grid.index_of(1.0)
        assert f.values[k0] == 1 and f.left_limits()[k0] == 0
        assert f.values[k1] == 0 and f.left_limits()[k1] == 1
        assert not f.is_continuous()

    def test_indicator_bounds(self, small_grid):
        with pytest.raises(SpecError):
            make_indicator(1, 1, small_grid)
        with pytest.raises(SpecError):
            make_indicator(-5, 0, small_grid)

    def test_bump_normalized_and_supported(self, grid):
        b = make_bump(1.0, 0.5, grid)
        assert quadrature(b).real == pytest.approx(1.0, abs=1e-14)
        outside = np.abs(grid.x - 1.0) >= 0.5
        assert np.all(b.values[outside] == 0)
        assert b.is_continuous()

    def test_bump_radius_floor(self, grid):
        with pytest.raises(SpecError):
            make_bump(0.0, grid.h, grid)
        with pytest.raises(SpecError):
            make_bump(15.5, 1.0, grid)

    def test_zero(self, small_grid):
        z = make_zero(small_grid)
        assert quadrature(z) == 0

    def test_rejects_non_finite(self, small_grid):
        vals = np.zeros(small_grid.n_samples)
        vals[3] = np.nan
        with pytest.raises(SpecError):
            from_samples(small_grid, vals)

    def test_arithmetic_keeps_jumps(self, small_grid):
        f = make_indicator(0, 1, small_grid) + make_indicator(1, 2, small_grid)
        assert np.array_equal(f.values, make_indicator(0, 2, small_grid).values)
        assert f.left is not None

    def test_grid_mismatch(self, small_grid, grid):
        with pytest.raises(SpecError):
            make_zero(small_grid) + make_zero(grid)


class TestRefine:
    def test_generator_resample(self, small_grid):
        g = make_gaussian(small_grid)
        r = refine(g)
        assert r.grid == GridSpec(4, 32)
        np.testing.assert_array_equal(r.values, make_gaussian(r.grid).values)

    def test_samples_interpolated(self):
        g = GridSpec(1, 2)
        f = from_samples(g, [0.0, 1.0, 2.0, 3.0])
        r = refine(f)
        np.testing.assert_allclose(r.values.real, [0, 0.5, 1, 1.5, 2, 2.5, 3, 1.5])

    def test_refined_indicator_integral(self, small_grid):
        f = refine(make_indicator(0, 1, small_grid))
        assert quadrature(f).real == pytest.approx(1.0, abs=1e-14)


class TestParsing:
    @pytest.mark.parametrize(
        "text, label",
        [
            ("gaussian", "gaussian"),
            ("indicator:0:1", "chi[0,1)"),
            ("bump:0:0.5", "bump(0,0.5)"),
            ("gaussian:2:-1", "gaussian(w=2,c=-1)"),
        ],
    )
    def test_short_forms(self, grid, text, label):
        assert parse_function(text, grid).label == label

    @pytest.mark.parametrize("text", ["sinc", "indicator:0", "bump:a:b", '{"kind": 3}', "{"])
    def test_bad_forms(self, grid, text):
        with pytest.raises(SpecError):
            parse_function(text, grid)

    def test_json_shift_and_modulate(self, small_grid):
        f = function_from_json({"kind": "indicator", "a": 0, "b": 1, "shift": 1}, small_grid)
        np.testing.assert_array_equal(f.values, make_indicator(1, 2, small_grid).values)
        h = function_from_json({"kind": "gaussian", "modulate": 1.0}, small_grid)
        np.testing.assert_allclose(np.abs(h.values), make_gaussian(small_grid).values.real)

    def test_json_samples(self, small_grid):
        vals = [[1.0, 2.0]] + [0.0] * (small_grid.n_samples - 1)
        f = function_from_json({"kind": "samples", "values": vals}, small_grid)
        assert f.values[0] == 1 + 2j
