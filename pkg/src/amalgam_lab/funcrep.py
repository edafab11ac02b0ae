"""Sampled functions on integer-aligned uniform grids.

A grid covers the window [-L, L) with m samples per unit cell, so every
integer in the window is a grid point and cell I_n = [n, n+1) owns the
samples with indices (n+L)m .. (n+L+1)m - 1.

Besides the samples f(x_k) a function carries its left limits f(x_k^-).
They differ from the samples only at jumps (indicators) and supply the
right-endpoint value of each cell, so that the per-cell quadrature is exact
on aligned step functions.  Functions built from a closed form keep a
generator and can be resampled on a finer grid exactly.

Quadrature on a cell is composite Simpson over the m+1 nodes
x_0 .. x_{m-1} of the cell plus its right endpoint (left limit there).  The
weights are positive and sum to one per cell.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import AlignmentError, SpecError

# generator: x -> (f(x), f(x^-))
Generator = Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]]

ALIGN_TOL = 1e-9

__all__ = [
    "GridSpec",
    "SampledFunction",
    "make_indicator",
    "make_gaussian",
    "make_bump",
    "make_zero",
    "from_samples",
    "quadrature",
    "cell_quadrature",
    "simpson_weights",
    "refine",
    "function_from_json",
    "default_corpus",
    "smooth_corpus",
]


@dataclass(frozen=True)
class GridSpec:
    L: int = 16
    m: int = 256

    def __post_init__(self):
        if int(self.L) != self.L or self.L < 1:
            raise SpecError(f"half width L must be a positive integer, got {self.L}")
        if int(self.m) != self.m or self.m < 1 or (self.m & (self.m - 1)):
            raise SpecError(f"samples per cell m must be a power of two, got {self.m}")
        object.__setattr__(self, "L", int(self.L))
        object.__setattr__(self, "m", int(self.m))

    @property
    def h(self) -> float:
        return 1.0 / self.m

    @property
    def n_samples(self) -> int:
        return 2 * self.L * self.m

    @property
    def n_cells(self) -> int:
        return 2 * self.L

    @property
    def x(self) -> np.ndarray:
        return _grid_points(self.L, self.m)

    @property
    def cells(self) -> range:
        return range(-self.L, self.L)

    def cell_slice(self, n: int) -> slice:
        if not -self.L <= n < self.L:
            raise SpecError(f"cell {n} outside window [-{self.L}, {self.L})")
        start = (n + self.L) * self.m
        return slice(start, start + self.m)

    def index_of(self, x: float) -> int:
        """Index of grid point x; raises AlignmentError if x is not on the grid."""
        k = (x + self.L) * self.m
        kr = round(k)
        if abs(k - kr) > ALIGN_TOL * max(1.0, abs(k)):
            raise AlignmentError(f"{x} is not a multiple of h = 1/{self.m}")
        return int(kr)

    def steps(self, y: float) -> int:
        """Number of grid steps in a displacement y (must be a multiple of h)."""
        k = y * self.m
        kr = round(k)
        if abs(k - kr) > ALIGN_TOL * max(1.0, abs(k)):
            raise AlignmentError(f"shift {y} is not a multiple of h = 1/{self.m}")
        return int(kr)

    def refined(self) -> GridSpec:
        return GridSpec(self.L, 2 * self.m)

    def to_json(self) -> dict:
        return {"L": self.L, "m": self.m}


@lru_cache(maxsize=64)
def _grid_points(L: int, m: int) -> np.ndarray:
    x = -L + np.arange(2 * L * m) / m
    x.setflags(write=False)
    return x


@dataclass(frozen=True, eq=False)
class SampledFunction:
    grid: GridSpec
    values: np.ndarray
    label: str = ""
    left: np.ndarray | None = None  # f(x_k^-), length N+1; None means continuous
    generator: Generator | None = field(default=None, repr=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != (self.grid.n_samples,):
            raise SpecError(
                f"expected {self.grid.n_samples} samples, got shape {vals.shape}"
            )
        if not np.all(np.isfinite(vals)):
            raise SpecError("sampled function has non-finite values")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        if self.left is not None:
            left = np.asarray(self.left, dtype=complex)
            if left.shape != (self.grid.n_samples + 1,):
                raise SpecError("left limits must have length N+1")
            left.setflags(write=False)
            object.__setattr__(self, "left", left)

    @property
    def x(self) -> np.ndarray:
        return self.grid.x

    def left_limits(self) -> np.ndarray:
        """f(x_k^-) for k = 0..N, the last entry being the limit at the window edge L."""
        if self.left is not None:
            return self.left
        return np.concatenate([self.values, [0.0]])

    def edges(self) -> np.ndarray:
        """Left limit at the right endpoint of every cell, in cell order."""
        return self.left_limits()[self.grid.m :: self.grid.m]

    def is_continuous(self) -> bool:
        """No jumps at interior samples (the value at the window edge is ignored)."""
        return self.left is None or bool(np.array_equal(self.left[:-1], self.values))

    def is_real(self) -> bool:
        return bool(np.all(self.values.imag == 0))

    def _combine(self, other: SampledFunction, op, label: str) -> SampledFunction:
        if other.grid != self.grid:
            raise SpecError("functions live on different grids")
        left = None
        if self.left is not None or other.left is not None:
            left = op(self.left_limits(), other.left_limits())
        gen = None
        if self.generator is not None and other.generator is not None:
            g1, g2 = self.generator, other.generator

            def gen(x):
                a, al = g1(x)
                b, bl = g2(x)
                return op(a, b), op(al, bl)

        return SampledFunction(self.grid, op(self.values, other.values), label, left, gen)

    def __add__(self, other: SampledFunction) -> SampledFunction:
        return self._combine(other, np.add, f"({self.label}+{other.label})")

    def __sub__(self, other: SampledFunction) -> SampledFunction:
        return self._combine(other, np.subtract, f"({self.label}-{other.label})")

    def scale(self, c: complex) -> SampledFunction:
        gen = None
        if self.generator is not None:
            g = self.generator

            def gen(x):
                a, al = g(x)
                return c * a, c * al

        left = None if self.left is None else c * self.left
        return SampledFunction(self.grid, c * self.values, f"{c:g}*{self.label}", left, gen)

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def __neg__(self):
        return self.scale(-1.0)

    def resample(self, grid: GridSpec) -> SampledFunction:
        if self.generator is None:
            raise SpecError("only generator-backed functions can be resampled")
        return _from_generator(grid, self.generator, self.label)


def _from_generator(grid: GridSpec, gen: Generator, label: str) -> SampledFunction:
    x = np.concatenate([grid.x, [float(grid.L)]])
    vals, left = gen(x)
    vals = np.asarray(vals, dtype=complex)
    left = np.asarray(left, dtype=complex)
    # continuous functions need no explicit left limits
    explicit = None
    if not np.array_equal(vals[:-1], left[:-1]) or left[-1] != 0:
        explicit = left
    return SampledFunction(grid, vals[:-1], label, explicit, gen)


def make_zero(grid: GridSpec) -> SampledFunction:
    def gen(x):
        z = np.zeros_like(x, dtype=complex)
        return z, z

    return _from_generator(grid, gen, "zero")


def from_samples(grid: GridSpec, values, label: str = "samples") -> SampledFunction:
    return SampledFunction(grid, np.asarray(values, dtype=complex), label)


def make_indicator(a: float, b: float, grid: GridSpec) -> SampledFunction:
    """Indicator of [a, b) with grid-aligned endpoints."""
    if not (-grid.L <= a < b <= grid.L):
        raise SpecError(f"indicator [{a}, {b}) must satisfy -L <= a < b <= L")
    ia, ib = grid.index_of(a), grid.index_of(b)
    a, b = -grid.L + ia / grid.m, -grid.L + ib / grid.m

    def gen(x):
        inside = ((x >= a) & (x < b)).astype(complex)
        left = ((x > a) & (x <= b)).astype(complex)
        return inside, left

    return _from_generator(grid, gen, f"chi[{a:g},{b:g})")


def make_gaussian(grid: GridSpec, width: float = 1.0, center: float = 0.0) -> SampledFunction:
    """exp(-pi ((x - center)/width)^2); the default is its own Fourier transform."""

    def gen(x):
        v = np.exp(-np.pi * ((x - center) / width) ** 2).astype(complex)
        return v, v

    label = "gaussian" if (width, center) == (1.0, 0.0) else f"gaussian(w={width:g},c={center:g})"
    return _from_generator(grid, gen, label)


def _mollifier(t: np.ndarray) -> np.ndarray:
    out = np.zeros_like(t, dtype=float)
    inside = np.abs(t) < 1
    out[inside] = np.exp(-1.0 / (1.0 - t[inside] ** 2))
    return out


def make_bump(center: float, radius: float, grid: GridSpec) -> SampledFunction:
    """Smooth nonnegative bump supported in (center - radius, center + radius), unit integral."""
    if radius < 2 * grid.h:
        raise SpecError(f"bump radius {radius} below 2h = {2 * grid.h}")
    if center - radius < -grid.L or center + radius > grid.L:
        raise SpecError("bump support leaves the window")
    raw = _mollifier((grid.x - center) / radius)
    total = quadrature(from_samples(grid, raw))
    scale = 1.0 / total.real

    def gen(x):
        v = (scale * _mollifier((x - center) / radius)).astype(complex)
        return v, v

    return _from_generator(grid, gen, f"bump({center:g},{radius:g})")


@lru_cache(maxsize=32)
def simpson_weights(m: int) -> np.ndarray:
    """Per-cell quadrature weights on m+1 nodes (the last node is the right endpoint)."""
    h = 1.0 / m
    if m == 1:
        w = np.array([0.5, 0.5]) * h
    else:
        w = np.ones(m + 1)
        w[1:-1:2] = 4.0
        w[2:-1:2] = 2.0
        w *= h / 3.0
    w.setflags(write=False)
    return w


def cell_quadrature(node_values: np.ndarray, edge_values: np.ndarray, m: int) -> np.ndarray:
    """Integrals over each cell.

    ``node_values`` has shape (..., cells*m) and ``edge_values`` (..., cells);
    the result has shape (..., cells).
    """
    w = simpson_weights(m)
    vals = np.asarray(node_values)
    shape = vals.shape[:-1] + (vals.shape[-1] // m, m)
    body = vals.reshape(shape) @ w[:-1]
    return body + w[-1] * np.asarray(edge_values)


def quadrature(f: SampledFunction, cell: int | None = None) -> complex:
    """Integral of f over cell I_n, or over the whole window when cell is None."""
    per_cell = cell_quadrature(f.values, f.edges(), f.grid.m)
    if cell is None:
        return complex(np.sum(per_cell))
    f.grid.cell_slice(cell)  # range check
    return complex(per_cell[cell + f.grid.L])


def refine(f: SampledFunction) -> SampledFunction:
    """Same window, twice the resolution.

    Generator-backed functions are resampled from their closed form; others
    are linearly interpolated between samples (left limits at old nodes kept).
    """
    fine = f.grid.refined()
    if f.generator is not None:
        return f.resample(fine)
    ll = f.left_limits()
    ext = np.concatenate([f.values, [ll[-1]]])
    vals = np.empty(fine.n_samples, dtype=complex)
    vals[0::2] = f.values
    vals[1::2] = 0.5 * (f.values + ext[1:])
    left = None
    if f.left is not None:
        left = np.empty(fine.n_samples + 1, dtype=complex)
        left[0::2] = ll
        left[1::2] = vals[1::2]
    return SampledFunction(fine, vals, f.label, left)


def function_from_json(obj: dict, grid: GridSpec) -> SampledFunction:
    """Build a function from its JSON spec.

    Kinds: gaussian, indicator (a, b), bump (center, radius), samples (values).
    Optional keys ``shift`` and ``modulate`` apply a translation and a
    modulation afterwards.
    """
    from .spectral import modulate, translate

    try:
        kind = obj["kind"]
        if kind == "gaussian":
            f = make_gaussian(grid, float(obj.get("width", 1.0)), float(obj.get("center", 0.0)))
        elif kind == "indicator":
            f = make_indicator(float(obj["a"]), float(obj["b"]), grid)
        elif kind == "bump":
            f = make_bump(float(obj["center"]), float(obj["radius"]), grid)
        elif kind == "samples":
            vals = obj["values"]
            arr = np.asarray(
                [complex(v[0], v[1]) if isinstance(v, (list, tuple)) else v for v in vals],
                dtype=complex,
            )
            f = from_samples(grid, arr)
        elif kind == "zero":
            f = make_zero(grid)
        else:
            raise SpecError(f"unknown function kind {kind!r}")
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, SpecError):
            raise
        raise SpecError(f"malformed function spec {obj!r}") from exc
    if obj.get("shift"):
        f = translate(f, float(obj["shift"]))
    if obj.get("modulate"):
        f = modulate(f, float(obj["modulate"]))
    return f


def parse_function(text: str, grid: GridSpec) -> SampledFunction:
    """Parse ``gaussian``, ``indicator:a:b``, ``bump:c:r`` or a JSON object."""
    import json

    text = text.strip()
    if text.startswith("{"):
        try:
            return function_from_json(json.loads(text), grid)
        except json.JSONDecodeError as exc:
            raise SpecError(f"bad function JSON: {exc}") from exc
    name, *args = text.split(":")
    try:
        nums = [float(a) for a in args]
    except ValueError as exc:
        raise SpecError(f"bad function spec {text!r}") from exc
    if name == "gaussian" and len(nums) <= 2:
        return make_gaussian(grid, *nums)
    if name == "indicator" and len(nums) == 2:
        return make_indicator(nums[0], nums[1], grid)
    if name == "bump" and len(nums) == 2:
        return make_bump(nums[0], nums[1], grid)
    raise SpecError(f"bad function spec {text!r}")


# default corpora used by the verifier suites and the CLI
CORPUS_SPECS: tuple[dict, ...] = (
    {"kind": "gaussian"},
    {"kind": "indicator", "a": 0, "b": 1},
    {"kind": "bump", "center": 0, "radius": 0.5},
    {"kind": "bump", "center": 1, "radius": 1.5},
    {"kind": "gaussian", "width": 0.5, "modulate": 2.5},
    {"kind": "gaussian", "width": 2.0, "center": -1.0},
)

SMOOTH_CORPUS_SPECS: tuple[dict, ...] = tuple(
    s for s in CORPUS_SPECS if s["kind"] != "indicator"
)


def default_corpus(grid: GridSpec) -> list[SampledFunction]:
    return [function_from_json(s, grid) for s in CORPUS_SPECS]


def smooth_corpus(grid: GridSpec) -> list[SampledFunction]:
    return [function_from_json(s, grid) for s in SMOOTH_CORPUS_SPECS]


def mass_outside_gaussian(L: float) -> float:
    """Integral of exp(-pi x^2) over |x| >= L."""
    return math.erfc(math.sqrt(math.pi) * L)
