"""Translation, modulation, Fourier transform and convolution on sampled functions.

Fourier convention: fhat(xi) = int f(x) exp(-2 pi i x xi) dx.

The transform zero-pads the N = 2Lm samples to P = m * 2^ceil(log2(8L))
points (at least 4N), so the frequency step is m/P and every integer
frequency is a sample.  The reciprocal window is [-m/2, m/2); it carries
exactly one period of the discrete transform, which is why the frequency
function's right edge wraps around to its first sample.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import SpecError, WindowOverflowError
from .funcrep import GridSpec, SampledFunction

MASS_TOL = 1e-12
IMAG_TOL = 1e-10

__all__ = [
    "FrequencyFunction",
    "padded_length",
    "frequency_grid",
    "translate",
    "modulate",
    "fourier",
    "inverse_fourier",
    "convolve",
    "direct_convolve",
    "band_limit",
]


def padded_length(grid: GridSpec) -> int:
    return grid.m * (1 << math.ceil(math.log2(8 * grid.L)))


def frequency_grid(grid: GridSpec) -> GridSpec:
    if grid.m < 2:
        raise SpecError("Fourier transform needs m >= 2 samples per cell")
    return GridSpec(grid.m // 2, padded_length(grid) // grid.m)


@dataclass(frozen=True, eq=False)
class FrequencyFunction(SampledFunction):
    """Samples of fhat on the reciprocal window; shares the cell machinery of SampledFunction."""

    source_grid: GridSpec | None = field(default=None, repr=False)
    domain: str = field(default="frequency", repr=False)

    def left_limits(self) -> np.ndarray:
        if self.left is not None:
            return self.left
        return np.concatenate([self.values, self.values[:1]])


def _phase(grid: GridSpec) -> np.ndarray:
    """exp(2 pi i L xi_j) on the frequency samples, from exact integer arithmetic."""
    P = padded_length(grid)
    j = np.arange(P, dtype=np.int64)
    frac = ((grid.L * grid.m * j) % P) / P
    sign = -1.0 if (grid.L * grid.m) % 2 else 1.0  # exp(-i pi L m)
    return sign * np.exp(2j * np.pi * frac)


def _alternating(n: int) -> np.ndarray:
    s = np.ones(n)
    s[1::2] = -1.0
    return s


def fourier(f: SampledFunction) -> FrequencyFunction:
    grid = f.grid
    fg = frequency_grid(grid)
    P = padded_length(grid)
    a = np.zeros(P, dtype=complex)
    a[: grid.n_samples] = f.values * _alternating(grid.n_samples)
    F = grid.h * _phase(grid) * np.fft.fft(a)
    return FrequencyFunction(fg, F, f"fourier({f.label})", source_grid=grid)


def inverse_fourier(F: FrequencyFunction, with_tail: bool = False):
    """Invert ``fourier``; returns the window part and, optionally, the L1 mass found outside it."""
    grid = F.source_grid
    if grid is None:
        raise SpecError("frequency function has no source grid")
    P = padded_length(grid)
    a = np.fft.ifft(np.asarray(F.values) / (grid.h * _phase(grid)))
    a = a * _alternating(P)
    inside = a[: grid.n_samples]
    f = SampledFunction(grid, inside, f"ifourier({F.label})")
    if with_tail:
        return f, float(grid.h * np.sum(np.abs(a[grid.n_samples :])))
    return f


def _shift_array(arr: np.ndarray, s: int) -> tuple[np.ndarray, np.ndarray]:
    """Shift by s slots (positive = right); return (shifted, dropped entries)."""
    n = arr.shape[0]
    out = np.zeros_like(arr)
    if abs(s) >= n:
        return out, arr
    if s >= 0:
        out[s:] = arr[: n - s]
        return out, arr[n - s :]
    out[: n + s] = arr[-s:]
    return out, arr[:-s]


def translate(f: SampledFunction, y: float) -> SampledFunction:
    """T_y f(x) = f(x - y) for a grid-aligned y; raises if mass would leave the window."""
    grid = f.grid
    s = grid.steps(y)
    if s == 0:
        return f
    vals, dropped = _shift_array(f.values, s)
    total = np.sum(np.abs(f.values))
    lost = np.sum(np.abs(dropped))
    if lost > MASS_TOL * total:
        raise WindowOverflowError(
            f"translating {f.label} by {y} drops relative mass {lost / total:.3g}"
        )
    left = None
    if f.left is not None:
        left, _ = _shift_array(f.left, s)
    gen = None
    if f.generator is not None:
        g = f.generator

        def gen(x):
            return g(x - y)

    return SampledFunction(grid, vals, f"T[{y:g}]{f.label}", left, gen)


def modulate(f: SampledFunction, t: float) -> SampledFunction:
    """M_t f(x) = exp(2 pi i t x) f(x)."""
    if t == 0:
        return f
    grid = f.grid
    char = np.exp(2j * np.pi * t * grid.x)
    left = None
    if f.left is not None:
        xe = np.concatenate([grid.x, [float(grid.L)]])
        left = f.left * np.exp(2j * np.pi * t * xe)
    gen = None
    if f.generator is not None:
        g = f.generator

        def gen(x):
            v, vl = g(x)
            c = np.exp(2j * np.pi * t * x)
            return c * v, c * vl

    return SampledFunction(grid, char * f.values, f"M[{t:g}]{f.label}", left, gen)


def convolve(
    f: SampledFunction, g: SampledFunction, overflow_tol: float = MASS_TOL
) -> SampledFunction:
    """(f*g)(x_j) = h sum_k f(x_k) g(x_j - x_k) via zero-padded FFT.

    The result is checked for mass falling outside the window (relative to
    its total L1 mass); pass ``overflow_tol=math.inf`` to truncate silently.
    """
    if f.grid != g.grid:
        raise SpecError("convolution operands live on different grids")
    grid = f.grid
    N = grid.n_samples
    P = padded_length(grid)
    full = grid.h * np.fft.ifft(np.fft.fft(f.values, P) * np.fft.fft(g.values, P))
    lo, hi = N // 2, N // 2 + N
    total = np.sum(np.abs(full))
    outside = total - np.sum(np.abs(full[lo:hi]))
    if total > 0 and outside > overflow_tol * total:
        raise WindowOverflowError(
            f"convolution {f.label}*{g.label} leaves relative mass {outside / total:.3g} "
            "outside the window"
        )
    res = full[lo:hi]
    if f.is_real() and g.is_real():
        scale = max(1.0, float(np.max(np.abs(res.real))))
        resid = float(np.max(np.abs(res.imag)))
        if resid > IMAG_TOL * scale:
            raise SpecError(f"imaginary residue {resid:.3g} on a real convolution")
        res = res.real
    return SampledFunction(grid, res, f"({f.label}*{g.label})")


def direct_convolve(f: SampledFunction, g: SampledFunction, points) -> np.ndarray:
    """Reference convolution: h sum_k f(x_k) g(x - x_k), one O(N) sum per point.

    g is evaluated from its closed form when it has one, otherwise by grid
    lookup (points must then be grid-aligned).
    """
    grid = f.grid
    x = grid.x
    out = np.empty(len(points), dtype=complex)
    for i, pt in enumerate(points):
        arg = pt - x
        if g.generator is not None:
            gv = np.asarray(g.generator(arg)[0], dtype=complex)
        else:
            k0 = grid.index_of(pt)
            idx = k0 - np.arange(grid.n_samples) + grid.n_samples // 2
            ok = (idx >= 0) & (idx < grid.n_samples)
            gv = np.zeros(grid.n_samples, dtype=complex)
            gv[ok] = g.values[idx[ok]]
        out[i] = grid.h * np.sum(f.values * gv)
    return out


def band_limit(f: SampledFunction, B: float, taper: float = 0.5):
    """Zero fhat outside [-B, B] with a raised-cosine roll-off on (taper*B, B].

    Returns (band-limited function on the window, L1 mass of its inverse
    transform that falls outside the window).
    """
    if B <= 0:
        raise SpecError("band limit must be positive")
    F = fourier(f)
    xi = np.abs(F.grid.x)
    b0 = taper * B
    mask = np.where(xi <= b0, 1.0, 0.0)
    roll = (xi > b0) & (xi < B)
    mask[roll] = 0.5 * (1 + np.cos(np.pi * (xi[roll] - b0) / (B - b0)))
    Fb = FrequencyFunction(F.grid, F.values * mask, F.label, source_grid=F.source_grid)
    hb, tail = inverse_fourier(Fb, with_tail=True)
    if f.is_real():
        hb = SampledFunction(hb.grid, hb.values.real, f"band[{B:g}]{f.label}")
    else:
        hb = SampledFunction(hb.grid, hb.values, f"band[{B:g}]{f.label}")
    return hb, tail
