"""Weighted amalgam norms (L^p_w, l^q) over the unit-cell partition of the window."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import SpecError
from .funcrep import GridSpec, SampledFunction, cell_quadrature
from .weights import WeightSpec

__all__ = [
    "NormReport",
    "check_exponent",
    "local_norm",
    "local_norms",
    "lq_aggregate",
    "amalgam_norm",
    "weighted_lp_norm",
    "exponent_json",
]


def check_exponent(p: float, name: str = "p") -> float:
    p = float(p)
    if math.isnan(p) or p < 1:
        raise SpecError(f"exponent {name} must lie in [1, inf], got {p}")
    return p


def exponent_json(p: float):
    return "inf" if math.isinf(p) else p


@lru_cache(maxsize=128)
def _weight_on_grid(w: WeightSpec, grid: GridSpec) -> tuple[np.ndarray, np.ndarray]:
    nodes = np.asarray(w(grid.x), dtype=float)
    ends = np.asarray(w(np.arange(-grid.L + 1, grid.L + 1, dtype=float)), dtype=float)
    nodes.setflags(write=False)
    ends.setflags(write=False)
    return nodes, ends


def local_norms(f: SampledFunction, p: float, w: WeightSpec) -> np.ndarray:
    """||f||_{L^p_w(I_n)} for every window cell, in cell order."""
    p = check_exponent(p)
    wn, we = _weight_on_grid(w, f.grid)
    node = np.abs(f.values) * wn
    edge = np.abs(f.edges()) * we
    m = f.grid.m
    if math.isinf(p):
        return np.maximum(node.reshape(-1, m).max(axis=1), edge)
    if p == 1:
        return cell_quadrature(node, edge, m)
    # scale each cell by its max so |f|^p neither underflows nor overflows
    top = np.maximum(node.reshape(-1, m).max(axis=1), edge)
    safe = np.where(top > 0, top, 1.0)
    scaled_node = (node.reshape(-1, m) / safe[:, None]).ravel()
    return top * cell_quadrature(scaled_node**p, (edge / safe) ** p, m) ** (1.0 / p)


def local_norm(f: SampledFunction, n: int, p: float, w: WeightSpec) -> float:
    f.grid.cell_slice(n)
    return float(local_norms(f, p, w)[n + f.grid.L])


def lq_aggregate(locals_: np.ndarray, q: float) -> float:
    """l^q norm of a nonnegative sequence, summed in fixed index order."""
    q = check_exponent(q, "q")
    v = np.asarray(locals_, dtype=float)
    if v.size == 0:
        return 0.0
    top = float(v.max())
    if math.isinf(q):
        return top
    if top == 0.0:
        return 0.0
    if q == 1:
        return float(np.sum(v))
    return top * float(np.sum((v / top) ** q)) ** (1.0 / q)


@dataclass(frozen=True)
class NormReport:
    p: float
    q: float
    weight: WeightSpec
    grid: GridSpec
    locals_: np.ndarray
    global_: float
    domain: str = "time"

    @property
    def local_norms(self) -> dict[int, float]:
        return {n: float(v) for n, v in zip(self.grid.cells, self.locals_)}

    @property
    def tail_bound(self) -> float:
        """Largest norm among the two boundary cells: the visible size of the truncated tail."""
        return float(max(self.locals_[0], self.locals_[-1]))

    def recompute_global(self) -> float:
        return lq_aggregate(self.locals_, self.q)

    def to_json(self) -> dict:
        return {
            "p": exponent_json(self.p),
            "q": exponent_json(self.q),
            "weight": self.weight.to_json(),
            "global": self.global_,
            "locals": {str(n): float(v) for n, v in zip(self.grid.cells, self.locals_)},
            "m": self.grid.m,
            "L": self.grid.L,
            "domain": self.domain,
            "tail_bound": self.tail_bound,
        }


def amalgam_norm(f: SampledFunction, p: float, q: float, w: WeightSpec) -> NormReport:
    """(sum_n ||f||_{L^p_w(I_n)}^q)^{1/q} over the window cells (max for q = inf)."""
    p = check_exponent(p)
    q = check_exponent(q, "q")
    loc = local_norms(f, p, w)
    domain = getattr(f, "domain", "time")
    return NormReport(p, q, w, f.grid, loc, lq_aggregate(loc, q), domain)


def weighted_lp_norm(f: SampledFunction, p: float, w: WeightSpec) -> float:
    """||f w||_p over the whole window."""
    p = check_exponent(p)
    return lq_aggregate(local_norms(f, p, w), p)
