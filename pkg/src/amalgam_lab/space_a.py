"""The space A^{p,1,q,r}_{w1,w2}: functions in (L^p_{w1}, l^1) whose transform lies in (L^q_{w2}, l^r).

Norm: ||f||_A = ||f||_{(L^p_{w1}, l^1)} + ||fhat||_{(L^q_{w2}, l^r)}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .amalgam import NormReport, amalgam_norm, check_exponent, weighted_lp_norm
from .errors import HypothesisViolation, SpecError
from .funcrep import SampledFunction, make_zero, refine, smooth_corpus
from .spectral import FrequencyFunction, band_limit, convolve, fourier, translate
from .weights import Polynomial, WeightSpec, dominates, parse_weight, weight_from_json

SLACK = 1e-6

__all__ = [
    "SpaceSpec",
    "ANorm",
    "DiscreteMeasure",
    "a_norm",
    "membership",
    "algebra_chain_check",
    "module_check",
    "measure_convolve",
    "multiplier_norm_estimate",
    "band_limited_corpus",
    "parse_space",
]

UNWEIGHTED = Polynomial(0.0)


@dataclass(frozen=True)
class SpaceSpec:
    p: float
    q: float
    r: float
    w1: WeightSpec = UNWEIGHTED
    w2: WeightSpec = UNWEIGHTED
    w0: WeightSpec | None = None

    def __post_init__(self):
        for name in ("p", "q", "r"):
            val = check_exponent(getattr(self, name), name)
            if math.isinf(val):
                raise SpecError(f"exponent {name} must be finite for the space A")
            object.__setattr__(self, name, val)

    def with_(self, **kw) -> SpaceSpec:
        args = dict(p=self.p, q=self.q, r=self.r, w1=self.w1, w2=self.w2, w0=self.w0)
        args.update(kw)
        return SpaceSpec(**args)

    def to_json(self) -> dict:
        out = {"p": self.p, "q": self.q, "r": self.r, "w1": self.w1.to_json(), "w2": self.w2.to_json()}
        if self.w0 is not None:
            out["w0"] = self.w0.to_json()
        return out

    @classmethod
    def from_json(cls, obj: dict) -> SpaceSpec:
        try:
            return cls(
                float(obj["p"]),
                float(obj["q"]),
                float(obj["r"]),
                weight_from_json(obj.get("w1", {"family": "polynomial", "s": 0})),
                weight_from_json(obj.get("w2", {"family": "polynomial", "s": 0})),
                weight_from_json(obj["w0"]) if "w0" in obj else None,
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, SpecError):
                raise
            raise SpecError(f"malformed space spec {obj!r}") from exc

    def label(self) -> str:
        return f"A^({self.p:g},1,{self.q:g},{self.r:g})_({self.w1.label()},{self.w2.label()})"


def parse_space(text: str) -> SpaceSpec:
    """``p,q,r,w1,w2`` (weights in short form) or a JSON object."""
    import json

    text = text.strip()
    if text.startswith("{"):
        try:
            return SpaceSpec.from_json(json.loads(text))
        except json.JSONDecodeError as exc:
            raise SpecError(f"bad space JSON: {exc}") from exc
    parts = [t.strip() for t in text.split(",")]
    if len(parts) not in (3, 5, 6):
        raise SpecError(f"space spec needs p,q,r[,w1,w2[,w0]], got {text!r}")
    try:
        p, q, r = (float(t) for t in parts[:3])
    except ValueError as exc:
        raise SpecError(f"bad exponents in {text!r}") from exc
    ws = [parse_weight(t) for t in parts[3:]]
    return SpaceSpec(p, q, r, *ws)


@dataclass(frozen=True)
class ANorm:
    total: float
    part_time: NormReport
    part_freq: NormReport

    def to_json(self) -> dict:
        return {
            "total": self.total,
            "part_time": self.part_time.to_json(),
            "part_freq": self.part_freq.to_json(),
            "freq_tail_bound": self.part_freq.tail_bound,
        }


def a_norm(f: SampledFunction, s: SpaceSpec, fhat: FrequencyFunction | None = None) -> ANorm:
    if fhat is None:
        fhat = fourier(f)
    t = amalgam_norm(f, s.p, 1, s.w1)
    fr = amalgam_norm(fhat, s.q, s.r, s.w2)
    return ANorm(t.global_ + fr.global_, t, fr)


def membership(f: SampledFunction, s: SpaceSpec, rel_tol: float = 0.01) -> dict:
    """Numeric membership proxy: both parts finite and stable under one grid refinement."""
    coarse = a_norm(f, s)
    fine = a_norm(refine(f), s)

    def change(a, b):
        return abs(a - b) / max(abs(a), abs(b), 1e-300)

    dt = change(coarse.part_time.global_, fine.part_time.global_)
    df = change(coarse.part_freq.global_, fine.part_freq.global_)
    finite = all(math.isfinite(v) for v in (coarse.total, fine.total))
    return {
        "member": bool(finite and dt < rel_tol and df < rel_tol),
        "time_change": dt,
        "freq_change": df,
        "proxy": "stable under one refinement",
    }


def _ratio(num: float, den: float) -> float:
    if den == 0:
        return 0.0 if num == 0 else math.inf
    return num / den


@dataclass
class AlgebraCheck:
    lhs: float
    links: dict[str, tuple[float, float]]
    constant: float
    passed: bool

    def to_json(self) -> dict:
        return {
            "lhs": self.lhs,
            "links": {k: {"lhs": a, "rhs": b} for k, (a, b) in self.links.items()},
            "constant": self.constant,
            "pass": self.passed,
        }


def _holds(lhs: float, rhs: float, slack: float = SLACK) -> bool:
    return lhs <= rhs * (1 + slack) + 1e-300


def algebra_chain_check(f: SampledFunction, g: SampledFunction, s: SpaceSpec) -> AlgebraCheck:
    """Check the convolution-algebra chain link by link.

    (a) ||fhat||_inf <= ||f||_1 <= ||f||_{p1,w1}
    (b) ||(f*g)^||_{qr,w2} <= ||fhat||_inf ||ghat||_{qr,w2}
    (c) ||f*g||_{p1,w1} <= C ||f||_{p1,w1} ||g||_{p1,w1}, C measured
    and the resulting ||f*g||_A <= max(1, C) ||f||_A ||g||_A.
    """
    fg = convolve(f, g)
    F, G, FG = fourier(f), fourier(g), fourier(fg)
    na, ng, nfg = a_norm(f, s, F), a_norm(g, s, G), a_norm(fg, s, FG)
    f_sup = float(np.max(np.abs(F.values)))
    f_l1 = weighted_lp_norm(f, 1, UNWEIGHTED)
    t_f, t_g, t_fg = na.part_time.global_, ng.part_time.global_, nfg.part_time.global_
    C = _ratio(t_fg, t_f * t_g)
    links = {
        "fhat_sup<=f_L1": (f_sup, f_l1),
        "f_L1<=f_p1": (f_l1, t_f),
        "conv_hat_qr<=fhat_sup*ghat_qr": (nfg.part_freq.global_, f_sup * ng.part_freq.global_),
        "conv_p1<=C*f_p1*g_p1": (t_fg, C * t_f * t_g),
        "conv_A<=K*f_A*g_A": (nfg.total, max(1.0, C) * na.total * ng.total),
    }
    ok = math.isfinite(C) and all(_holds(a, b) for a, b in links.values())
    return AlgebraCheck(nfg.total, links, C, ok)


@dataclass
class ModuleCheck:
    ratio: float
    bound: float
    constant: float
    links: dict[str, tuple[float, float]]
    passed: bool

    def to_json(self) -> dict:
        return {
            "ratio": self.ratio,
            "bound": self.bound,
            "constant": self.constant,
            "links": {k: {"lhs": a, "rhs": b} for k, (a, b) in self.links.items()},
            "pass": self.passed,
        }


def module_check(f: SampledFunction, g: SampledFunction, s: SpaceSpec) -> ModuleCheck:
    """||f*g||_A <= K C_dom ||f||_A ||g||_{1,w0} with K = max(1, C) and C measured on the time part."""
    if s.w0 is None:
        raise SpecError("module check needs a module weight w0")
    dom = dominates(s.w1, s.w0)
    if not dom.holds:
        raise HypothesisViolation(
            f"module check needs w1 < w0; {s.w1.label()} is not dominated by {s.w0.label()}"
        )
    fg = convolve(f, g)
    F, G, FG = fourier(f), fourier(g), fourier(fg)
    na, nfg = a_norm(f, s, F), a_norm(fg, s, FG)
    g_w1 = weighted_lp_norm(g, 1, s.w1)
    g_w0 = weighted_lp_norm(g, 1, s.w0)
    g_sup = float(np.max(np.abs(G.values)))
    C = _ratio(nfg.part_time.global_, na.part_time.global_ * g_w1)
    K = max(1.0, C)
    ratio = _ratio(nfg.total, na.total * g_w0)
    bound = K * max(1.0, dom.constant)
    links = {
        "conv_hat_qr<=fhat_qr*ghat_sup": (nfg.part_freq.global_, na.part_freq.global_ * g_sup),
        "ghat_sup<=g_1w0": (g_sup, g_w0),
        "g_1w1<=Cdom*g_1w0": (g_w1, dom.constant * g_w0),
        "ratio<=bound": (ratio, bound),
    }
    ok = math.isfinite(C) and all(_holds(a, b) for a, b in links.values())
    return ModuleCheck(ratio, bound, C, links, ok)


@dataclass(frozen=True)
class DiscreteMeasure:
    atoms: tuple[tuple[float, complex], ...]

    def __post_init__(self):
        atoms = tuple((float(x), complex(c)) for x, c in self.atoms)
        for x, c in atoms:
            if not (math.isfinite(x) and np.isfinite(c)):
                raise SpecError("measure atoms must be finite")
        object.__setattr__(self, "atoms", atoms)

    def weighted_mass(self, w: WeightSpec) -> float:
        return float(sum(abs(c) * float(w(x)) for x, c in self.atoms))

    def to_json(self) -> dict:
        return {"atoms": [{"x": x, "c": [c.real, c.imag]} for x, c in self.atoms]}

    @classmethod
    def from_json(cls, obj: dict) -> DiscreteMeasure:
        try:
            atoms = []
            for a in obj["atoms"]:
                c = a["c"]
                atoms.append((a["x"], complex(c[0], c[1]) if isinstance(c, (list, tuple)) else c))
            return cls(tuple(atoms))
        except (KeyError, TypeError, IndexError) as exc:
            raise SpecError(f"malformed measure spec {obj!r}") from exc

    @classmethod
    def dirac(cls, x: float = 0.0, c: complex = 1.0) -> DiscreteMeasure:
        return cls(((x, c),))


def measure_convolve(mu: DiscreteMeasure, f: SampledFunction) -> SampledFunction:
    """mu * f = sum_i c_i T_{x_i} f."""
    out = make_zero(f.grid) if f.generator is not None else f.scale(0.0)
    for x, c in mu.atoms:
        out = out + translate(f, x).scale(c)
    return out


def multiplier_norm_estimate(
    mu: DiscreteMeasure, s: SpaceSpec, corpus: Sequence[SampledFunction]
) -> float:
    """Lower bound for the multiplier norm: max over the corpus of ||mu*f||_A / ||f||_{11,w1}."""
    if not corpus:
        raise SpecError("multiplier estimate needs a nonempty corpus")
    best = 0.0
    for f in corpus:
        den = amalgam_norm(f, 1, 1, s.w1).global_
        if den == 0:
            raise SpecError(f"corpus member {f.label} is zero")
        best = max(best, a_norm(measure_convolve(mu, f), s).total / den)
    return best


def band_limited_corpus(grid, B: float = 16.0) -> list[SampledFunction]:
    """Gaussian-type corpus members with their transforms cut off outside [-B, B].

    Bumps are left out: their cut-off versions spread ringing over the whole
    window and can no longer be translated inside it.
    """
    return [band_limit(f, B)[0] for f in smooth_corpus(grid) if "gaussian" in f.label]
