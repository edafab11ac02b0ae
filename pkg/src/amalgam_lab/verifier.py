"""Numerical test suites keyed by the theorem they exercise.

Every suite is computed twice, on the input grid and on its refinement
(m -> 2m), unless ``refinement=False``.  The largest relative change of
any measured value is stored as ``grid_refinement_delta`` and a synthetic
``grid_refinement`` case fails if any case verdict flips between the two
resolutions.

Tolerances follow the error source of each check: quadrature-backed
inequalities get a multiplicative slack of 1e-6 (1e-9 where the
inequality holds exactly for positive quadrature weights), transform-backed
identities 1e-8.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .amalgam import amalgam_norm, local_norms, weighted_lp_norm
from .decide import decide_embedding
from .errors import HypothesisViolation, SpecError, WindowOverflowError
from .funcrep import SampledFunction, cell_quadrature, make_bump, refine
from .space_a import (
    UNWEIGHTED,
    SpaceSpec,
    a_norm,
    algebra_chain_check,
    module_check,
)
from .spectral import band_limit, convolve, fourier, translate
from .weights import WeightSpec, dominates, ratio_vanishes

EXACT_SLACK = 1e-9
QUAD_SLACK = 1e-6
DIVERGENCE_FACTOR = 10.0

__all__ = [
    "Case",
    "SuiteReport",
    "translation_bounds",
    "translation_continuity",
    "embedding_constant",
    "iff_divergence_scan",
    "noncompactness_witness",
    "witness_rejection",
    "approximate_identity",
    "vague_convergence",
    "bf_chain",
    "algebra_suite",
    "module_suite",
    "pairing",
    "conjugate",
]


@dataclass
class Case:
    name: str
    inputs: dict
    measured: dict
    bounds: dict
    passed: bool
    status: str = ""

    def __post_init__(self):
        if not self.status:
            self.status = "pass" if self.passed else "fail"

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "inputs": self.inputs,
            "measured": self.measured,
            "bounds": self.bounds,
            "pass": self.passed,
            "status": self.status,
        }


@dataclass
class SuiteReport:
    theorem_tag: str
    cases: list[Case]
    grid_refinement_delta: float | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def overall_pass(self) -> bool:
        return all(c.passed for c in self.cases)

    def case(self, name: str) -> Case:
        for c in self.cases:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json(self) -> dict:
        return {
            "theorem_tag": self.theorem_tag,
            "overall_pass": self.overall_pass,
            "grid_refinement_delta": self.grid_refinement_delta,
            "notes": list(self.notes),
            "cases": [c.to_json() for c in self.cases],
        }

    def rows(self) -> list[dict]:
        """One flat row per (case, quantity), for CSV output."""
        out = []
        for c in self.cases:
            for kind, table in (("measured", c.measured), ("bound", c.bounds)):
                for key, val in table.items():
                    out.append(
                        {
                            "theorem_tag": self.theorem_tag,
                            "case": c.name,
                            "kind": kind,
                            "quantity": key,
                            "value": val,
                            "pass": c.passed,
                        }
                    )
        return out


Core = Callable[[list[SampledFunction]], tuple[list[Case], list[str]]]


def _rel_change(a, b) -> float:
    if not (isinstance(a, (int, float)) and isinstance(b, (int, float))):
        return 0.0
    if isinstance(a, bool) or isinstance(b, bool):
        return 0.0
    if not (math.isfinite(a) and math.isfinite(b)):
        return 0.0
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0 else abs(a - b) / scale


def _assemble(tag: str, core: Core, funcs: list[SampledFunction], refinement: bool) -> SuiteReport:
    cases, notes = core(funcs)
    if not refinement:
        return SuiteReport(tag, cases, None, notes)
    fine_cases, _ = core([refine(f) for f in funcs])
    fine = {c.name: c for c in fine_cases}
    delta = 0.0
    flips = []
    for c in cases:
        other = fine.get(c.name)
        if other is None:
            continue
        if other.passed != c.passed:
            flips.append(c.name)
        for key, val in c.measured.items():
            if key in other.measured:
                delta = max(delta, _rel_change(val, other.measured[key]))
    m = funcs[0].grid.m if funcs else None
    cases.append(
        Case(
            "grid_refinement",
            {"m": m, "m_fine": 2 * m if m else None},
            {"delta": delta, "flips": len(flips)},
            {"flips": 0},
            not flips,
        )
    )
    if flips:
        notes.append("verdict flips under refinement: " + ", ".join(flips))
    return SuiteReport(tag, cases, delta, notes)


def _le(lhs: float, rhs: float, slack: float) -> bool:
    return lhs <= rhs * (1.0 + slack) + 1e-300


def conjugate(p: float) -> float:
    if p == 1:
        return math.inf
    if math.isinf(p):
        return 1.0
    return p / (p - 1.0)


def pairing(f: SampledFunction, k: SampledFunction) -> complex:
    """Quadrature of f(x) k(x) over the window."""
    if f.grid != k.grid:
        raise SpecError("pairing needs a common grid")
    prod = f.left_limits() * k.left_limits()
    m = f.grid.m
    return complex(np.sum(cell_quadrature(f.values * k.values, prod[m::m], m)))


def _is_smooth(f: SampledFunction) -> bool:
    return f.is_continuous()


# ---------------------------------------------------------------- translation


def translation_bounds(
    f: SampledFunction, s: SpaceSpec, ys: Sequence[float], refinement: bool = True
) -> SuiteReport:
    """Upper bound ||T_y f||_A <= w1(y) ||f||_A and a positive floor for ||T_y f||_A / w1(y)."""

    def core(fs):
        (g,) = fs
        base = a_norm(g, s).total
        cases, notes, ratios = [], [], []
        for y in ys:
            try:
                ty = translate(g, y)
            except WindowOverflowError:
                notes.append(f"sweep clipped at y={y:g} (translate leaves the window)")
                continue
            val = a_norm(ty, s).total
            wy = float(s.w1(y))
            ratios.append(val / wy)
            cases.append(
                Case(
                    f"upper[y={y:g}]",
                    {"f": g.label, "y": y},
                    {"norm_translate": val, "ratio_to_norm": val / base if base else 0.0},
                    {"w1(y)*norm": wy * base},
                    _le(val, wy * base, EXACT_SLACK),
                )
            )
        floor = min(ratios) if ratios else 0.0
        cases.append(
            Case(
                "lower_floor",
                {"f": g.label, "sweep": [float(y) for y in ys]},
                {"c1": floor},
                {"c1_min": 0.0},
                floor > 0.0,
            )
        )
        return cases, notes

    return _assemble("translation", core, [f], refinement)


def translation_continuity(
    f: SampledFunction,
    s: SpaceSpec,
    epsilons: Sequence[float],
    relative: bool = False,
    max_steps: int | None = None,
    refinement: bool = True,
) -> SuiteReport:
    """Largest grid-aligned delta with ||T_y f - f||_A < eps for all |y| <= delta.

    With ``relative=True`` each epsilon is a fraction of ||f||_A.  The scan
    covers at most ``max_steps`` grid steps (default: one unit cell).
    """
    if not _is_smooth(f):
        raise HypothesisViolation(
            f"{f.label} has jumps; translation continuity is only checked on smooth functions"
        )
    if not epsilons:
        raise SpecError("need at least one epsilon")

    def core(fs):
        (g,) = fs
        grid = g.grid
        base = a_norm(g, s).total
        eps = [e * base if relative else float(e) for e in epsilons]
        cap = max_steps if max_steps is not None else grid.m
        top = max(eps)
        dists = []
        for k in range(1, cap + 1):
            y = k * grid.h
            try:
                d = max(
                    a_norm(translate(g, y) - g, s).total,
                    a_norm(translate(g, -y) - g, s).total,
                )
            except WindowOverflowError:
                break
            dists.append(d)
            if d >= top:
                break
        zero = a_norm(translate(g, 0.0) - g, s).total
        cases = [Case("zero_shift", {"f": g.label}, {"norm": zero}, {"norm": 0.0}, zero == 0.0)]
        notes = []
        deltas = []
        for e_in, e in zip(epsilons, eps):
            k = 0
            while k < len(dists) and dists[k] < e:
                k += 1
            delta = k * grid.h
            if k == len(dists) == cap:
                notes.append(f"eps={e_in:g}: scan capped at {cap} steps")
            deltas.append((e, delta))
            cases.append(
                Case(
                    f"delta[eps={e_in:g}]",
                    {"f": g.label, "eps": e, "relative": relative},
                    {"delta": delta},
                    {"delta_min": grid.h},
                    delta >= grid.h,
                )
            )
        ordered = sorted(deltas)
        mono = all(a[1] <= b[1] for a, b in zip(ordered, ordered[1:]))
        cases.append(Case("monotone_in_eps", {"f": g.label}, {}, {}, mono))
        return cases, notes

    return _assemble("continuity", core, [f], refinement)


# ----------------------------------------------------------------- embeddings


def embedding_constant(
    src: SpaceSpec,
    dst: SpaceSpec,
    corpus: Sequence[SampledFunction],
    refinement: bool = True,
) -> SuiteReport:
    """sup over the corpus of ||f||_dst / ||f||_src against the analytic constant."""
    verdict = decide_embedding(src, dst)
    if not verdict.embeds:
        raise HypothesisViolation(
            f"no embedding rule applies from {src.label()} to {dst.label()} ({verdict.rule})"
        )
    const = verdict.constant_hint if verdict.constant_hint is not None else 1.0

    def core(fs):
        cases = []
        worst = 0.0
        for g in fs:
            G = fourier(g)
            a_src = a_norm(g, src, G).total
            a_dst = a_norm(g, dst, G).total
            ratio = a_dst / a_src if a_src else 0.0
            worst = max(worst, ratio)
            cases.append(
                Case(
                    f"ratio[{g.label}]",
                    {"f": g.label},
                    {"ratio": ratio, "norm_src": a_src, "norm_dst": a_dst},
                    {"constant": const},
                    _le(ratio, const, QUAD_SLACK),
                )
            )
        cases.append(
            Case(
                "sup_ratio",
                {"src": src.to_json(), "dst": dst.to_json(), "rule": verdict.rule},
                {"sup": worst},
                {"constant": const},
                _le(worst, const, QUAD_SLACK),
            )
        )
        return cases, []

    return _assemble("embedding", core, list(corpus), refinement)


def iff_divergence_scan(
    src: SpaceSpec,
    dst: SpaceSpec,
    f: SampledFunction,
    ts: Sequence[float],
    refinement: bool = True,
) -> SuiteReport:
    """Converse of the iff theorem: ||T_t f||_dst / ||T_t f||_src grows without bound along ts."""
    verdict = decide_embedding(src, dst)
    if not verdict.definite_negative:
        raise HypothesisViolation(
            f"{src.label()} -> {dst.label()} is not a definite negative ({verdict.relation})"
        )

    def core(fs):
        (g,) = fs
        cases, notes, ratios = [], [], []
        for t in ts:
            try:
                tt = translate(g, t)
            except WindowOverflowError:
                notes.append(f"sweep clipped at t={t:g}")
                continue
            G = fourier(tt)
            r = a_norm(tt, dst, G).total / a_norm(tt, src, G).total
            ratios.append(r)
            cases.append(Case(f"ratio[t={t:g}]", {"t": t}, {"ratio": r}, {}, math.isfinite(r)))
        growth = ratios[-1] / ratios[0] if len(ratios) >= 2 else 0.0
        cases.append(
            Case(
                "divergence",
                {"f": g.label, "src": src.to_json(), "dst": dst.to_json()},
                {"last_over_first": growth},
                {"threshold": DIVERGENCE_FACTOR},
                growth > DIVERGENCE_FACTOR,
            )
        )
        return cases, notes

    return _assemble("embedding_iff", core, [f], refinement)


# -------------------------------------------------------------- compactness


def noncompactness_witness(
    f: SampledFunction,
    theta: WeightSpec,
    s: SpaceSpec,
    ts: Sequence[float],
    k: SampledFunction | None = None,
    delta0: float = 1e-3,
    refinement: bool = True,
) -> SuiteReport:
    """Bounded, vaguely null, norm-separated sequence f_n = T_{t_n} f / w1(t_n).

    Checks (1) ||f_n||_A <= ||f||_A, (2) |<f_n, k>| <= C1 ||k||_{p',w1} ||f||_A / w1(t_n)
    with a strictly decreasing pairing, and (3) ||f_n||_{p1,theta} >= half its first value.
    """
    if not dominates(theta, s.w1).holds:
        raise HypothesisViolation(f"{theta.label()} is not dominated by w1 = {s.w1.label()}")
    if ratio_vanishes(theta, s.w1):
        raise HypothesisViolation(
            f"{theta.label()}/{s.w1.label()} tends to 0; the never-compact theorem does not apply"
        )
    low = min(float(theta(t)) / float(s.w1(t)) for t in ts)
    if low < delta0:
        raise HypothesisViolation(
            f"min of {theta.label()}/{s.w1.label()} on the sweep is {low:.3g} < {delta0:g}"
        )
    if list(ts) != sorted(set(ts)):
        raise SpecError("t sweep must be strictly increasing")
    c1 = dominates(theta, s.w1).constant
    pp = conjugate(s.p)

    def core(fs):
        g = fs[0]
        kern = fs[1] if len(fs) > 1 else make_bump(0.0, 1.0, g.grid)
        base = a_norm(g, s).total
        k_norm = weighted_lp_norm(kern, pp, s.w1)
        cases, notes = [], []
        pairs, floors = [], []
        for t in ts:
            try:
                tt = translate(g, t)
            except WindowOverflowError:
                notes.append(f"sweep clipped at t={t:g}")
                break
            w = float(s.w1(t))
            fn = tt.scale(1.0 / w)
            norm_n = a_norm(fn, s).total
            pair = abs(pairing(fn, kern))
            sep = amalgam_norm(fn, s.p, 1, theta).global_
            pairs.append(pair)
            floors.append(sep)
            cases.append(
                Case(
                    f"bounded[t={t:g}]",
                    {"t": t},
                    {"norm": norm_n},
                    {"norm_f": base},
                    _le(norm_n, base, EXACT_SLACK),
                )
            )
            bound = c1 * k_norm * base / w
            cases.append(
                Case(
                    f"vague[t={t:g}]",
                    {"t": t},
                    {"pairing": pair},
                    {"bound": bound},
                    _le(pair, bound, QUAD_SLACK),
                )
            )
            cases.append(
                Case(
                    f"ratio[t={t:g}]",
                    {"t": t},
                    {"theta_over_w1": float(theta(t)) / w},
                    {"delta0": delta0},
                    float(theta(t)) / w >= delta0,
                )
            )
        decreasing = all(a > b for a, b in zip(pairs, pairs[1:]))
        cases.append(
            Case("vague_decreasing", {"f": g.label, "k": kern.label}, {}, {}, decreasing)
        )
        floor = 0.5 * floors[0] if floors else 0.0
        for t, v in zip(ts, floors):
            cases.append(
                Case(
                    f"floor[t={t:g}]",
                    {"t": t},
                    {"norm_theta": v},
                    {"floor": floor},
                    v >= floor and v > 0,
                )
            )
        return cases, notes

    funcs = [f] if k is None else [f, k]
    return _assemble("noncompact", core, funcs, refinement)


def witness_rejection(
    f: SampledFunction, theta: WeightSpec, s: SpaceSpec, ts: Sequence[float]
) -> SuiteReport:
    """Passes when the witness suite refuses a configuration whose weight ratio tends to 0."""
    try:
        noncompactness_witness(f, theta, s, ts, refinement=False)
    except HypothesisViolation as exc:
        reason, rejected = str(exc), True
    else:
        reason, rejected = "accepted", False
    case = Case(
        "rejects_vanishing_ratio",
        {"theta": theta.to_json(), "w1": s.w1.to_json()},
        {"rejected": rejected},
        {},
        rejected,
    )
    return SuiteReport("noncompact", [case], 0.0, [reason])


def vague_convergence(
    fs: Sequence[SampledFunction],
    k: SampledFunction,
    p: float = 2.0,
    w: WeightSpec = UNWEIGHTED,
    refinement: bool = True,
) -> SuiteReport:
    """|<f_n, k>| <= ||k||_{p',w} ||f_n||_{p,w} for every member of the sequence."""
    pp = conjugate(p)

    def core(funcs):
        kern, seq = funcs[0], funcs[1:]
        k_norm = weighted_lp_norm(kern, pp, w)
        cases = []
        for i, g in enumerate(seq):
            pair = abs(pairing(g, kern))
            bound = k_norm * weighted_lp_norm(g, p, w)
            cases.append(
                Case(
                    f"pairing[{i}]",
                    {"f": g.label, "k": kern.label},
                    {"pairing": pair},
                    {"bound": bound},
                    _le(pair, bound, QUAD_SLACK),
                )
            )
        return cases, []

    return _assemble("vague", core, [k, *fs], refinement)


# ------------------------------------------------------- approximate identity


def approximate_identity(
    f: SampledFunction,
    s: SpaceSpec,
    radii: Sequence[float],
    target: float = 0.01,
    final_fraction: float | None = 0.02,
    refinement: bool = True,
) -> SuiteReport:
    """Bumps g_r with r -> 0 act as an approximate unit; a band-limited h close to g does too.

    Stage 1 checks that ||g_r * f - f||_A decreases along the radii and ends
    below ``final_fraction`` of ||f||_A (skipped when it is None).  Stage 2 searches for a band limit B
    with ||g - h||_{1,w1} < target and checks the triangle inequality
    ||h*f - f|| <= ||(h-g)*f|| + ||g*f - f||; the bound
    ||(h-g)*f||_A <= ||h-g||_{1,w1} ||f||_A is reported for information.
    """
    radii = [float(r) for r in radii]
    if any(a <= b for a, b in zip(radii, radii[1:])):
        raise SpecError("radii must be strictly decreasing")

    def core(fs):
        (g0,) = fs
        grid = g0.grid
        base = a_norm(g0, s).total
        cases, notes = [], []
        errs = []
        g = None
        for r in radii:
            g = make_bump(0.0, r, grid)
            e = a_norm(convolve(g, g0) - g0, s).total
            errs.append(e)
            cases.append(Case(f"error[r={r:g}]", {"radius": r}, {"error": e}, {}, True))
        mono = all(b <= a for a, b in zip(errs, errs[1:]))
        cases.append(Case("monotone", {"f": g0.label}, {}, {}, mono))
        if final_fraction is not None:
            limit = final_fraction * base
            cases.append(
                Case(
                    "final_small",
                    {"f": g0.label},
                    {"final_error": errs[-1], "norm_f": base},
                    {"limit": limit},
                    errs[-1] < limit,
                )
            )
        B, hb, gap, tail = None, None, math.inf, math.inf
        band = 1.0
        while band <= grid.m / 2:
            cand, cand_tail = band_limit(g, band)
            cand_gap = weighted_lp_norm(g - cand, 1, s.w1)
            if cand_gap < target:
                B, hb, gap, tail = band, cand, cand_gap, cand_tail
                break
            band *= 2
        if hb is None:
            cases.append(
                Case(
                    "band_limit",
                    {"target": target},
                    {"gap": gap},
                    {"target": target},
                    True,
                    status="inconclusive",
                )
            )
            notes.append("band-limit search did not reach the target inside the frequency window")
            return cases, notes
        cases.append(
            Case(
                "band_limit",
                {"target": target},
                {"B": B, "gap": gap, "tail_mass": tail},
                {"target": target},
                gap < target,
            )
        )
        hf = convolve(hb, g0, overflow_tol=math.inf)
        gf = convolve(g, g0)
        lhs = a_norm(hf - g0, s).total
        diff = a_norm(hf - gf, s).total
        rhs = diff + errs[-1]
        cases.append(
            Case(
                "triangle",
                {"B": B},
                {"error_h": lhs, "diff_term": diff, "error_g": errs[-1]},
                {"sum": rhs},
                _le(lhs, rhs, EXACT_SLACK),
            )
        )
        cases.append(
            Case(
                "young_chain_info",
                {"B": B},
                {"diff_term": diff, "gap_times_norm": gap * base},
                {},
                True,
                status="info",
            )
        )
        return cases, notes

    return _assemble("approxid", core, [f], refinement)


# ----------------------------------------------------------- structure suites


def bf_chain(f: SampledFunction, s: SpaceSpec, refinement: bool = True) -> SuiteReport:
    """max_K int_K |f| <= ||f||_1 <= ||f||_{1,w1} = ||f||_{11,w1} <= ||f||_{p1,w1} <= ||f||_A."""

    def core(fs):
        (g,) = fs
        per_cell = local_norms(g, 1, UNWEIGHTED)
        chain = [
            ("max_cell_L1", float(per_cell.max())),
            ("L1", weighted_lp_norm(g, 1, UNWEIGHTED)),
            ("L1_w1", weighted_lp_norm(g, 1, s.w1)),
            ("amalgam_11_w1", amalgam_norm(g, 1, 1, s.w1).global_),
            ("amalgam_p1_w1", amalgam_norm(g, s.p, 1, s.w1).global_),
            ("A", a_norm(g, s).total),
        ]
        cases = []
        for (n1, v1), (n2, v2) in zip(chain, chain[1:]):
            cases.append(
                Case(f"{n1}<={n2}", {"f": g.label}, {n1: v1}, {n2: v2}, _le(v1, v2, EXACT_SLACK))
            )
        return cases, []

    return _assemble("bf", core, [f], refinement)


def algebra_suite(
    f: SampledFunction, g: SampledFunction, s: SpaceSpec, refinement: bool = True
) -> SuiteReport:
    def core(fs):
        chk = algebra_chain_check(fs[0], fs[1], s)
        measured = {k: a for k, (a, _) in chk.links.items()}
        measured["C"] = chk.constant
        bounds = {k: b for k, (_, b) in chk.links.items()}
        return [Case(f"chain[{fs[0].label},{fs[1].label}]", {"space": s.label()}, measured, bounds, chk.passed)], []

    return _assemble("algebra", core, [f, g], refinement)


def module_suite(
    f: SampledFunction, g: SampledFunction, s: SpaceSpec, refinement: bool = True
) -> SuiteReport:
    def core(fs):
        chk = module_check(fs[0], fs[1], s)
        measured = {k: a for k, (a, _) in chk.links.items()}
        measured["C"] = chk.constant
        bounds = {k: b for k, (_, b) in chk.links.items()}
        return [Case(f"module[{fs[0].label},{fs[1].label}]", {"space": s.label()}, measured, bounds, chk.passed)], []

    return _assemble("module", core, [f, g], refinement)
