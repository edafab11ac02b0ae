"""Symbolic verdicts on embeddings between spaces A^{p,1,q,r}_{w1,w2}.

The engine only answers when the hypotheses of a known theorem hold
verbatim on the weight growth orders and exponents.  ``no_rule`` is a
normal outcome, not an error.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import UndecidableError
from .space_a import SpaceSpec
from .weights import WeightSpec, dominance_constant, dominates, ratio_vanishes

__all__ = ["Verdict", "decide_embedding", "decide_compactness", "RELATIONS"]

RELATIONS = ("embeds", "equal", "never_compact_embedding", "no_rule")
IFF_NEGATIVE = "embedding fails by iff theorem"
NO_COMPACTNESS_NOTE = "no compactness result is available for this configuration"


@dataclass(frozen=True)
class Verdict:
    relation: str
    rule: str
    trace: tuple[tuple[str, bool], ...]
    constant_hint: float | None = None
    definite_negative: bool = False
    notes: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if self.relation not in RELATIONS:
            raise ValueError(f"unknown relation {self.relation!r}")

    @property
    def embeds(self) -> bool:
        return self.relation in ("embeds", "equal")

    def to_json(self) -> dict:
        out = {
            "relation": self.relation,
            "rule": self.rule,
            "trace": [{"hypothesis": h, "holds": ok} for h, ok in self.trace],
            "constant_hint": self.constant_hint,
            "definite_negative": self.definite_negative,
        }
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def _require_closed_form(*ws: WeightSpec | None) -> None:
    for w in ws:
        if w is not None and w.growth() is None:
            raise UndecidableError(
                f"weight {w.label()} has no closed-form growth order; "
                "probe-based dominance is not authoritative"
            )


def _prec(a: WeightSpec, b: WeightSpec) -> bool:
    return dominates(a, b).holds


def _equiv(a: WeightSpec, b: WeightSpec) -> bool:
    return a.growth() == b.growth()


def _first_failure(trace: list[tuple[str, bool]]) -> list[tuple[str, bool]]:
    for h, ok in trace:
        if not ok:
            return [(h, ok)]
    return []


def decide_embedding(src: SpaceSpec, dst: SpaceSpec) -> Verdict:
    """Does A(src) embed continuously into A(dst)?"""
    _require_closed_form(src.w1, src.w2, dst.w1, dst.w2)
    w1_dom = _prec(dst.w1, src.w1)
    w2_dom = _prec(dst.w2, src.w2)
    hint = None
    if w1_dom and w2_dom:
        hint = max(dominance_constant(dst.w1, src.w1), dominance_constant(dst.w2, src.w2))

    same_exp = (src.p, src.q, src.r) == (dst.p, dst.q, dst.r)
    eq_trace = [
        ("p_dst = p_src, q_dst = q_src, r_dst = r_src", same_exp),
        ("w1_dst ~ w1_src", _equiv(dst.w1, src.w1)),
        ("w2_dst ~ w2_src", _equiv(dst.w2, src.w2)),
    ]
    if all(ok for _, ok in eq_trace):
        return Verdict("equal", "Corollary(i)", tuple(eq_trace), hint)

    gen_trace = [
        ("p_dst <= p_src", dst.p <= src.p),
        ("q_dst <= q_src", dst.q <= src.q),
        ("r_src <= r_dst", src.r <= dst.r),
        ("w1_dst < w1_src", w1_dom),
        ("w2_dst < w2_src", w2_dom),
    ]
    if all(ok for _, ok in gen_trace):
        rule, notes = _tightest_tag(src, dst)
        return Verdict("embeds", rule, tuple(gen_trace), hint, notes=notes)

    iff_trace = [
        ("q_dst = q_src, r_dst = r_src", src.q == dst.q and src.r == dst.r),
        ("w2_dst = w2_src", src.w2 == dst.w2 or _equiv(src.w2, dst.w2)),
        ("w1_dst not < w1_src", not w1_dom),
    ]
    if all(ok for _, ok in iff_trace):
        return Verdict(
            "no_rule", IFF_NEGATIVE, tuple(iff_trace), None, definite_negative=True
        )
    return Verdict("no_rule", "none", tuple(_first_failure(gen_trace)))


def _tightest_tag(src: SpaceSpec, dst: SpaceSpec) -> tuple[str, tuple[str, ...]]:
    same_w1 = src.w1 == dst.w1
    same_w2 = src.w2 == dst.w2
    if same_w1 and same_w2:
        if src.q == dst.q:
            return "Theorem-true(i)", ()
        if src.r == dst.r:
            return "Theorem-true(iii)", ()
        note = (
            "the printed conclusion of Corollary(ii) keeps p1 on the target side while "
            "assuming p2 <= p1; it is applied only when p_dst = p_src"
        )
        if src.p == dst.p:
            return "Corollary(ii)", (note,)
        return "Corollary(iii)", (note,)
    if (src.p, src.q, src.r) == (dst.p, dst.q, dst.r):
        return "Theorem-true(ii)", ()
    if src.p == dst.p and same_w2:
        return "Theorem-true(iv)", ()
    return "Corollary(iii)", ()


def decide_compactness(
    src: SpaceSpec, w3: WeightSpec, w4: WeightSpec | None = None
) -> Verdict:
    """Never-compactness of A(src) into (L^p_{w3}, l^1), or into A_{w3,w4} when w4 is given."""
    _require_closed_form(src.w1, src.w2, w3, w4)
    w1, w2 = src.w1, src.w2

    def keeps(a, b):
        return ratio_vanishes(a, b) is False

    if w4 is None:
        rules = [
            (
                "Theorem-tendtozero",
                [("w3 < w1", _prec(w3, w1)), ("w3/w1 does not tend to 0", keeps(w3, w1))],
            ),
            (
                "Theorem-tendtozero-variant",
                [
                    ("w1 < w2", _prec(w1, w2)),
                    ("w3 < w2", _prec(w3, w2)),
                    ("w3/w2 does not tend to 0", keeps(w3, w2)),
                ],
            ),
        ]
    else:
        rules = [
            (
                "Theorem-nevercompact-A",
                [
                    ("w4 = w2", w4 == w2 or _equiv(w4, w2)),
                    ("w3 < w1", _prec(w3, w1)),
                    ("w3/w1 does not tend to 0", keeps(w3, w1)),
                ],
            ),
            (
                "Theorem-nevercompact-final(i)",
                [
                    ("w4 < w2", _prec(w4, w2)),
                    ("w2 < w1", _prec(w2, w1)),
                    ("w3 < w1", _prec(w3, w1)),
                    ("w3/w1 does not tend to 0", keeps(w3, w1)),
                ],
            ),
            (
                "Theorem-nevercompact-final(ii)",
                [
                    ("w3 < w1", _prec(w3, w1)),
                    ("w1 < w2", _prec(w1, w2)),
                    ("w4 < w2", _prec(w4, w2)),
                    ("w3/w2 does not tend to 0", keeps(w3, w2)),
                ],
            ),
        ]
    for rule, trace in rules:
        if all(ok for _, ok in trace):
            return Verdict("never_compact_embedding", rule, tuple(trace))
    return Verdict(
        "no_rule", "none", tuple(_first_failure(rules[0][1])), notes=(NO_COMPACTNESS_NOTE,)
    )
