"""Beurling weights on the real line.

A weight here is an even (for the built-in families), measurable function
w >= 1 with w(x + y) <= w(x) w(y).  Four families are provided:

* ``Polynomial(s)``   -- (1 + |x|)^s
* ``Exponential(a)``  -- exp(a |x|)
* ``Product(...)``    -- pointwise product of other weights
* ``Tabulated(x, v)`` -- linear interpolation of tabulated values

Polynomial, exponential and products thereof have a closed-form growth
order ``(a, s)`` meaning w(x) ~ exp(a|x|) (1+|x|)^s.  The dominance
relation and the Beurling-Domar condition are decided exactly on that
order; tabulated weights fall back to a probe-based semi-decision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import InvalidWeightError, OutOfDomainError, SpecError

SUBMULT_SLACK = 1e-12
DEFAULT_CEILING = 1e6

__all__ = [
    "WeightSpec",
    "Polynomial",
    "Exponential",
    "Product",
    "Tabulated",
    "DominanceVerdict",
    "BDResult",
    "poly",
    "check_submultiplicative",
    "dominates",
    "dominance_constant",
    "equivalent",
    "ratio_vanishes",
    "bd_condition",
    "weight_from_json",
    "parse_weight",
    "default_probes",
]


class WeightSpec:
    """Common interface of every weight family."""

    family: str = "abstract"

    def __call__(self, x):
        raise NotImplementedError

    def log(self, x):
        """log w(x), computed without forming w(x) where the family allows."""
        return np.log(self(x))

    def growth(self) -> tuple[float, float] | None:
        """Return ``(a, s)`` with w(x) = exp(a|x|)(1+|x|)^s, or None if not closed form."""
        return None

    def to_json(self) -> dict:
        raise NotImplementedError

    def label(self) -> str:
        return self.family

    def _validate(self) -> None:
        xs, ys = _validation_probes(self)
        vals = np.asarray(self(np.concatenate([xs, ys, xs + ys])), dtype=float)
        if not np.all(np.isfinite(vals)):
            raise InvalidWeightError(f"{self.label()}: non-finite values")
        if np.min(vals) < 1.0:
            raise InvalidWeightError(f"{self.label()}: weight takes values below 1")
        ratio = check_submultiplicative(self, list(zip(xs, ys)))["max_ratio"]
        if ratio > 1.0 + SUBMULT_SLACK:
            raise InvalidWeightError(
                f"{self.label()}: not submultiplicative (max ratio {ratio:.6g})"
            )


@dataclass(frozen=True)
class Polynomial(WeightSpec):
    s: float
    family: str = field(default="polynomial", init=False, repr=False)

    def __post_init__(self):
        if not (math.isfinite(self.s) and self.s >= 0):
            raise InvalidWeightError(f"polynomial weight needs s >= 0, got {self.s}")
        object.__setattr__(self, "s", float(self.s))
        self._validate()

    def __call__(self, x):
        return (1.0 + np.abs(x)) ** self.s

    def log(self, x):
        return self.s * np.log1p(np.abs(x))

    def growth(self):
        return (0.0, self.s)

    def to_json(self):
        return {"family": "polynomial", "s": self.s}

    def label(self):
        return f"poly({self.s:g})"


@dataclass(frozen=True)
class Exponential(WeightSpec):
    a: float
    family: str = field(default="exponential", init=False, repr=False)

    def __post_init__(self):
        if not (math.isfinite(self.a) and self.a >= 0):
            raise InvalidWeightError(f"exponential weight needs a >= 0, got {self.a}")
        object.__setattr__(self, "a", float(self.a))
        self._validate()

    def __call__(self, x):
        return np.exp(self.a * np.abs(x))

    def log(self, x):
        return self.a * np.abs(x)

    def growth(self):
        return (self.a, 0.0)

    def to_json(self):
        return {"family": "exponential", "a": self.a}

    def label(self):
        return f"exp({self.a:g})"


@dataclass(frozen=True)
class Product(WeightSpec):
    factors: tuple[WeightSpec, ...]
    family: str = field(default="product", init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise InvalidWeightError("product weight needs at least one factor")
        self._validate()

    def __call__(self, x):
        out = np.ones_like(np.asarray(x, dtype=float))
        for w in self.factors:
            out = out * w(x)
        return out

    def log(self, x):
        out = np.zeros_like(np.asarray(x, dtype=float))
        for w in self.factors:
            out = out + w.log(x)
        return out

    def growth(self):
        orders = [w.growth() for w in self.factors]
        if any(o is None for o in orders):
            return None
        return (sum(o[0] for o in orders), sum(o[1] for o in orders))

    def to_json(self):
        return {"family": "product", "factors": [w.to_json() for w in self.factors]}

    def label(self):
        return "*".join(w.label() for w in self.factors)


@dataclass(frozen=True)
class Tabulated(WeightSpec):
    """Piecewise-linear weight on a finite grid; evaluation outside the grid is an error."""

    x: tuple[float, ...]
    v: tuple[float, ...]
    family: str = field(default="tabulated", init=False, repr=False)

    def __post_init__(self):
        xs = tuple(float(t) for t in self.x)
        vs = tuple(float(t) for t in self.v)
        if len(xs) != len(vs) or len(xs) < 2:
            raise SpecError("tabulated weight needs matching x and v with >= 2 points")
        if np.any(np.diff(xs) <= 0):
            raise SpecError("tabulated weight grid must be strictly increasing")
        object.__setattr__(self, "x", xs)
        object.__setattr__(self, "v", vs)
        if min(vs) < 1.0:
            raise InvalidWeightError("tabulated weight takes values below 1")
        self._validate()

    def __call__(self, x):
        arr = np.asarray(x, dtype=float)
        if arr.size and (arr.min() < self.x[0] or arr.max() > self.x[-1]):
            raise OutOfDomainError(
                f"tabulated weight defined on [{self.x[0]}, {self.x[-1]}], "
                f"queried at [{arr.min()}, {arr.max()}]"
            )
        out = np.interp(arr, self.x, self.v)
        return out if arr.ndim else float(out)

    def to_json(self):
        return {"family": "tabulated", "x": list(self.x), "v": list(self.v)}

    def label(self):
        return f"tab[{self.x[0]:g},{self.x[-1]:g}]"

    @property
    def domain(self) -> tuple[float, float]:
        return self.x[0], self.x[-1]


def poly(s: float) -> Polynomial:
    """The polynomial weight (1 + |x|)^s."""
    return Polynomial(s)


def _validation_probes(w: WeightSpec, n: int = 512) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(20240611)
    if isinstance(w, Tabulated) or (
        isinstance(w, Product) and any(_has_table(f) for f in w.factors)
    ):
        lo, hi = _table_domain(w)
        xs = rng.uniform(lo, hi, size=n)
        ys = rng.uniform(lo, hi, size=n)
        keep = (xs + ys >= lo) & (xs + ys <= hi)
        xs, ys = xs[keep], ys[keep]
        # include the grid nodes themselves paired with 0 when 0 is in range
        if lo <= 0.0 <= hi:
            nodes = np.asarray(_table_nodes(w))
            xs = np.concatenate([xs, nodes])
            ys = np.concatenate([ys, np.zeros_like(nodes)])
        return xs, ys
    xs = rng.uniform(-50.0, 50.0, size=n)
    ys = rng.uniform(-50.0, 50.0, size=n)
    return xs, ys


def _has_table(w: WeightSpec) -> bool:
    if isinstance(w, Tabulated):
        return True
    if isinstance(w, Product):
        return any(_has_table(f) for f in w.factors)
    return False


def _table_domain(w: WeightSpec) -> tuple[float, float]:
    if isinstance(w, Tabulated):
        return w.domain
    lo, hi = -math.inf, math.inf
    for f in getattr(w, "factors", ()):
        if _has_table(f):
            a, b = _table_domain(f)
            lo, hi = max(lo, a), min(hi, b)
    return lo, hi


def _table_nodes(w: WeightSpec) -> list[float]:
    if isinstance(w, Tabulated):
        return list(w.x)
    lo, hi = _table_domain(w)
    nodes: list[float] = []
    for f in getattr(w, "factors", ()):
        if _has_table(f):
            nodes.extend(t for t in _table_nodes(f) if lo <= t <= hi)
    return nodes


def default_probes(w1: WeightSpec | None = None, w2: WeightSpec | None = None) -> np.ndarray:
    """Probe set spanning [-1e3, 1e3], clipped to any tabulated domain involved."""
    lo, hi = -1e3, 1e3
    for w in (w1, w2):
        if w is not None and _has_table(w):
            a, b = _table_domain(w)
            lo, hi = max(lo, a), min(hi, b)
    return np.linspace(lo, hi, 4001)


def check_submultiplicative(w: WeightSpec, probes: Sequence[tuple[float, float]]) -> dict:
    """max over probes of w(x+y) / (w(x) w(y)), computed in log space."""
    if len(probes) == 0:
        raise SpecError("probe list must be nonempty")
    pr = np.asarray(probes, dtype=float)
    xs, ys = pr[:, 0], pr[:, 1]
    log_ratio = w.log(xs + ys) - w.log(xs) - w.log(ys)
    max_ratio = float(np.exp(np.max(log_ratio)))
    return {"max_ratio": max_ratio, "pass": max_ratio <= 1.0 + SUBMULT_SLACK}


@dataclass(frozen=True)
class DominanceVerdict:
    holds: bool
    constant: float
    witness: float
    probe_count: int
    exact: bool = False

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "constant": self.constant,
            "witness": self.witness,
            "probe_count": self.probe_count,
            "exact": self.exact,
        }


def _growth_leq(g1: tuple[float, float], g2: tuple[float, float]) -> bool:
    a1, s1 = g1
    a2, s2 = g2
    return a1 < a2 or (a1 == a2 and s1 <= s2)


def dominance_constant(w1: WeightSpec, w2: WeightSpec) -> float:
    """Exact sup_x w1(x)/w2(x) for closed-form families (inf when unbounded).

    With d_s = s1 - s2 and d_a = a2 - a1 the ratio on x >= 0 is
    (1+x)^{d_s} exp(-d_a x); both weights equal 1 at the origin.
    """
    g1, g2 = w1.growth(), w2.growth()
    if g1 is None or g2 is None:
        raise SpecError("dominance_constant needs closed-form weight families")
    ds = g1[1] - g2[1]
    da = g2[0] - g1[0]
    if da < 0 or (da == 0 and ds > 0):
        return math.inf
    if ds <= 0:
        return 1.0
    peak = ds / da  # location of the maximum of (1+x)^ds e^{-da x} in the variable 1+x
    if peak <= 1.0:
        return 1.0
    return math.exp(ds * math.log(peak) - (ds - da))


def dominates(
    w1: WeightSpec,
    w2: WeightSpec,
    probes: Sequence[float] | None = None,
    ceiling: float = DEFAULT_CEILING,
    exact: bool | None = None,
) -> DominanceVerdict:
    """Test w1 < w2, i.e. w1 <= C w2 everywhere.

    ``exact=None`` uses the analytic path whenever both weights have a
    closed-form growth order; ``exact=False`` forces the probe path.
    """
    if ceiling <= 1:
        raise SpecError("ceiling must exceed 1")
    pr = default_probes(w1, w2) if probes is None else np.asarray(probes, dtype=float)
    if pr.size == 0:
        raise SpecError("probe list must be nonempty")
    log_ratio = w1.log(pr) - w2.log(pr)
    i = int(np.argmax(log_ratio))
    top = float(log_ratio[i])
    sup_probe = math.exp(top) if top <= math.log(ceiling) else math.inf
    g1, g2 = w1.growth(), w2.growth()
    use_exact = (g1 is not None and g2 is not None) if exact is None else exact
    if use_exact:
        if g1 is None or g2 is None:
            raise SpecError("exact dominance needs closed-form weight families")
        holds = _growth_leq(g1, g2)
        const = dominance_constant(w1, w2) if holds else math.inf
        return DominanceVerdict(holds, const, float(pr[i]), int(pr.size), exact=True)
    holds = math.isfinite(sup_probe)
    return DominanceVerdict(holds, sup_probe, float(pr[i]), int(pr.size))


def equivalent(
    w1: WeightSpec,
    w2: WeightSpec,
    probes: Sequence[float] | None = None,
    ceiling: float = DEFAULT_CEILING,
) -> bool:
    return (
        dominates(w1, w2, probes, ceiling).holds and dominates(w2, w1, probes, ceiling).holds
    )


def ratio_vanishes(w: WeightSpec, w1: WeightSpec) -> bool | None:
    """Whether w(x)/w1(x) -> 0 as |x| -> inf; None when not decidable in closed form."""
    g, g1 = w.growth(), w1.growth()
    if g is None or g1 is None:
        return None
    a, s = g
    a1, s1 = g1
    return a < a1 or (a == a1 and s < s1)


@dataclass(frozen=True)
class BDResult:
    partial_sum: float
    verdict: str  # "converges" | "diverges" | "inconclusive"
    n_used: int

    def to_json(self) -> dict:
        return {"partial_sum": self.partial_sum, "verdict": self.verdict, "n_used": self.n_used}


def bd_condition(w: WeightSpec, x: float, n_max: int) -> BDResult:
    """Partial sum of log w(n x) / n^2 for n = 1..n_max, plus the Beurling-Domar verdict."""
    if x == 0:
        raise SpecError("Beurling-Domar sum needs x != 0")
    if n_max < 10:
        raise SpecError("n_max must be >= 10")
    n = np.arange(1, n_max + 1, dtype=float)
    if _has_table(w):
        lo, hi = _table_domain(w)
        n = n[(n * x >= lo) & (n * x <= hi)]
    terms = w.log(n * x) / n**2
    # summands are >= 0, so a plain cumulative sum in increasing n is already ordered
    partial = float(np.sum(terms))
    g = w.growth()
    if g is None:
        verdict = "inconclusive"
    elif g[0] > 0:
        verdict = "diverges"
    else:
        verdict = "converges"
    return BDResult(partial, verdict, int(n.size))


def weight_from_json(obj: dict) -> WeightSpec:
    try:
        fam = obj["family"]
        if fam == "polynomial":
            return Polynomial(float(obj["s"]))
        if fam == "exponential":
            return Exponential(float(obj["a"]))
        if fam == "product":
            return Product(tuple(weight_from_json(f) for f in obj["factors"]))
        if fam == "tabulated":
            return Tabulated(tuple(obj["x"]), tuple(obj["v"]))
    except (KeyError, TypeError) as exc:
        raise SpecError(f"malformed weight spec {obj!r}") from exc
    raise SpecError(f"unknown weight family {obj.get('family')!r}")


def parse_weight(text: str) -> WeightSpec:
    """Parse ``poly:<s>``, ``exp:<a>``, ``poly:<s>*exp:<a>`` or a JSON object."""
    import json

    text = text.strip()
    if text.startswith("{"):
        try:
            return weight_from_json(json.loads(text))
        except json.JSONDecodeError as exc:
            raise SpecError(f"bad weight JSON: {exc}") from exc
    parts = text.split("*")
    ws = []
    for part in parts:
        name, _, arg = part.partition(":")
        try:
            val = float(arg)
        except ValueError as exc:
            raise SpecError(f"bad weight {part!r}") from exc
        if name in ("poly", "polynomial"):
            ws.append(Polynomial(val))
        elif name in ("exp", "exponential"):
            ws.append(Exponential(val))
        else:
            raise SpecError(f"unknown weight family {name!r}")
    return ws[0] if len(ws) == 1 else Product(tuple(ws))
