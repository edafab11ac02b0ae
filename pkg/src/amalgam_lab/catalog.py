"""Fixed and seeded collections of space pairs used by the embedding suites."""

from __future__ import annotations

import numpy as np

from .decide import decide_embedding
from .space_a import SpaceSpec
from .weights import poly

EXPONENTS = (1.0, 1.5, 2.0, 3.0, 4.0)
ORDERS = (0.0, 0.5, 1.0, 2.0, 3.0)


def _s(p, q, r, s1=0.0, s2=0.0) -> SpaceSpec:
    return SpaceSpec(p, q, r, poly(s1), poly(s2))


# (src, dst) pairs on which some embedding rule fires
HAND_PICKED: tuple[tuple[SpaceSpec, SpaceSpec], ...] = (
    (_s(3, 2, 1), _s(2, 2, 2)),
    (_s(3, 3, 1, 2, 1), _s(2, 2, 2, 1, 0)),
    (_s(2, 2, 2, 2, 1), _s(2, 2, 2, 1, 0)),
    (_s(2, 2, 2, 1, 1), _s(2, 2, 2, 1, 1)),
    (_s(4, 2, 2), _s(1, 2, 2)),
    (_s(2, 2, 1), _s(2, 2, 4)),
    (_s(2, 3, 2), _s(2, 1, 2)),
    (_s(4, 4, 1, 1, 1), _s(1, 1, 4, 1, 1)),
    (_s(2, 2, 2, 3, 0), _s(2, 2, 2, 0, 0)),
    (_s(2, 2, 2, 0, 3), _s(2, 2, 2, 0, 0)),
    (_s(2, 3, 1, 2, 1), _s(2, 2, 2, 1, 1)),
    (_s(3, 2, 1, 1, 1), _s(2, 2, 2, 1, 1)),
    (_s(1.5, 1.5, 1.5, 0.5, 0.5), _s(1, 1, 3, 0, 0)),
    (_s(3, 3, 3, 2, 2), _s(3, 3, 3, 1, 2)),
    (_s(2, 4, 1, 1, 2), _s(2, 2, 1, 1, 2)),
    (_s(4, 2, 1, 3, 3), _s(2, 1, 2, 2, 0.5)),
    (_s(1, 1, 1, 1, 1), _s(1, 1, 1, 0, 0)),
    (_s(3, 1, 1), _s(1.5, 1, 2)),
    (_s(2, 2, 1, 2, 0), _s(1, 2, 1, 1, 0)),
    (_s(4, 4, 2, 0.5, 1), _s(4, 1.5, 3, 0, 1)),
)

# definite negatives by the iff theorem: w1_dst grows faster than w1_src by at least (1+|x|)^2
IFF_NEGATIVES: tuple[tuple[SpaceSpec, SpaceSpec], ...] = (
    (_s(2, 2, 2, 0, 0), _s(2, 2, 2, 2, 0)),
    (_s(2, 2, 2, 1, 1), _s(2, 2, 2, 3, 1)),
    (_s(3, 2, 1, 0, 0), _s(2, 2, 1, 3, 0)),
    (_s(1, 2, 2, 0.5, 0), _s(1, 2, 2, 2.5, 0)),
    (_s(2, 1, 3, 0, 2), _s(4, 1, 3, 2, 2)),
)


def random_spec(rng: np.random.Generator) -> SpaceSpec:
    p, q, r = (float(rng.choice(EXPONENTS)) for _ in range(3))
    s1, s2 = (float(rng.choice(ORDERS)) for _ in range(2))
    return _s(p, q, r, s1, s2)


def random_embedding_pairs(seed: int, n: int = 50, max_draws: int = 100_000):
    """Independent random (src, dst) draws, kept when an embedding rule fires."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(max_draws):
        src, dst = random_spec(rng), random_spec(rng)
        if decide_embedding(src, dst).embeds:
            out.append((src, dst))
            if len(out) == n:
                return out
    raise RuntimeError(f"only {len(out)} embedding pairs in {max_draws} draws")
