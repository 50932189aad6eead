"""Context-dependent scales on a dimension, with the hedges "somewhat" and "very".

A dimension ``s`` spans ``[0, |phi & s|]`` and its mean sits at half the
maximum.  Placing ``a`` above the mean removes sample positions that lie on
``s`` but outside ``a``, filtered through a one-time random vector; the
density of that vector decides how far ``a`` moves.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .bitvec import band, bnot, bor, popcount
from .reasoner import KnowledgeBase

DEFAULT_BAND = Fraction(1, 20)


class Side(str, enum.Enum):
    ABOVE = "above"
    BELOW = "below"


class Hedge(str, enum.Enum):
    SOMEWHAT = "somewhat"
    NONE = "none"
    VERY = "very"


class Placement(str, enum.Enum):
    BELOW = "below"
    AVERAGE = "average"
    ABOVE = "above"


@dataclass(frozen=True)
class ScaleAssertion:
    subject: str
    dimension: str
    side: Side
    hedge: Hedge
    draw_ids: tuple


def scale_bounds(kb: KnowledgeBase, dim: str) -> tuple:
    """``(min, max, mean)``; ``mean`` is exactly ``max / 2``."""
    top = popcount(band(kb.phi, kb.symbol(dim)))
    return 0, top, Fraction(top, 2)


def _comparison_vector(kb: KnowledgeBase, side: Side, hedge: Hedge):
    if hedge is Hedge.NONE:
        rid, r = kb.draw()
        return (rid,), r
    id1, r1 = kb.draw()
    id2, r2 = kb.draw()
    # Above the mean a denser filter pushes further out; below it the
    # complement of the filter does the removing, so the roles swap.
    denser = (hedge is Hedge.VERY) == (side is Side.ABOVE)
    return (id1, id2), (bor(r1, r2) if denser else band(r1, r2))


def assert_scale(kb: KnowledgeBase, a: str, s: str, side="above", hedge="none") -> ScaleAssertion:
    side, hedge = Side(side), Hedge(hedge)
    va, vs = kb.symbol(a), kb.symbol(s)
    ids, rv = _comparison_vector(kb, side, hedge)
    if side is Side.ABOVE:
        removed = band(rv, band(vs, bnot(va)))
    else:
        removed = band(va, band(vs, bnot(rv)))
    kb.constrain(bnot(removed))
    return ScaleAssertion(a, s, side, hedge, ids)


def coordinate(kb: KnowledgeBase, dim: str, x: str) -> int:
    return popcount(band(kb.phi, band(kb.symbol(dim), kb.symbol(x))))


def normalized(kb: KnowledgeBase, dim: str, x: str) -> Fraction:
    _, top, _ = scale_bounds(kb, dim)
    if top == 0:
        return Fraction(0)
    return Fraction(coordinate(kb, dim, x), top)


def classify(kb: KnowledgeBase, dim: str, x: str, band_halfwidth=DEFAULT_BAND) -> Placement:
    _, top, mean = scale_bounds(kb, dim)
    raw = coordinate(kb, dim, x)
    margin = Fraction(band_halfwidth) * top
    if raw < mean - margin:
        return Placement.BELOW
    if raw > mean + margin:
        return Placement.ABOVE
    if top == 0:
        # an emptied dimension collapses to its minimum
        return Placement.BELOW
    return Placement.AVERAGE
