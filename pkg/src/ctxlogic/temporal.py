"""Fifteen temporal relations from a causation order and a containment order.

An event is modelled by a point on the causation axis (its point of no
return) and an interval for containment.  The causation facet compares the
two points; the containment facet compares the two intervals.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .syntax import TEMPORAL_SCHEMATA, DEFAULT_DEFINITIONS, Formula, Variable


@dataclass(frozen=True)
class EventExtent:
    c_point: Fraction
    t_start: Fraction
    t_end: Fraction

    def __post_init__(self):
        for name in ("c_point", "t_start", "t_end"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if not self.t_start < self.t_end:
            raise ValueError(f"empty interval [{self.t_start}, {self.t_end}]")


class TemporalRelation(str, enum.Enum):
    CORE = "core"
    STARTS = "starts"
    FINISHES = "finishes"
    ICORE = "icore"
    ISTARTS = "istarts"
    IFINISHES = "ifinishes"
    QCORE = "qcore"
    QSTARTS = "qstarts"
    QFINISHES = "qfinishes"
    QOVLC = "qovlc"
    OVLC = "ovlc"
    IOVLC = "iovlc"
    MEETS = "meets"
    BEFORE = "before"
    AFTER = "after"


TRANSITIVE = frozenset(
    TemporalRelation(n)
    for n in ("core", "starts", "finishes", "icore", "istarts", "ifinishes", "qcore", "qstarts", "qfinishes")
)

# (causation facet, containment facet) -> relation
_TABLE = {
    ("equal", "inside"): TemporalRelation.CORE,
    ("before", "inside"): TemporalRelation.STARTS,
    ("after", "inside"): TemporalRelation.FINISHES,
    ("equal", "contains"): TemporalRelation.ICORE,
    ("before", "contains"): TemporalRelation.ISTARTS,
    ("after", "contains"): TemporalRelation.IFINISHES,
    ("equal", "same"): TemporalRelation.QCORE,
    ("before", "same"): TemporalRelation.QSTARTS,
    ("after", "same"): TemporalRelation.QFINISHES,
    ("equal", "overlap"): TemporalRelation.QOVLC,
    ("before", "overlap"): TemporalRelation.OVLC,
    ("after", "overlap"): TemporalRelation.IOVLC,
    ("equal", "apart"): TemporalRelation.MEETS,
    ("before", "apart"): TemporalRelation.BEFORE,
    ("after", "apart"): TemporalRelation.AFTER,
}
FACETS = {rel: key for key, rel in _TABLE.items()}


def causation_facet(i: EventExtent, j: EventExtent) -> str:
    if i.c_point == j.c_point:
        return "equal"
    return "before" if i.c_point < j.c_point else "after"


def containment_facet(i: EventExtent, j: EventExtent) -> str:
    """Intervals overlap only when they share a stretch of positive length."""
    if (i.t_start, i.t_end) == (j.t_start, j.t_end):
        return "same"
    if j.t_start <= i.t_start and i.t_end <= j.t_end:
        return "inside"
    if i.t_start <= j.t_start and j.t_end <= i.t_end:
        return "contains"
    if max(i.t_start, j.t_start) < min(i.t_end, j.t_end):
        return "overlap"
    return "apart"


def classify(i: EventExtent, j: EventExtent) -> TemporalRelation:
    return _TABLE[(causation_facet(i, j), containment_facet(i, j))]


def relation_to_formula(rel, i: str, j: str) -> Formula:
    """Defining conjunction of ``rel(i, j)``, still using ``<<``, ``==`` and ``ov``."""
    name = rel.value if isinstance(rel, TemporalRelation) else str(rel)
    if name not in TEMPORAL_SCHEMATA:
        raise ValueError(f"unknown temporal relation {name!r}")
    return DEFAULT_DEFINITIONS.instantiate(name, (Variable(i), Variable(j)))
