"""The bit-vector reasoner for atomic Context Logic.

Every bit position of the width-``kappa`` vectors is one sampled truth
assignment to the symbols.  A knowledge base keeps the constraint vector
``phi``: bit ``i`` is set iff sample ``i`` satisfies every asserted atom.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

from .bitvec import DEFAULT_WIDTH, BitVec, band, bnot, bor, is_zero, popcount, random_bitvec, symbol_rng
from .syntax import (
    Atom,
    Bot,
    Complement,
    Definitions,
    Formula,
    Fragment,
    Intersection,
    Not,
    Relation,
    Sum,
    Term,
    Top,
    Variable,
    conjuncts,
    expand_defs,
    fragment_of,
    parse_one,
    term_vars,
    to_text,
)

log = logging.getLogger(__name__)


class FragmentError(ValueError):
    """Input needs a richer fragment than the reasoner handles."""

    def __init__(self, formula, fragment: Fragment, message: str = ""):
        text = to_text(formula) if not isinstance(formula, str) else formula
        super().__init__(message or f"{text} is {fragment.name}, only CLA can be asserted")
        self.fragment = fragment


@dataclass
class Entailment:
    entailed: bool
    countermodels: int = 0
    inconsistent: bool = False

    def __bool__(self) -> bool:
        return self.entailed

    def __str__(self) -> str:
        if self.entailed:
            return "entailed (vacuously: knowledge base inconsistent)" if self.inconsistent else "entailed"
        return f"countermodel_found count={self.countermodels}"


@dataclass
class Overlap:
    witnesses: int

    def __bool__(self) -> bool:
        return self.witnesses > 0

    def __str__(self) -> str:
        return f"yes count={self.witnesses}" if self.witnesses else "no_witness"


@dataclass
class StrictResult:
    """Non-strict half checked logically, converse exclusion only by witness."""

    nonstrict: Entailment
    witnesses: int

    @property
    def holds(self) -> bool:
        return self.nonstrict.entailed and self.witnesses > 0

    def __bool__(self) -> bool:
        return self.holds

    def __str__(self) -> str:
        if not self.nonstrict.entailed:
            return str(self.nonstrict)
        if self.witnesses:
            return f"statistically strict witnesses={self.witnesses}"
        return "entailed non-strictly; no strictness witness"


@dataclass
class KnowledgeBase:
    kappa: int = DEFAULT_WIDTH
    seed: int = 0
    symbols: dict = field(default_factory=dict)
    phi: BitVec | None = None
    asserted: list = field(default_factory=list)
    draws: int = 0
    used_draws: set = field(default_factory=set)
    definitions: Definitions | None = None

    def __post_init__(self):
        if self.kappa < 1:
            raise ValueError("kappa must be positive")
        if self.phi is None:
            self.phi = BitVec.ones(self.kappa)

    def copy(self) -> "KnowledgeBase":
        return KnowledgeBase(
            kappa=self.kappa,
            seed=self.seed,
            symbols=dict(self.symbols),
            phi=self.phi,
            asserted=list(self.asserted),
            draws=self.draws,
            used_draws=set(self.used_draws),
            definitions=self.definitions,
        )

    # -- drawing
    def draw(self, density=Fraction(1, 2)) -> tuple:
        """Draw a fresh vector on its own substream; returns ``(draw_id, vector)``."""
        draw_id = self.draws
        if draw_id in self.used_draws:
            raise RuntimeError(f"draw id {draw_id} already consumed")
        self.draws += 1
        self.used_draws.add(draw_id)
        return draw_id, random_bitvec(self.kappa, density, symbol_rng(self.seed, draw_id))

    def symbol(self, name: str) -> BitVec:
        vec = self.symbols.get(name)
        if vec is None:
            _, vec = self.draw()
            self.symbols[name] = vec
        return vec

    def constrain(self, keep: BitVec) -> None:
        self.phi = band(self.phi, keep)
        if is_zero(self.phi):
            log.warning("knowledge base became inconsistent (phi is all zeros)")

    @property
    def inconsistent(self) -> bool:
        return is_zero(self.phi)

    def assert_text(self, text: str) -> "KnowledgeBase":
        return assert_formula(self, parse_one(text))


def vec_of_term(kb: KnowledgeBase, t: Term) -> BitVec:
    if isinstance(t, Variable):
        return kb.symbol(t.name)
    if isinstance(t, Top):
        return BitVec.ones(kb.kappa)
    if isinstance(t, Bot):
        return BitVec.zeros(kb.kappa)
    if isinstance(t, Complement):
        return bnot(vec_of_term(kb, t.term))
    if isinstance(t, Intersection):
        return band(vec_of_term(kb, t.left), vec_of_term(kb, t.right))
    if isinstance(t, Sum):
        return bor(vec_of_term(kb, t.left), vec_of_term(kb, t.right))
    raise TypeError(f"not a term: {t!r}")


def violations(kb: KnowledgeBase, atom: Atom) -> BitVec:
    """Positions where ``lhs`` holds and ``rhs`` does not."""
    return band(vec_of_term(kb, atom.lhs), bnot(vec_of_term(kb, atom.rhs)))


def _as_atom(kb: KnowledgeBase, atom) -> Atom:
    if isinstance(atom, str):
        atom = parse_one(atom)
    if isinstance(atom, Atom):
        return atom
    f = expand_defs(atom, kb.definitions)
    if isinstance(f, Atom):
        return f
    raise FragmentError(atom, fragment_of(f), f"{to_text(atom)} is not a single atom")


def assert_atom(kb: KnowledgeBase, atom) -> KnowledgeBase:
    atom = _as_atom(kb, atom)
    kb.constrain(bnot(violations(kb, atom)))
    kb.asserted.append(atom)
    return kb


def assert_formula(kb: KnowledgeBase, f: Formula) -> KnowledgeBase:
    """Assert a formula that expands to a conjunction of atoms."""
    g = expand_defs(f, kb.definitions)
    frag = fragment_of(g)
    if frag != Fragment.CLA:
        raise FragmentError(f, frag)
    for atom in conjuncts(g):
        assert_atom(kb, atom)
    return kb


def entails(kb: KnowledgeBase, atom) -> Entailment:
    atom = _as_atom(kb, atom)
    count = popcount(band(kb.phi, violations(kb, atom)))
    return Entailment(count == 0, count, kb.inconsistent)


def overlaps(kb: KnowledgeBase, s, t) -> Overlap:
    if isinstance(s, str):
        s = Variable(s)
    if isinstance(t, str):
        t = Variable(t)
    joint = band(kb.phi, band(vec_of_term(kb, s), vec_of_term(kb, t)))
    return Overlap(popcount(joint))


def entails_strict(kb: KnowledgeBase, s: Term, t: Term) -> StrictResult:
    """``[s << t]``: ``[s <= t]`` must be entailed and ``t`` must show bits outside ``s``."""
    nonstrict = entails(kb, Atom(s, t))
    outside = band(kb.phi, band(vec_of_term(kb, t), bnot(vec_of_term(kb, s))))
    return StrictResult(nonstrict, popcount(outside))


def query(kb: KnowledgeBase, f):
    """Answer a query formula.

    Atoms and conjunctions of atoms get an :class:`Entailment`; a single
    ``<<``, ``ov`` relation or negated atom gets the matching witness check.
    """
    if isinstance(f, str):
        f = parse_one(f)
    if isinstance(f, Relation) and f.op == "<<":
        lhs = f.lhs if f.ctx is None else Intersection(f.lhs, f.ctx)
        return entails_strict(kb, lhs, f.rhs)
    if isinstance(f, Relation) and f.op == "ov":
        lhs = f.lhs if f.ctx is None else Intersection(f.lhs, f.ctx)
        return overlaps(kb, lhs, f.rhs)
    g = expand_defs(f, kb.definitions)
    if isinstance(g, Not) and isinstance(g.body, Atom):
        # a countermodel of the atom is a witness for its negation
        count = entails(kb, g.body).countermodels
        return Overlap(count)
    frag = fragment_of(g)
    if frag != Fragment.CLA:
        raise FragmentError(f, frag, f"cannot query {to_text(f)}: {frag.name} queries are not supported")
    total = 0
    for atom in conjuncts(g):
        total += entails(kb, atom).countermodels
    return Entailment(total == 0, total, kb.inconsistent)


def model_fraction(kb: KnowledgeBase) -> Fraction:
    return Fraction(popcount(kb.phi), kb.kappa)


def miss_probability_estimate(n: int, kappa: int) -> Fraction:
    """The quick estimate ``2**n / kappa`` for missing an assignment."""
    if n < 1 or kappa < 1:
        raise ValueError("n and kappa must be positive")
    return Fraction(2**n, kappa)


def expected_missed_exact(n: int, kappa: int) -> Fraction:
    """Expected number of the ``2**n`` assignments absent from ``kappa`` uniform samples."""
    if n < 1 or kappa < 1:
        raise ValueError("n and kappa must be positive")
    return 2**n * (1 - Fraction(1, 2**n)) ** kappa


def symbols_of(atoms) -> set:
    out = set()
    for a in atoms:
        out |= term_vars(a.lhs) | term_vars(a.rhs)
    return out
