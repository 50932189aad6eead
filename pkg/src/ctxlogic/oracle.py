"""Exact truth-table semantics for atomic CL knowledge bases.

Symbols are sorted lexicographically and symbol ``k`` is bit ``k`` of the
assignment index; assignments are enumerated in numeric order.  An atom
``[s <= t]`` holds in an assignment when ``s`` implies ``t`` there.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .syntax import (
    And,
    Atom,
    Bot,
    Complement,
    Iff,
    Implies,
    Intersection,
    Not,
    Or,
    Sum,
    Top,
    Variable,
    expand_defs,
    formula_vars,
    parse_one,
    term_vars,
)

MAX_SYMBOLS = 24


class SymbolBudgetExceeded(ValueError):
    pass


@dataclass(frozen=True)
class ExactModelSet:
    symbols: tuple
    satisfying: np.ndarray  # boolean mask over the 2**n assignments

    @property
    def count(self) -> int:
        return int(self.satisfying.sum())

    @property
    def total(self) -> int:
        return 1 << len(self.symbols)

    def assignments(self):
        for idx in np.flatnonzero(self.satisfying):
            yield {s: bool((int(idx) >> k) & 1) for k, s in enumerate(self.symbols)}


def _atoms(atoms) -> list:
    return [parse_one(a) if isinstance(a, str) else a for a in atoms]


def _symbols(atoms, extra=()) -> tuple:
    names = set(extra)
    for a in atoms:
        if not isinstance(a, Atom):
            raise TypeError(f"oracle accepts atoms only, got {a!r}")
        names |= term_vars(a.lhs) | term_vars(a.rhs)
    if len(names) > MAX_SYMBOLS:
        raise SymbolBudgetExceeded(f"{len(names)} symbols exceed the budget of {MAX_SYMBOLS}")
    return tuple(sorted(names))


class _Table:
    def __init__(self, symbols: tuple):
        self.symbols = symbols
        self.index = {s: k for k, s in enumerate(symbols)}
        self.rows = np.arange(1 << len(symbols), dtype=np.int64)

    def column(self, name: str) -> np.ndarray:
        return ((self.rows >> self.index[name]) & 1).astype(bool)

    def term(self, t) -> np.ndarray:
        if isinstance(t, Variable):
            return self.column(t.name)
        if isinstance(t, Top):
            return np.ones(self.rows.size, dtype=bool)
        if isinstance(t, Bot):
            return np.zeros(self.rows.size, dtype=bool)
        if isinstance(t, Complement):
            return ~self.term(t.term)
        if isinstance(t, Intersection):
            return self.term(t.left) & self.term(t.right)
        if isinstance(t, Sum):
            return self.term(t.left) | self.term(t.right)
        raise TypeError(f"not a term: {t!r}")

    def atom(self, a: Atom) -> np.ndarray:
        return ~self.term(a.lhs) | self.term(a.rhs)


def models(atoms, symbols=()) -> ExactModelSet:
    atoms = _atoms(atoms)
    syms = _symbols(atoms, symbols)
    table = _Table(syms)
    sat = np.ones(table.rows.size, dtype=bool)
    for a in atoms:
        sat &= table.atom(a)
    return ExactModelSet(syms, sat)


def exact_count(atoms, symbols=()) -> int:
    """Number of assignments over the mentioned (plus ``symbols``) names satisfying all atoms."""
    return models(atoms, symbols).count


def _violating(atoms, query, symbols=()) -> tuple:
    atoms = _atoms(atoms)
    query = parse_one(query) if isinstance(query, str) else query
    syms = _symbols(atoms + [query], symbols)
    table = _Table(syms)
    sat = np.ones(table.rows.size, dtype=bool)
    for a in atoms:
        sat &= table.atom(a)
    return sat & ~table.atom(query), syms


def exact_entails(atoms, query) -> bool:
    bad, _ = _violating(atoms, query)
    return not bad.any()


def violating_fraction(atoms, query, symbols=()) -> Fraction:
    """Share of all assignments that satisfy the atoms but falsify ``query``."""
    bad, syms = _violating(atoms, query, symbols)
    return Fraction(int(bad.sum()), 1 << len(syms))


def countermodel(atoms, query):
    """First violating assignment in enumeration order, or ``None``."""
    bad, syms = _violating(atoms, query)
    hits = np.flatnonzero(bad)
    if hits.size == 0:
        return None
    idx = int(hits[0])
    return {s: bool((idx >> k) & 1) for k, s in enumerate(syms)}


def _formula(table: _Table, f) -> np.ndarray:
    if isinstance(f, Atom):
        return table.atom(f)
    if isinstance(f, Not):
        return ~_formula(table, f.body)
    if isinstance(f, And):
        return _formula(table, f.left) & _formula(table, f.right)
    if isinstance(f, Or):
        return _formula(table, f.left) | _formula(table, f.right)
    if isinstance(f, Implies):
        return ~_formula(table, f.left) | _formula(table, f.right)
    if isinstance(f, Iff):
        return _formula(table, f.left) == _formula(table, f.right)
    raise TypeError(f"quantifier-free formula expected, got {type(f).__name__}")


def exact_valid(f) -> bool:
    """True when a quantifier-free formula holds under every assignment.

    Free variables act as schema variables, so a universally quantified law
    is checked by leaving its bound variable free.
    """
    f = expand_defs(parse_one(f) if isinstance(f, str) else f)
    syms = tuple(sorted(formula_vars(f)))
    if len(syms) > MAX_SYMBOLS:
        raise SymbolBudgetExceeded(f"{len(syms)} symbols exceed the budget of {MAX_SYMBOLS}")
    return bool(_formula(_Table(syms), f).all())
