"""Compile a small English fragment into Context Logic.

Static predications become ordering atoms on a dimension, action sentences
introduce a fresh event per sentence chained on causation, and ``If S1 , S2``
forks an alternative branch that is later reasoned about on its own.
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from importlib import resources

from .reasoner import FragmentError, KnowledgeBase, assert_atom, entails
from .scales import assert_scale
from .syntax import (
    Atom,
    Bot,
    Intersection,
    Not,
    Relation,
    Variable,
    conjuncts,
    expand_defs,
    fragment_of,
    to_text,
)
from .temporal import relation_to_formula

log = logging.getLogger(__name__)

CATEGORIES = ("COP", "PP_STATIC", "PP_DYN", "ASPECT", "TENSE", "VERB_I", "VERB_T", "NP")
POLARITIES = ("+", "-", "*", "obj-ext", "subj-arm", "min", "neg-to-avg", "subj+", "subj-")
STRUCTURAL = ("COP", "NP")
DETERMINERS = ("a", "an", "the")
HEDGES = ("somewhat", "very")

CAUSATION = "c"
CONTAINMENT = "t"


class LexiconError(ValueError):
    pass


class NLParseError(ValueError):
    def __init__(self, message: str, position: int, line: int | None = None):
        where = f"token {position}" if line is None else f"line {line}, token {position}"
        super().__init__(f"{where}: {message}")
        self.position = position
        self.line = line


def symbol_name(text: str) -> str:
    """Identifier used for a dimension or entity in CL output."""
    name = re.sub(r"[^A-Za-z0-9_]+", "_", text.strip()).strip("_")
    if not name or name[0].isdigit():
        name = "_" + name
    return name


@dataclass(frozen=True)
class LexEntry:
    lexeme: str
    category: str
    dimension: str | None = None
    polarity: str | None = None
    count: int | None = None
    hedge: str | None = None

    @property
    def dim_symbol(self) -> str | None:
        return symbol_name(self.dimension) if self.dimension else None


class Lexicon:
    def __init__(self, entries=()):
        self.entries: dict = {}
        for e in entries:
            self.add(e)

    def add(self, entry: LexEntry) -> None:
        if entry.category not in CATEGORIES:
            raise LexiconError(f"unknown category {entry.category!r} for {entry.lexeme!r}")
        key = (entry.lexeme, entry.category)
        if key in self.entries:
            raise LexiconError(f"duplicate lexeme {entry.lexeme!r} in category {entry.category}")
        self.entries[key] = entry

    def __len__(self) -> int:
        return len(self.entries)

    def lookup(self, lexeme: str, *categories) -> LexEntry | None:
        for cat in categories or CATEGORIES:
            e = self.entries.get((lexeme, cat))
            if e is not None:
                return e
        return None

    def by_category(self, category: str) -> list:
        return [e for (_, c), e in self.entries.items() if c == category]

    def match_longest(self, tokens: list, start: int, category: str):
        """Longest multiword lexeme of ``category`` at ``tokens[start:]``."""
        best = None
        for e in self.by_category(category):
            words = e.lexeme.split()
            if [t.lower() for t in tokens[start : start + len(words)]] == words:
                if best is None or len(words) > len(best.lexeme.split()):
                    best = e
        return best


def load_lexicon(table: str) -> Lexicon:
    """Read ``lexeme / category / dimension / polarity [/ count [/ hedge]]`` rows.

    Columns are separated by tabs or ``|``; ``-`` marks an empty cell.
    """
    lex = Lexicon()
    for lineno, raw in enumerate(table.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        cells = [c.strip() for c in re.split(r"\t+|\s*\|\s*", line)]
        if len(cells) < 2:
            raise LexiconError(f"line {lineno}: expected at least lexeme and category")
        cells += ["-"] * (6 - len(cells))
        lexeme, cat, dim, pol, count, hedge = cells[:6]
        pol = pol.replace("−", "-")
        if pol != "-" or cat not in STRUCTURAL:
            if pol not in POLARITIES:
                raise LexiconError(f"line {lineno}: unknown polarity {pol!r}")
        entry = LexEntry(
            lexeme=lexeme.lower(),
            category=cat,
            dimension=None if dim == "-" else dim,
            polarity=None if (pol == "-" and cat in STRUCTURAL) else pol,
            count=None if count == "-" else int(count),
            hedge=None if hedge == "-" else hedge,
        )
        if cat.startswith(("PP", "VERB")) and entry.dimension is None:
            raise LexiconError(f"line {lineno}: {cat} entry {lexeme!r} needs a dimension")
        try:
            lex.add(entry)
        except LexiconError as exc:
            raise LexiconError(f"line {lineno}: {exc}") from None
    return lex


def default_lexicon() -> Lexicon:
    return load_lexicon(resources.files("ctxlogic").joinpath("data/lexicon.tsv").read_text("utf-8"))


# ---------------------------------------------------------------- sentence forms


@dataclass(frozen=True)
class NPRef:
    noun: str
    determiner: str | None = None  # a/an/the, None for names and counted NPs
    modifiers: tuple = ()  # PP_STATIC entries used attributively ("a side track")
    count: int | None = None
    proper: bool = False


@dataclass(frozen=True)
class Static:
    subject: NPRef
    predicate: LexEntry
    obj: NPRef | None = None
    hedge: str | None = None


@dataclass(frozen=True)
class Action:
    subject: NPRef
    verb: LexEntry
    mode: str  # "progressive", "future" or "present"
    negated: bool = False
    obj: NPRef | None = None
    pp: tuple | None = None  # (PP_DYN entry, NPRef)
    participle: tuple | None = None  # (verb entry, NPRef | None)


@dataclass(frozen=True)
class Conditional:
    condition: Action | Static
    consequence: Action | Static


class _SentenceParser:
    def __init__(self, tokens: list, lexicon: Lexicon):
        self.toks = tokens
        self.lex = lexicon
        self.i = 0

    def error(self, msg: str, pos: int | None = None):
        return NLParseError(msg, self.i if pos is None else pos)

    @property
    def word(self) -> str | None:
        return self.toks[self.i].lower() if self.i < len(self.toks) else None

    def eat(self, *words) -> bool:
        if self.word in words:
            self.i += 1
            return True
        return False

    def known(self, w: str) -> bool:
        return (
            w in DETERMINERS
            or w in HEDGES
            or w in ("if", "of", "does", "do", "not", ",", ".")
            or any(k[0] == w or k[0].startswith(w + " ") for k in self.lex.entries)
            or self.verb(w, "any") is not None
        )

    def verb(self, w: str, form: str):
        """Verb entry for an inflected token: form is 'base', 's', 'ing' or 'any'."""
        cands = []
        if form in ("base", "any"):
            cands.append(w)
        if form in ("s", "any") and w.endswith("s"):
            cands += [w[:-1], w[:-2] if w.endswith("es") else None]
        if form in ("ing", "any") and w.endswith("ing") and len(w) > 4:
            stem = w[:-3]
            cands += [stem, stem + "e"]
            if len(stem) > 2 and stem[-1] == stem[-2]:
                cands.append(stem[:-1])
        for c in cands:
            if c:
                e = self.lex.lookup(c, "VERB_I", "VERB_T")
                if e is not None:
                    return e
        return None

    # -- noun phrases
    def np(self, required: bool = True) -> NPRef | None:
        start = self.i
        counted = self.lex.match_longest(self.toks, self.i, "NP")
        if counted is not None and counted.count is not None:
            self.i += len(counted.lexeme.split())
            return NPRef(noun=counted.lexeme.split()[-1], count=counted.count)
        w = self.word
        if w in DETERMINERS and self._opens_np(self.i + 1):
            self.i += 1
            det = "a" if w == "an" else w
            mods = []
            while self.word is not None:
                head = self.lex.lookup(self.word, "NP")
                if head is not None and head.count is None:
                    self.i += 1
                    return NPRef(noun=head.lexeme, determiner=det, modifiers=tuple(mods))
                mod = self.lex.lookup(self.word, "PP_STATIC")
                if mod is None:
                    break
                mods.append(mod)
                self.i += 1
            if self.word is None:
                raise self.error("noun expected")
            raise self.error(f"unknown word {self.toks[self.i]!r}")
        if w is not None:
            raw = self.toks[self.i]
            head = self.lex.lookup(w, "NP")
            if head is not None and head.count is None:
                self.i += 1
                return NPRef(noun=head.lexeme)
            if raw[:1].isupper() and (not self.known(w) or w == "a"):
                self.i += 1
                return NPRef(noun=raw, proper=True)
        if required:
            if w is None:
                raise self.error("noun phrase expected", start)
            if not self.known(w):
                raise self.error(f"unknown word {self.toks[self.i]!r}", start)
            raise self.error(f"noun phrase expected at {self.toks[self.i]!r}", start)
        return None

    def _opens_np(self, k: int) -> bool:
        # "A" may be a name: it is an article only when a noun or modifier follows
        if k >= len(self.toks):
            return False
        w = self.toks[k].lower()
        if self.lex.lookup(w, "NP", "PP_STATIC") is not None:
            return True
        return not self.toks[k - 1][:1].isupper() and not self._starts_vp(k) and w not in (".", ",")

    def _starts_vp(self, k: int) -> bool:
        w = self.toks[k].lower()
        return self.lex.lookup(w, "COP", "TENSE") is not None or w in ("does", "do")

    # -- clauses
    def clause(self):
        subj = self.np()
        w = self.word
        if w is None:
            raise self.error("verb expected")
        if self.lex.lookup(w, "COP"):
            self.i += 1
            hedge = self.word if self.word in HEDGES else None
            if hedge:
                self.i += 1
            pred = self.lex.lookup(self.word or "", "PP_STATIC")
            if pred is not None:
                self.i += 1
                self.eat("of")
                obj = self.np(required=False)
                return Static(subj, pred, obj, hedge)
            if hedge:
                raise self.error("adjective expected after hedge")
            v = self.verb(self.word or "", "ing")
            if v is None or self.lex.lookup("-ing", "ASPECT") is None:
                raise self.error(f"no pattern matches at {self.toks[self.i] if self.word else 'end'!r}")
            self.i += 1
            return self._verb_rest(subj, v, "progressive")
        if self.lex.lookup(w, "TENSE"):
            self.i += 1
            v = self.verb(self.word or "", "base")
            if v is None:
                raise self.error("verb expected after tense marker")
            self.i += 1
            return self._verb_rest(subj, v, "future")
        if w in ("does", "do"):
            self.i += 1
            if not self.eat("not"):
                raise self.error("'not' expected")
            v = self.verb(self.word or "", "base")
            if v is None:
                raise self.error("verb expected after negation")
            self.i += 1
            return self._verb_rest(subj, v, "present", negated=True)
        v = self.verb(w, "s") or self.verb(w, "base")
        if v is None:
            if not self.known(w):
                raise self.error(f"unknown word {self.toks[self.i]!r}")
            raise self.error(f"no pattern matches at {self.toks[self.i]!r}")
        self.i += 1
        return self._verb_rest(subj, v, "present")

    def _verb_rest(self, subj, verb, mode, negated=False) -> Action:
        obj = None
        if verb.category == "VERB_T":
            obj = self.np()
        pp = None
        prep = self.lex.lookup(self.word or "", "PP_DYN")
        if prep is not None:
            self.i += 1
            pp = (prep, self.np())
        participle = None
        if self.word is not None and self.word.endswith("ing"):
            pv = self.verb(self.word, "ing")
            if pv is not None:
                self.i += 1
                participle = (pv, self.np() if pv.category == "VERB_T" else None)
        return Action(subj, verb, mode, negated, obj, pp, participle)

    def sentence(self):
        if self.eat("if"):
            cond = self.clause()
            if not self.eat(","):
                raise self.error("',' expected after condition")
            main = self.clause()
            form = Conditional(cond, main)
        else:
            form = self.clause()
        self.eat(".")
        if self.i != len(self.toks):
            w = self.toks[self.i]
            if not self.known(w.lower()):
                raise self.error(f"unknown word {w!r}")
            raise self.error(f"no pattern matches at {w!r}")
        return form


def parse_sentence(tokens, lexicon: Lexicon):
    if isinstance(tokens, str):
        tokens = tokens.split()
    tokens = list(tokens)
    if not tokens:
        raise NLParseError("empty sentence", 0)
    return _SentenceParser(tokens, lexicon).sentence()


# ---------------------------------------------------------------- discourse


@dataclass
class Entity:
    symbol: str
    noun: str
    modifiers: tuple = ()
    count: int | None = None


@dataclass(frozen=True)
class ScaleDirective:
    subject: str
    dimension: str
    side: str
    hedge: str = "none"

    def __str__(self) -> str:
        return f"scale({self.subject}, {self.dimension}, {self.side}, {self.hedge})"


@dataclass
class Branch:
    id: str
    events: list = field(default_factory=lambda: ["e0"])
    formulas: list = field(default_factory=list)
    scales: list = field(default_factory=list)
    roles: list = field(default_factory=list)
    anchors: list = field(default_factory=list)
    dims: list = field(default_factory=list)

    @property
    def current(self) -> str:
        return self.events[-1]

    def use_dim(self, dim: str) -> None:
        if dim not in self.dims:
            self.dims.append(dim)

    def fork(self, new_id: str) -> "Branch":
        return Branch(
            new_id,
            list(self.events),
            list(self.formulas),
            list(self.scales),
            list(self.roles),
            list(self.anchors),
            list(self.dims),
        )


def more(dim: str, hi: str, lo: str) -> Atom:
    """``hi`` lies further in the positive direction of ``dim`` than ``lo``."""
    return Atom(Intersection(Variable(lo), Variable(dim)), Variable(hi))


def directed(dim: str, polarity: str, first: str, second: str) -> Atom:
    """``second`` is displaced from ``first`` in direction ``polarity`` on ``dim``."""
    if polarity in ("-", "subj-"):
        return more(dim, first, second)
    return more(dim, second, first)


class Discourse:
    """Parsed multi-sentence text with entities, events and alternative branches."""

    def __init__(self, lexicon: Lexicon | None = None):
        self.lexicon = lexicon or default_lexicon()
        self.sentences: list = []
        self.entities: list = []
        self.root = Branch("main")
        self.forks: list = []
        self.warnings: list = []
        self._memo: dict = {}

    # -- entities
    def _new_entity(self, ref: NPRef) -> Entity:
        base = symbol_name("_".join([m.lexeme for m in ref.modifiers] + [ref.noun]))
        taken = {e.symbol for e in self.entities}
        name, k = base, 2
        while name in taken:
            name, k = f"{base}_{k}", k + 1
        ent = Entity(name, ref.noun, tuple(m.lexeme for m in ref.modifiers), ref.count)
        self.entities.append(ent)
        return ent

    def resolve(self, ref: NPRef) -> tuple:
        """Entity for ``ref`` and whether it was newly introduced."""
        if ref.proper:
            for e in self.entities:
                if e.symbol == symbol_name(ref.noun):
                    return e, False
            ent = Entity(symbol_name(ref.noun), ref.noun)
            self.entities.append(ent)
            return ent, True
        if ref.determiner == "the":
            mods = tuple(m.lexeme for m in ref.modifiers)
            for exact in (True, False):
                for e in reversed(self.entities):
                    if e.noun != ref.noun:
                        continue
                    if (e.modifiers == mods) if exact else set(mods) <= set(e.modifiers):
                        return e, False
            self.warnings.append(f"unresolved anaphora 'the {ref.noun}': new entity created")
            log.debug(self.warnings[-1])
        return self._new_entity(ref), True

    # -- sentences
    def add_text(self, text: str) -> "Discourse":
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                form = parse_sentence(line.split(), self.lexicon)
            except NLParseError as exc:
                raise NLParseError(str(exc).split(": ", 1)[1], exc.position, lineno) from None
            self.add(form)
        return self

    def add(self, form) -> None:
        self.sentences.append(form)
        self._memo = {}
        if isinstance(form, Conditional):
            branch = self.root.fork(chr(ord("a") + len(self.forks)))
            self.forks.append(branch)
            self._compile(branch, form.condition)
            self._compile(branch, form.consequence)
        else:
            for b in [self.root] + self.forks:
                self._compile(b, form)

    @property
    def branches(self) -> list:
        return list(self.forks) if self.forks else [self.root]

    def _mark_modifiers(self, branch: Branch, ent: Entity, fresh: bool, mods) -> None:
        if not fresh:
            return
        for m in mods:
            side = "below" if m.polarity == "-" else "above"
            branch.scales.append(ScaleDirective(ent.symbol, m.dim_symbol, side, m.hedge or "none"))
            branch.use_dim(m.dim_symbol)

    def _entity(self, branch: Branch, ref: NPRef) -> str:
        # one resolution per NP occurrence, however many branches it compiles into
        if id(ref) not in self._memo:
            self._memo[id(ref)] = self.resolve(ref)
        ent, fresh = self._memo[id(ref)]
        self._mark_modifiers(branch, ent, fresh, ref.modifiers)
        return ent.symbol

    def _compile(self, branch: Branch, form) -> None:
        if isinstance(form, Static):
            self._compile_static(branch, form)
        else:
            self._compile_action(branch, form)

    def _compile_static(self, branch: Branch, s: Static) -> None:
        subj = self._entity(branch, s.subject)
        dim = s.predicate.dim_symbol
        branch.use_dim(dim)
        if s.obj is None:
            side = "below" if s.predicate.polarity == "-" else "above"
            hedge = s.hedge or s.predicate.hedge or "none"
            branch.scales.append(ScaleDirective(subj, dim, side, hedge))
            return
        obj = self._entity(branch, s.obj)
        if s.predicate.polarity == "-":
            branch.formulas.append(more(dim, obj, subj))
        else:
            branch.formulas.append(more(dim, subj, obj))

    def _verb_facts(self, branch: Branch, verb: LexEntry, prev: str, new: str, patient: str | None) -> None:
        pol, dim = verb.polarity, verb.dim_symbol
        if pol in ("+", "-", "subj+", "subj-", "min", "neg-to-avg"):
            branch.use_dim(dim)
        if pol in ("+", "-", "subj+", "subj-"):
            branch.formulas.append(directed(dim, pol, prev, new))
        elif pol == "min" and patient is not None:
            branch.formulas.append(Atom(Intersection(Variable(patient), Variable(dim)), Bot()))
            branch.anchors.append(patient)
        elif pol == "neg-to-avg" and patient is not None:
            branch.scales.append(ScaleDirective(f"{patient}_{prev}", dim, "below"))

    def _compile_action(self, branch: Branch, a: Action) -> None:
        subj = self._entity(branch, a.subject)
        obj = self._entity(branch, a.obj) if a.obj is not None else None
        if a.negated:
            branch.roles.append(("not", a.verb.lexeme, subj, obj))
            return
        prev = branch.current
        new = f"e{len(branch.events)}" if branch is self.root else f"e{len(branch.events)}_{branch.id}"
        branch.events.append(new)
        branch.use_dim(CAUSATION)
        if a.mode == "progressive" or a.mode == "future":
            branch.use_dim(CONTAINMENT)
        if a.mode == "future":
            branch.formulas.append(relation_to_formula("before", prev, new))
        else:
            branch.formulas.append(Relation("<<", Variable(prev), Variable(new), Variable(CAUSATION)))
            if a.mode == "progressive":
                branch.formulas.append(Relation("<<", Variable(prev), Variable(new), Variable(CONTAINMENT)))
        branch.roles.append(("subj", new, subj))
        if obj is not None:
            branch.roles.append(("obj", new, obj))
        patient = obj if a.verb.category == "VERB_T" else subj
        self._verb_facts(branch, a.verb, prev, new, patient)
        if a.pp is not None:
            prep, pref = a.pp
            target = self._entity(branch, pref)
            branch.formulas.append(directed(prep.dim_symbol, prep.polarity, prev, new))
            branch.use_dim(prep.dim_symbol)
            branch.roles.append(("objp", new, target))
        if a.participle is not None:
            pverb, pref = a.participle
            pobj = self._entity(branch, pref) if pref is not None else None
            if pobj is not None:
                branch.roles.append(("obj", new, pobj))
            self._verb_facts(branch, pverb, prev, new, pobj if pverb.category == "VERB_T" else subj)


def parse_text(text: str, lexicon: Lexicon | None = None) -> Discourse:
    return Discourse(lexicon).add_text(text)


def compile_discourse(discourse: Discourse) -> list:
    """Per-branch formula lists (the branches carry scale directives and role facts)."""
    return [list(b.formulas) for b in discourse.branches]


def branch_to_text(branch: Branch) -> str:
    lines = [f"# branch {branch.id}: events {' '.join(branch.events)}"]
    lines += [to_text(f) for f in branch.formulas]
    lines += [f"# {s}" for s in branch.scales]
    lines += ["# role " + " ".join(str(x) for x in r if x is not None) for r in branch.roles]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- lowering


@dataclass(frozen=True)
class SideCondition:
    """``![lhs <= rhs]`` must hold: checked afterwards by looking for a witness."""

    atom: Atom

    def __str__(self) -> str:
        return f"witness for !{to_text(self.atom)}"


@dataclass
class Lowered:
    atoms: list
    side_conditions: list


def lower_to_cla(formulas) -> Lowered:
    atoms, sides = [], []
    for f in formulas:
        for part in conjuncts(expand_defs(f)):
            while isinstance(part, Not) and isinstance(part.body, Not):
                part = part.body.body
            if isinstance(part, Atom):
                atoms.append(part)
            elif isinstance(part, Not) and isinstance(part.body, Atom):
                sides.append(SideCondition(part.body))
            else:
                raise FragmentError(part, fragment_of(part), f"{to_text(f)} needs {fragment_of(part).name}; cannot lower")
    return Lowered(atoms, sides)


@dataclass
class BranchModel:
    branch: Branch
    kb: KnowledgeBase
    lowered: Lowered
    scales: list  # ScaleAssertion records
    witnesses: list  # (SideCondition, witness count)


def build_branch(branch: Branch, kappa: int, seed: int, entities=()) -> BranchModel:
    """Fresh knowledge base for one branch: atoms, then scale placements."""
    kb = KnowledgeBase(kappa=kappa, seed=seed)
    lowered = lower_to_cla(branch.formulas)
    for atom in lowered.atoms:
        assert_atom(kb, atom)
    placed: list = []
    for sd in branch.scales:
        placed.append(assert_scale(kb, sd.subject, sd.dimension, sd.side, sd.hedge))
    for name in list(branch.events) + list(entities):
        kb.symbol(name)
    # a countermodel of the atom witnesses its negation
    witnesses = [(sc, entails(kb, sc.atom).countermodels) for sc in lowered.side_conditions]
    return BranchModel(branch, kb, lowered, placed, witnesses)
