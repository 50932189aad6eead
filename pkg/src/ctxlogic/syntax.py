"""Context Logic terms and formulae: AST, ASCII parser, printer, macro expansion.

Surface grammar, one statement per line, ``#`` starts a comment::

    term := ident | top | bot | ~term | term * term | term + term | ( term )
    atom := [ term REL term ] | ident : atom | ident [ term , term ]
    form := atom | ! form | form & form | form | form | form -> form
          | form <-> form | (all|ex) ident : form | ident ( term, ... ) | ( form )

with ``REL`` one of ``<= >= == ov <. <<``.  Term precedence is ``~ > * > +``,
formula precedence ``! > & > | > -> > <->``, and quantifier scope extends as
far right as possible.  ``ident(args)`` invokes an entry of a definitions
table (see :class:`Definitions`).
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Union

# ---------------------------------------------------------------- terms


@dataclass(frozen=True)
class Variable:
    name: str


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bot:
    pass


@dataclass(frozen=True)
class Complement:
    term: "Term"


@dataclass(frozen=True)
class Intersection:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Sum:
    left: "Term"
    right: "Term"


Term = Union[Variable, Top, Bot, Complement, Intersection, Sum]

# ---------------------------------------------------------------- formulae


@dataclass(frozen=True)
class Atom:
    """``[lhs <= rhs]``, the only primitive relation."""

    lhs: Term
    rhs: Term


SUGAR_OPS = (">=", "==", "ov", "<.", "<<")


@dataclass(frozen=True)
class Relation:
    """A defined relation, removed by :func:`expand_defs`.

    ``ctx`` holds the contextualising term of ``x:[a R b]``.
    """

    op: str
    lhs: Term
    rhs: Term
    ctx: Term | None = None


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Call:
    """Use of a schema from a definitions table, e.g. ``starts(i, j)``."""

    name: str
    args: tuple


Formula = Union[Atom, Relation, Not, And, Or, Implies, Iff, Forall, Exists, Call]


class Fragment(enum.IntEnum):
    CLA = 0
    CL0 = 1
    CL1 = 2


def conj(*parts: Formula) -> Formula:
    """Left-nested conjunction of one or more formulae."""
    if not parts:
        raise ValueError("empty conjunction")
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def conjuncts(f: Formula) -> list:
    if isinstance(f, And):
        return conjuncts(f.left) + conjuncts(f.right)
    return [f]


# ---------------------------------------------------------------- lexer


class CLSyntaxError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


KEYWORDS = {"top", "bot", "ov", "all", "ex"}
IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<nl>\n)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op><->|->|<=|>=|==|<\.|<<|[\[\](),:~*+!&|])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # 'ident', 'op', 'nl', 'eof'
    text: str
    line: int
    col: int


def tokenize(text: str) -> list:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise CLSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        if kind == "nl":
            tokens.append(Token("nl", "\n", line, col))
            line += 1
            line_start = m.end()
        elif kind in ("ident", "op"):
            tokens.append(Token(kind, m.group(), line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


# ---------------------------------------------------------------- parser


class _Parser:
    def __init__(self, tokens: list):
        self.toks = tokens
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, text: str) -> bool:
        return self.tok.kind in ("op", "ident") and self.tok.text == text

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.tok
        return CLSyntaxError(msg, tok.line, tok.col)

    def expect(self, text: str) -> Token:
        if not self.at(text):
            found = self.tok.text or self.tok.kind
            if self.tok.kind in ("nl", "eof") and text in ")]":
                raise self.error(f"unbalanced bracket: expected {text!r}")
            raise self.error(f"expected {text!r}, found {found!r}")
        t = self.tok
        self.i += 1
        return t

    def ident(self) -> str:
        t = self.tok
        if t.kind != "ident" or t.text in KEYWORDS:
            raise self.error(f"expected identifier, found {t.text or t.kind!r}")
        self.i += 1
        return t.text

    # -- statements
    def statements(self) -> list:
        out = []
        while self.tok.kind != "eof":
            if self.tok.kind == "nl":
                self.i += 1
                continue
            out.append(self.formula())
            if self.tok.kind not in ("nl", "eof"):
                if self.at(")") or self.at("]"):
                    raise self.error(f"unbalanced bracket {self.tok.text!r}")
                raise self.error(f"unknown operator {self.tok.text!r}")
        return out

    # -- formulae, lowest precedence first
    def formula(self):
        return self.iff()

    def iff(self):
        left = self.implies()
        while self.at("<->"):
            self.i += 1
            left = Iff(left, self.implies())
        return left

    def implies(self):
        left = self.disj()
        if self.at("->"):
            self.i += 1
            return Implies(left, self.implies())
        return left

    def disj(self):
        left = self.conj()
        while self.at("|"):
            self.i += 1
            left = Or(left, self.conj())
        return left

    def conj(self):
        left = self.unary()
        while self.at("&"):
            self.i += 1
            left = And(left, self.unary())
        return left

    def unary(self):
        t = self.tok
        if self.at("!"):
            self.i += 1
            return Not(self.unary())
        if t.kind == "ident" and t.text in ("all", "ex"):
            self.i += 1
            var = self.ident()
            self.expect(":")
            body = self.formula()
            return Forall(var, body) if t.text == "all" else Exists(var, body)
        if self.at("("):
            self.i += 1
            f = self.formula()
            self.expect(")")
            return f
        return self.atom()

    def atom(self):
        t = self.tok
        if self.at("["):
            return self.bracket(None)
        if t.kind == "ident" and t.text not in KEYWORDS:
            nxt = self.peek()
            if nxt.text == ":":
                name = self.ident()
                self.expect(":")
                if not self.at("["):
                    raise self.error("expected '[' after contextualisation")
                return self.bracket(Variable(name))
            if nxt.text == "[":
                name = self.ident()
                self.expect("[")
                a = self.term()
                self.expect(",")
                b = self.term()
                self.expect("]")
                return Atom(Intersection(a, Variable(name)), b)
            if nxt.text == "(":
                name = self.ident()
                self.expect("(")
                args = [self.term()]
                while self.at(","):
                    self.i += 1
                    args.append(self.term())
                self.expect(")")
                return Call(name, tuple(args))
            raise self.error(f"bare identifier {t.text!r} is not a formula")
        if t.kind in ("nl", "eof"):
            raise self.error("unexpected end of statement")
        raise self.error(f"unknown operator {t.text!r}")

    def bracket(self, ctx):
        self.expect("[")
        lhs = self.term()
        op_tok = self.tok
        if op_tok.text == "<=":
            self.i += 1
            rhs = self.term()
            self.expect("]")
            if ctx is None:
                return Atom(lhs, rhs)
            return Atom(Intersection(lhs, ctx), rhs)
        if op_tok.text in SUGAR_OPS:
            self.i += 1
            rhs = self.term()
            self.expect("]")
            return Relation(op_tok.text, lhs, rhs, ctx)
        if op_tok.kind in ("nl", "eof"):
            raise self.error("unbalanced bracket: expected relation and ']'")
        raise self.error(f"unknown operator {op_tok.text!r}")

    # -- terms
    def term(self):
        left = self.meet()
        while self.at("+"):
            self.i += 1
            left = Sum(left, self.meet())
        return left

    def meet(self):
        left = self.term_unary()
        while self.at("*"):
            self.i += 1
            left = Intersection(left, self.term_unary())
        return left

    def term_unary(self):
        t = self.tok
        if self.at("~"):
            self.i += 1
            return Complement(self.term_unary())
        if self.at("("):
            self.i += 1
            inner = self.term()
            self.expect(")")
            return inner
        if t.kind == "ident":
            if t.text == "top":
                self.i += 1
                return Top()
            if t.text == "bot":
                self.i += 1
                return Bot()
            return Variable(self.ident())
        if t.kind in ("nl", "eof"):
            raise self.error("unbalanced bracket: term expected")
        raise self.error(f"unknown operator {t.text!r} in term")


def parse_formula(text: str) -> list:
    """Parse every statement of ``text`` (one per line)."""
    return _Parser(tokenize(text)).statements()


def parse_one(text: str) -> Formula:
    fs = parse_formula(text)
    if len(fs) != 1:
        raise CLSyntaxError(f"expected one statement, got {len(fs)}", 1, 1)
    return fs[0]


def parse_term(text: str) -> Term:
    p = _Parser(tokenize(text))
    t = p.term()
    if p.tok.kind not in ("nl", "eof"):
        raise p.error(f"unexpected {p.tok.text!r} after term")
    return t


# ---------------------------------------------------------------- printer

_TERM_PREC = {Sum: 1, Intersection: 2, Complement: 3}


def term_to_text(t: Term) -> str:
    if isinstance(t, Variable):
        return t.name
    if isinstance(t, Top):
        return "top"
    if isinstance(t, Bot):
        return "bot"
    if isinstance(t, Complement):
        inner = term_to_text(t.term)
        if isinstance(t.term, (Sum, Intersection)):
            inner = f"({inner})"
        return "~" + inner
    op = " * " if isinstance(t, Intersection) else " + "
    p = _TERM_PREC[type(t)]
    left, right = term_to_text(t.left), term_to_text(t.right)
    if _TERM_PREC.get(type(t.left), 9) < p:
        left = f"({left})"
    if _TERM_PREC.get(type(t.right), 9) <= p:
        right = f"({right})"
    return left + op + right


_FORM_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4, Not: 5, Forall: 0, Exists: 0}
_FORM_OP = {Iff: "<->", Implies: "->", Or: "|", And: "&"}


def to_text(f: Formula) -> str:
    """Print a formula so that :func:`parse_one` gives it back unchanged."""
    if isinstance(f, Atom):
        return f"[{term_to_text(f.lhs)} <= {term_to_text(f.rhs)}]"
    if isinstance(f, Relation):
        body = f"[{term_to_text(f.lhs)} {f.op} {term_to_text(f.rhs)}]"
        if f.ctx is None:
            return body
        if not isinstance(f.ctx, Variable):
            raise ValueError("only a variable can be printed as a context prefix")
        return f"{f.ctx.name}:{body}"
    if isinstance(f, Call):
        return f"{f.name}({', '.join(term_to_text(a) for a in f.args)})"
    if isinstance(f, Not):
        inner = to_text(f.body)
        if _FORM_PREC.get(type(f.body), 9) < 5:
            inner = f"({inner})"
        return "!" + inner
    if isinstance(f, (Forall, Exists)):
        kw = "all" if isinstance(f, Forall) else "ex"
        return f"{kw} {f.var}: {to_text(f.body)}"
    p = _FORM_PREC[type(f)]
    left, right = to_text(f.left), to_text(f.right)
    lp = _FORM_PREC.get(type(f.left), 9)
    rp = _FORM_PREC.get(type(f.right), 9)
    if isinstance(f, Implies):
        # right associative
        if lp <= p:
            left = f"({left})"
        if rp < p or rp == 0:
            right = f"({right})"
    else:
        if lp < p:
            left = f"({left})"
        if rp <= p:
            right = f"({right})"
    return f"{left} {_FORM_OP[type(f)]} {right}"


# ---------------------------------------------------------------- traversal


def term_vars(t: Term) -> set:
    if isinstance(t, Variable):
        return {t.name}
    if isinstance(t, (Top, Bot)):
        return set()
    if isinstance(t, Complement):
        return term_vars(t.term)
    return term_vars(t.left) | term_vars(t.right)


def formula_vars(f: Formula) -> set:
    """Free and bound context variables mentioned anywhere in ``f``."""
    if isinstance(f, Atom):
        return term_vars(f.lhs) | term_vars(f.rhs)
    if isinstance(f, Relation):
        out = term_vars(f.lhs) | term_vars(f.rhs)
        return out | (term_vars(f.ctx) if f.ctx is not None else set())
    if isinstance(f, Call):
        return set().union(*(term_vars(a) for a in f.args))
    if isinstance(f, Not):
        return formula_vars(f.body)
    if isinstance(f, (Forall, Exists)):
        return formula_vars(f.body) | {f.var}
    return formula_vars(f.left) | formula_vars(f.right)


def subst_term(t: Term, mapping: dict) -> Term:
    if isinstance(t, Variable):
        return mapping.get(t.name, t)
    if isinstance(t, (Top, Bot)):
        return t
    if isinstance(t, Complement):
        return Complement(subst_term(t.term, mapping))
    return type(t)(subst_term(t.left, mapping), subst_term(t.right, mapping))


def _fresh(base: str, avoid: set) -> str:
    k = 1
    while f"{base}_{k}" in avoid:
        k += 1
    return f"{base}_{k}"


def subst(f: Formula, mapping: dict) -> Formula:
    """Capture-avoiding substitution of terms for free variables."""
    if not mapping:
        return f
    if isinstance(f, Atom):
        return Atom(subst_term(f.lhs, mapping), subst_term(f.rhs, mapping))
    if isinstance(f, Relation):
        ctx = subst_term(f.ctx, mapping) if f.ctx is not None else None
        return Relation(f.op, subst_term(f.lhs, mapping), subst_term(f.rhs, mapping), ctx)
    if isinstance(f, Call):
        return Call(f.name, tuple(subst_term(a, mapping) for a in f.args))
    if isinstance(f, Not):
        return Not(subst(f.body, mapping))
    if isinstance(f, (Forall, Exists)):
        inner = {k: v for k, v in mapping.items() if k != f.var}
        incoming = set().union(set(), *(term_vars(v) for v in inner.values()))
        var, body = f.var, f.body
        if var in incoming:
            new = _fresh(var, incoming | formula_vars(body) | set(inner))
            body = subst(body, {var: Variable(new)})
            var = new
        return type(f)(var, subst(body, inner))
    return type(f)(subst(f.left, mapping), subst(f.right, mapping))


# ---------------------------------------------------------------- definitions


class Definitions:
    """User-extensible table of formula schemata ``name(p1, ..., pk) := body``."""

    def __init__(self, entries: dict | None = None):
        self.entries = dict(entries or {})

    def define(self, name: str, params, body) -> None:
        if isinstance(body, str):
            body = parse_one(body)
        self.entries[name] = (tuple(params), body)

    def define_text(self, line: str) -> None:
        m = re.match(r"\s*([A-Za-z_]\w*)\s*\(([^)]*)\)\s*:=\s*(.+)$", line)
        if m is None:
            raise CLSyntaxError(f"malformed definition: {line!r}", 1, 1)
        params = [p.strip() for p in m.group(2).split(",") if p.strip()]
        self.define(m.group(1), params, m.group(3))

    def copy(self) -> "Definitions":
        return Definitions(self.entries)

    def __contains__(self, name: str) -> bool:
        return name in self.entries

    def instantiate(self, name: str, args) -> Formula:
        if name not in self.entries:
            raise KeyError(f"unknown definition {name!r}")
        params, body = self.entries[name]
        if len(params) != len(args):
            raise ValueError(f"{name} takes {len(params)} arguments, got {len(args)}")
        return subst(body, dict(zip(params, args)))


# Temporal relations over causation ``c`` and containment ``t``,
# plus the tuple generator for instance-of.
# ``c:[i << j]`` is the strict order inside context c: [i*c <= j] & ![j*c <= i].
_T_INSIDE = "t:[i << j]"
_T_CONTAINS = "t:[j << i]"
_T_SAME = "t:[j == i]"
_T_OVERLAP = "[i*t ov j] & ![j*t <= i] & ![i*t <= j]"
_T_APART = "![i*t ov j]"
_C_EQUAL = "c:[i == j]"
_C_BEFORE = "c:[i << j]"
_C_AFTER = "c:[j << i]"

TEMPORAL_SCHEMATA = {
    "core": (_C_EQUAL, _T_INSIDE),
    "starts": (_C_BEFORE, _T_INSIDE),
    "finishes": (_C_AFTER, _T_INSIDE),
    "icore": (_C_EQUAL, _T_CONTAINS),
    "istarts": (_C_BEFORE, _T_CONTAINS),
    "ifinishes": (_C_AFTER, _T_CONTAINS),
    "qcore": (_C_EQUAL, _T_SAME),
    "qstarts": (_C_BEFORE, _T_SAME),
    "qfinishes": (_C_AFTER, _T_SAME),
    "qovlc": (_C_EQUAL, _T_OVERLAP),
    "ovlc": (_C_BEFORE, _T_OVERLAP),
    "iovlc": (_C_AFTER, _T_OVERLAP),
    "meets": (_C_EQUAL, _T_APART),
    "before": (_C_BEFORE, _T_APART),
    "after": (_C_AFTER, _T_APART),
}


def default_definitions() -> Definitions:
    d = Definitions()
    for name, (cpart, tpart) in TEMPORAL_SCHEMATA.items():
        d.define(name, ("i", "j"), f"{cpart} & {tpart}")
    d.define("isi", ("a", "b"), "ex e: [e <= isi] & [a * e <. a1] & [b * e <. a2]")
    return d


DEFAULT_DEFINITIONS = default_definitions()

# ---------------------------------------------------------------- expansion


def _contextualise(f: Formula, ctx: Term | None) -> Formula:
    if ctx is None:
        return f
    if isinstance(f, Atom):
        return Atom(Intersection(f.lhs, ctx), f.rhs)
    if isinstance(f, Not):
        return Not(_contextualise(f.body, ctx))
    return type(f)(_contextualise(f.left, ctx), _contextualise(f.right, ctx))


def _expand_relation(r: Relation) -> Formula:
    a, b = r.lhs, r.rhs
    if r.op == ">=":
        out = Atom(b, a)
    elif r.op == "==":
        out = And(Atom(a, b), Atom(b, a))
    elif r.op == "ov":
        out = Not(Atom(Intersection(a, b), Bot()))
    elif r.op == "<.":
        out = And(Not(Atom(Intersection(a, b), Bot())), Atom(a, b))
    elif r.op == "<<":
        out = And(Atom(a, b), Not(Atom(b, a)))
    else:
        raise ValueError(f"unknown relation {r.op!r}")
    return _contextualise(out, r.ctx)


def expand_defs(f: Formula, definitions: Definitions | None = None) -> Formula:
    """Replace every defined relation and schema call by core connectives and atoms."""
    defs = DEFAULT_DEFINITIONS if definitions is None else definitions
    if isinstance(f, Atom):
        return f
    if isinstance(f, Relation):
        return _expand_relation(f)
    if isinstance(f, Call):
        return expand_defs(defs.instantiate(f.name, f.args), defs)
    if isinstance(f, Not):
        return Not(expand_defs(f.body, defs))
    if isinstance(f, (Forall, Exists)):
        return type(f)(f.var, expand_defs(f.body, defs))
    return type(f)(expand_defs(f.left, defs), expand_defs(f.right, defs))


def fragment_of(f: Formula, definitions: Definitions | None = None) -> Fragment:
    f = expand_defs(f, definitions)

    def walk(g) -> Fragment:
        if isinstance(g, Atom):
            return Fragment.CLA
        if isinstance(g, And):
            return max(walk(g.left), walk(g.right))
        if isinstance(g, (Forall, Exists)):
            return Fragment.CL1
        if isinstance(g, Not):
            return max(Fragment.CL0, walk(g.body))
        return max(Fragment.CL0, walk(g.left), walk(g.right))

    return walk(f)
