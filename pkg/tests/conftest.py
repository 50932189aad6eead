import hypothesis.strategies as st
from hypothesis import settings

from ctxlogic.syntax import (
    And,
    Atom,
    Bot,
    Call,
    Complement,
    Exists,
    Forall,
    Iff,
    Implies,
    Intersection,
    Not,
    Or,
    Relation,
    Sum,
    Top,
    Variable,
)

settings.register_profile("default", max_examples=150, deadline=None)
settings.load_profile("default")

NAMES = ["a", "b", "c", "n", "x", "e_1", "Foo"]

variables = st.sampled_from(NAMES).map(Variable)

terms = st.recursive(
    st.one_of(variables, st.just(Top()), st.just(Bot())),
    lambda inner: st.one_of(
        inner.map(Complement),
        st.builds(Intersection, inner, inner),
        st.builds(Sum, inner, inner),
    ),
    max_leaves=6,
)

atoms = st.builds(Atom, terms, terms)
relations = st.builds(
    Relation,
    st.sampled_from([">=", "==", "ov", "<.", "<<"]),
    terms,
    terms,
    st.one_of(st.none(), variables),
)
calls = st.builds(
    Call,
    st.sampled_from(["starts", "before", "qovlc"]),
    st.tuples(terms, terms),
)

formulas = st.recursive(
    st.one_of(atoms, relations, calls),
    lambda inner: st.one_of(
        inner.map(Not),
        st.builds(And, inner, inner),
        st.builds(Or, inner, inner),
        st.builds(Implies, inner, inner),
        st.builds(Iff, inner, inner),
        st.builds(Forall, st.sampled_from(["x", "y"]), inner),
        st.builds(Exists, st.sampled_from(["e", "y"]), inner),
    ),
    max_leaves=6,
)


# ---- acceptance report: one PASS/FAIL line per criterion at the end of the run

ACCEPTANCE_DETAILS: dict = {}
_ACCEPTANCE_OUTCOMES: dict = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::" not in report.nodeid:
        return
    if report.when == "call" or report.outcome != "passed":
        _ACCEPTANCE_OUTCOMES.setdefault(report.nodeid, report.outcome)
        if report.outcome == "failed":
            _ACCEPTANCE_OUTCOMES[report.nodeid] = "failed"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, outcome in _ACCEPTANCE_OUTCOMES.items():
        name = nodeid.split("::")[-1]
        word = {"passed": "PASS", "failed": "FAIL"}.get(outcome, outcome.upper())
        detail = ACCEPTANCE_DETAILS.get(name, "")
        terminalreporter.write_line(f"{word}  {name}  {detail}".rstrip())
