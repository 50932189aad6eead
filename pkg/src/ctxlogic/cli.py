"""Command-line entry point: ``ctxlogic <command> ...``.

Exit status is 0 on success, 1 on bad input and 2 when an internal
invariant is violated.  Errors go to standard error.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import oracle
from .bitvec import DEFAULT_WIDTH
from .nl import LexiconError, NLParseError, default_lexicon, load_lexicon, lower_to_cla, parse_text, branch_to_text
from .pipeline import TROLLEY, captions_for, image_text, write_images
from .reasoner import (
    Entailment,
    FragmentError,
    KnowledgeBase,
    assert_atom,
    entails,
    expected_missed_exact,
    miss_probability_estimate,
    model_fraction,
    query,
    symbols_of,
)
from .scales import DEFAULT_BAND, assert_scale, classify, normalized
from .syntax import Atom, CLSyntaxError, Relation, expand_defs, conjuncts, fragment_of, parse_formula, parse_one, to_text
from .temporal import EventExtent, classify as classify_temporal

SEED_ENV = "CTX_ABVM_SEED"
MIN_KAPPA = 64


class InputError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise InputError(f"{SEED_ENV} must be an integer, got {env!r}") from None


def _lexicon(args):
    if args.lexicon:
        return load_lexicon(_read(args.lexicon))
    return default_lexicon()


def _load_kb(path: str, kappa: int, seed: int):
    statements = parse_formula(_read(path))
    lowered = lower_to_cla(statements)
    kb = KnowledgeBase(kappa=kappa, seed=seed)
    for atom in lowered.atoms:
        assert_atom(kb, atom)
    return kb, lowered


def _diagnostics(kb: KnowledgeBase, atoms) -> list:
    n = max(1, len(symbols_of(atoms)))
    return [
        f"symbols: {n}  kappa: {kb.kappa}  seed: {kb.seed}",
        f"model fraction: {float(model_fraction(kb)):.6f}",
        f"miss probability 2^n/kappa: {float(miss_probability_estimate(n, kb.kappa)):.6g}",
        f"expected missed assignments 2^n(1-2^-n)^kappa: {_sci(expected_missed_exact(n, kb.kappa))}",
    ]


def _sci(q: Fraction) -> str:
    # exact rationals far below the float range
    if q == 0:
        return "0"
    exp = math.floor(math.log10(q.numerator) - math.log10(q.denominator))
    mant = q / Fraction(10) ** exp if exp >= 0 else q * Fraction(10) ** -exp
    return f"{float(mant):.4f}e{exp:+d}"


# ---------------------------------------------------------------- commands


def cmd_parse(args) -> int:
    for f in parse_formula(_read(args.input)):
        print(to_text(f))
        print(f"  ast: {f!r}")
        print(f"  expanded: {to_text(expand_defs(f))}")
        print(f"  fragment: {fragment_of(f).name}")
    return 0


def _query_atoms(q) -> list:
    out = []
    for part in conjuncts(expand_defs(q)):
        if isinstance(part, Atom):
            out.append(part)
    return out


def cmd_reason(args) -> int:
    kappa, seed = args.kappa, _seed(args)
    kb, lowered = _load_kb(args.kb, kappa, seed)
    q = parse_one(args.query)
    qatoms = _query_atoms(q)
    if args.exact:
        g = expand_defs(q)
        if isinstance(q, Relation) and q.op == "<<":
            nonstrict, converse = conjuncts(g)
            ok = oracle.exact_entails(lowered.atoms, nonstrict) and not oracle.exact_entails(lowered.atoms, converse.body)
            print("entailed (strict)" if ok else "refuted")
        else:
            if fragment_of(g).name != "CLA":
                raise FragmentError(q, fragment_of(g), f"--exact supports atoms, conjunctions and << only")
            bad = [a for a in conjuncts(g) if not oracle.exact_entails(lowered.atoms, a)]
            if bad:
                cm = oracle.countermodel(lowered.atoms, bad[0])
                frac = oracle.violating_fraction(lowered.atoms, bad[0])
                print("refuted")
                print("countermodel: " + " ".join(f"{k}={int(v)}" for k, v in cm.items()))
                print(f"violating fraction: {frac}")
            else:
                print("entailed")
        n = len(symbols_of(lowered.atoms + qatoms))
        print(f"symbols: {n}  exact enumeration over {2 ** n} assignments")
        return 0
    result = query(kb, q)
    print(str(result))
    for line in _diagnostics(kb, lowered.atoms + qatoms):
        print(line)
    if isinstance(result, Entailment) and result.inconsistent:
        print("warning: knowledge base is inconsistent", file=sys.stderr)
    for sc in lowered.side_conditions:
        n = entails(kb, sc.atom).countermodels
        print(f"side condition {sc}: {'ok' if n else 'NO WITNESS'} ({n})")
    return 0


def cmd_scale(args) -> int:
    kb, lowered = _load_kb(args.kb, args.kappa, _seed(args))
    record = assert_scale(kb, args.subject, args.dim, args.side, args.hedge)
    for a in lowered.atoms:
        print(to_text(a))
    print(f"# scale({record.subject}, {record.dimension}, {record.side.value}, {record.hedge.value}) draws={list(record.draw_ids)}")
    place = classify(kb, args.dim, args.subject, Fraction(args.band))
    print(f"{args.subject} on {args.dim}: {place.value} (normalized {float(normalized(kb, args.dim, args.subject)):.4f})")
    return 0


def cmd_temporal(args) -> int:
    nums = list(args.values)
    if nums and nums[0] == "classify":
        nums = nums[1:]
    if len(nums) != 6:
        raise InputError("temporal expects two triples: c t_start t_end  c t_start t_end")
    try:
        vals = [Fraction(v) for v in nums]
    except (ValueError, ZeroDivisionError):
        raise InputError(f"not a number among {nums}") from None
    try:
        i, j = EventExtent(*vals[:3]), EventExtent(*vals[3:])
    except ValueError as exc:
        raise InputError(str(exc)) from None
    print(classify_temporal(i, j).value)
    return 0


def _formats(fmt: str) -> tuple:
    return ("csv", "svg") if fmt == "svg" else (fmt,)


def _image(text: str, stem: str, args, dims=None) -> int:
    discourse, images = image_text(text, args.kappa, _seed(args), dims, _lexicon(args))
    for w in discourse.warnings:
        print(f"warning: {w}", file=sys.stderr)
    if args.format == "text":
        for img in images:
            print(branch_to_text(img.model.branch), end="")
        return 0
    for p in write_images(images, stem, args.out_dir, _formats(args.format), captions=captions_for(discourse)):
        print(p)
    return 0


def cmd_image(args) -> int:
    dims = [d for d in args.dims.split(",") if d] if args.dims else None
    stem = "stdin" if args.input == "-" else Path(args.input).stem
    return _image(_read(args.input), stem, args, dims)


def cmd_compile(args) -> int:
    discourse = parse_text(_read(args.input), _lexicon(args))
    for b in discourse.branches:
        print(branch_to_text(b), end="")
    return 0


def cmd_demo(args) -> int:
    if args.name != "trolley":
        raise InputError(f"unknown demo {args.name!r}")
    return _image(TROLLEY, "trolley", args)


# ---------------------------------------------------------------- wiring


def _kappa(text: str) -> int:
    k = int(text)
    if k < MIN_KAPPA:
        raise argparse.ArgumentTypeError(f"kappa must be at least {MIN_KAPPA}")
    return k


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--kappa", type=_kappa, default=DEFAULT_WIDTH, help="vector width (default %(default)s)")
    common.add_argument("--seed", type=int, default=None, help=f"RNG seed (default 0, or ${SEED_ENV})")
    common.add_argument("--exact", action="store_true", help="answer with exact truth-table enumeration")
    common.add_argument("--format", choices=("csv", "svg", "text"), default="svg", help="output format (default %(default)s)")
    common.add_argument("--lexicon", default=None, help="lexicon TSV (default: bundled vocabulary)")
    common.add_argument("--out-dir", default=".", help="directory for image files (default %(default)s)")

    p = argparse.ArgumentParser(prog="ctxlogic", description="Context Logic on activation bit vectors")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("parse", parents=[common], help="parse CL statements and dump their ASTs")
    s.add_argument("input", help="file of CL statements, or - for stdin")
    s.set_defaults(func=cmd_parse)

    s = sub.add_parser("reason", parents=[common], help="query a knowledge base file")
    s.add_argument("kb")
    s.add_argument("query")
    s.set_defaults(func=cmd_reason)

    s = sub.add_parser("scale", parents=[common], help="place a subject on a dimension and classify it")
    s.add_argument("kb")
    s.add_argument("dim")
    s.add_argument("subject")
    s.add_argument("--side", choices=("above", "below"), default="above")
    s.add_argument("--hedge", choices=("somewhat", "none", "very"), default="none")
    s.add_argument("--band", default=str(DEFAULT_BAND), help="average band half-width (default %(default)s)")
    s.set_defaults(func=cmd_scale)

    s = sub.add_parser("temporal", parents=[common], help="classify two events given as c t_start t_end triples")
    s.add_argument("values", nargs="+")
    s.set_defaults(func=cmd_temporal)

    s = sub.add_parser("compile", parents=[common], help="compile English text to CL, one block per branch")
    s.add_argument("input")
    s.set_defaults(func=cmd_compile)

    s = sub.add_parser("image", parents=[common], help="compile text and write per-branch layouts")
    s.add_argument("input")
    s.add_argument("--dims", default=None, help="comma-separated dimensions (default: those the text uses)")
    s.set_defaults(func=cmd_image)

    s = sub.add_parser("demo", parents=[common], help="run a bundled example (trolley)")
    s.add_argument("name")
    s.set_defaults(func=cmd_demo)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, CLSyntaxError, NLParseError, LexiconError, FragmentError, KeyError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 1
    except (AssertionError, RuntimeError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
