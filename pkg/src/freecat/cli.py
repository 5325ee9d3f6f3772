"""Command-line interface.

Exit codes: 0 success or equal, 1 unequal (or a failed self-test), 2 type
error, 3 parse error, 4 I/O or configuration error.
"""
from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from .engine import LEVELS, Engine, decide_eq
from .errors import (
    LevelError,
    ModelError,
    NoDaggerError,
    ParseError,
    ScalarMonoidError,
    SignatureError,
    TypeMismatch,
)
from .freecc import PolarObject, strong_axiom_check
from .models import KINDS, Interpretation, evaluate, phi_of, random_interpretation
from .oracle import DirectEvaluator, functor_check
from .render import format_normal_form, render_dot
from .scalars import FREE, PhiScalars
from .signature import parse_model, parse_signature
from .syntax import parse

EXIT_OK, EXIT_UNEQUAL, EXIT_TYPE, EXIT_PARSE, EXIT_CONFIG = 0, 1, 2, 3, 4


def load_signature(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise SignatureError(f"cannot read {path}: {exc.strerror}") from None
    return parse_signature(text)


def default_level(sig) -> str:
    return "scc" if sig.has_dagger else "cc"


def cmd_check(args) -> int:
    sig = load_signature(args.sig)
    print(f"ok: {len(sig.objects)} objects, {len(sig.arrows)} arrows")
    print(f"dagger pairing: {'yes' if sig.has_dagger else 'no'}")
    print(f"scalars: {sig.scalar_kind}")
    if sig.dims or sig.matrices:
        interp = Interpretation.from_signature(sig)
        print(f"interpretation: {interp.kind} matrices, dims " + ", ".join(f"{o}={interp.dim(o)}" for o in sig.objects))
    return EXIT_OK


def cmd_normalize(args) -> int:
    sig = load_signature(args.sig)
    eng = Engine(sig, args.level)
    nf = eng.normalize(parse(args.term))
    print(format_normal_form(nf, eng.monoid))
    return EXIT_OK


def cmd_eq(args) -> int:
    sig = load_signature(args.sig)
    eng = Engine(sig, args.level)
    verdict = decide_eq(parse(args.left), parse(args.right), args.level, sig, eng.monoid)
    print("equal" if verdict.equal else "not equal")
    print("  left  " + format_normal_form(verdict.left, eng.monoid))
    print("  right " + format_normal_form(verdict.right, eng.monoid))
    return EXIT_OK if verdict.equal else EXIT_UNEQUAL


def cmd_eval(args) -> int:
    sig = load_signature(args.sig)
    try:
        dims, tables = parse_model(Path(args.model).read_text())
    except OSError as exc:
        raise ModelError(f"cannot read {args.model}: {exc.strerror}") from None
    kind = args.semiring
    if kind is None:
        has_im = any(im for rows in tables.values() for r in rows for _, im in r)
        kind = "gaussian-int" if has_im else "int"
    interp = Interpretation.from_tables(sig, kind, dims, tables)
    level = args.level or default_level(sig)
    monoid = PhiScalars(kind, phi_of(interp)) if level == "scc-scalars" else FREE
    term = parse(args.term)
    nf = Engine(sig, level, monoid).normalize(term)
    m = evaluate(nf, interp, monoid)
    direct, _, _ = DirectEvaluator(interp).eval(term)
    print(m)
    if direct != m:
        print(f"mismatch: direct evaluation gives {direct}", file=sys.stderr)
        return EXIT_UNEQUAL
    return EXIT_OK


def cmd_render(args) -> int:
    sig = load_signature(args.sig)
    eng = Engine(sig, args.level)
    nf = eng.normalize(parse(args.term))
    dot = render_dot(nf, eng.monoid)
    if args.output == "-":
        sys.stdout.write(dot)
    else:
        try:
            Path(args.output).write_text(dot)
        except OSError as exc:
            raise ModelError(f"cannot write {args.output}: {exc.strerror}") from None
    return EXIT_OK


def cmd_selftest(args) -> int:
    sig = load_signature(args.sig)
    rng = random.Random(args.seed)
    interps = [random_interpretation(sig, kind, rng) for kind in ("bool", "gaussian-int")]
    ok = True
    for level in LEVELS:
        if level in ("scc", "scc-scalars") and not sig.has_dagger:
            continue
        for report in functor_check(sig, interps, level, args.seed, args.cases):
            print(report)
            ok = ok and report.ok
    if sig.has_dagger:
        for _ in range(min(args.cases, 50)):
            a = PolarObject(
                tuple(rng.choice(sig.objects) for _ in range(rng.randint(0, 2))),
                tuple(rng.choice(sig.objects) for _ in range(rng.randint(0, 2))),
            )
            good, report = strong_axiom_check(sig, a)
            if not good:
                print(f"strong axioms fail at {a}:\n{report}")
                ok = False
        print("strong compact closure axioms: " + ("ok" if ok else "FAILED"))
    return EXIT_OK if ok else EXIT_UNEQUAL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="freecat", description="Free monoidal categories: normal forms and the word problem.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="validate a signature file")
    p.add_argument("sig")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("normalize", help="print the normal form of a term")
    p.add_argument("--sig", required=True)
    p.add_argument("--level", required=True, choices=LEVELS)
    p.add_argument("term")
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("eq", help="decide whether two terms are equal")
    p.add_argument("--sig", required=True)
    p.add_argument("--level", required=True, choices=LEVELS)
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(func=cmd_eq)

    p = sub.add_parser("eval", help="evaluate a term in a matrix model")
    p.add_argument("--sig", required=True)
    p.add_argument("--model", required=True, help="file of 'interpret' lines")
    p.add_argument("--level", choices=LEVELS, help="default: scc with a dagger pairing, else cc")
    p.add_argument("--semiring", choices=KINDS, help="default: int, or gaussian-int if any entry is imaginary")
    p.add_argument("term")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("render", help="write the normal form as a Graphviz diagram")
    p.add_argument("--sig", required=True)
    p.add_argument("--level", required=True, choices=LEVELS)
    p.add_argument("-o", "--output", required=True, help="output path, or - for stdout")
    p.add_argument("term")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("selftest", help="random soundness checks against both matrix models")
    p.add_argument("--sig", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cases", type=int, default=200)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (LevelError, TypeMismatch, NoDaggerError) as exc:
        print(f"type error: {exc}", file=sys.stderr)
        return EXIT_TYPE
    except (SignatureError, ModelError, ScalarMonoidError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
