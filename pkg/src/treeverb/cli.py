"""Command-line front end.  Exit codes: 0 success, 1 domain error, 2 parse or usage error."""
from __future__ import annotations

import argparse
import contextlib
import io
import sys
from pathlib import Path
from typing import Sequence

from .constructions import (
    ConstructionError,
    WitnessError,
    adding_machine,
    commutator_form,
    conjugator_to_odometer,
    decompose_transitive_pair,
    order_two_rep,
    spine_automaton,
)
from .core import (
    DegreeMismatch,
    TreeAutomorphism,
    apply,
    commutator,
    conjugate,
    equals,
    format_vertex,
    parse_vertex,
    truncate,
)
from .dsl import ParseError, load, parse, parse_spine, serialize
from .parity import ParitySequence, chain_scope_note, classify_chain, level_parities, parity_sequence
from .quotient import GroupTooLarge, verify_chain


class DomainError(Exception):
    pass


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _write_machine(g: TreeAutomorphism, path: Path) -> None:
    text = serialize(g)
    if not equals(parse(text), g):
        raise WitnessError(f"serialization of {path.name} does not round-trip")
    path.write_text(text, encoding="utf-8")


def _out_dir(path: str) -> Path:
    p = Path(path)
    p.mkdir(parents=True, exist_ok=True)
    return p


def _vertex(text: str, d: int):
    try:
        v = parse_vertex(text)
    except ValueError as exc:
        raise UsageError(f"bad vertex {text!r}: {exc}") from None
    if any(not 1 <= x <= d for x in v):
        raise UsageError(f"vertex {text!r} has a letter outside 1..{d}")
    return v


def cmd_apply(args) -> None:
    g = load(args.file)
    print(format_vertex(apply(g, _vertex(args.vertex, g.degree))))


def cmd_parity(args) -> None:
    g = load(args.file)
    if args.levels is not None:
        if args.levels < 0:
            raise UsageError("--levels must be non-negative")
        print("".join(map(str, level_parities(g, args.levels))))
    else:
        print(parity_sequence(g))


def cmd_classify(args) -> None:
    g = load(args.file)
    print(classify_chain(g))
    note = chain_scope_note(g.degree)
    if note:
        print(note, file=sys.stderr)


def cmd_decompose(args) -> None:
    g = load(args.file)
    w = decompose_transitive_pair(g, args.depth)
    if not w.verify():
        raise WitnessError("decomposition witness failed re-verification")
    out = _out_dir(args.out)
    _write_machine(w.u, out / "u.aut")
    _write_machine(w.y, out / "y.aut")
    line = w.manifest()
    (out / "manifest").write_text(line + "\n", encoding="utf-8")
    print(line)


def cmd_commutator_form(args) -> None:
    g = load(args.file)
    a, b = commutator_form(g, args.depth)
    t = adding_machine(g.degree)
    if truncate(commutator(conjugate(t, a), b), args.depth) != truncate(g, args.depth):
        raise WitnessError("commutator witness failed re-verification")
    out = _out_dir(args.out)
    _write_machine(a, out / "a.aut")
    _write_machine(b, out / "b.aut")
    line = f"depth={args.depth} verified=true"
    (out / "manifest").write_text(line + "\n", encoding="utf-8")
    print(line)


def cmd_conjugate_to_odometer(args) -> None:
    spec = parse_spine(Path(args.file).read_text(encoding="utf-8"))
    a = spine_automaton(spec)
    x = conjugator_to_odometer(spec)
    if not equals(conjugate(a, x), adding_machine(spec.degree)):
        raise WitnessError("spine conjugator failed re-verification")
    out = _out_dir(args.out)
    _write_machine(a, out / "spine.aut")
    _write_machine(x, out / "x.aut")
    line = "exact=true verified=true"
    (out / "manifest").write_text(line + "\n", encoding="utf-8")
    print(line)


def cmd_order_two(args) -> None:
    try:
        eps = ParitySequence.parse(args.parity)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    a = order_two_rep(eps, args.degree)
    if not (a * a).is_identity() or parity_sequence(a) != eps:
        raise WitnessError("order-two representative failed re-verification")
    _write_machine(a, Path(args.out))
    print(f"parity={eps} order2=true")


def cmd_verify_chain(args) -> int:
    report = verify_chain(args.degree, args.depth, args.limit)
    for line in report.lines():
        print(line)
    return 0 if report.passed else 1


def cmd_selftest(args) -> int:
    from .acceptance import run_all

    results = run_all()
    for r in results:
        print(r.line())
    return 0 if all(r.passed and r.within_budget for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="treeverb", description="Exact arithmetic on regular rooted tree automorphisms.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    s = sub.add_parser("apply", help="image of a vertex")
    s.add_argument("file")
    s.add_argument("--vertex", required=True, help='comma-separated letters, e.g. "3,1"')
    s.set_defaults(func=cmd_apply)

    s = sub.add_parser("parity", help="level parities or the exact parity sequence")
    s.add_argument("file")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--levels", type=int)
    g.add_argument("--exact", action="store_true")
    s.set_defaults(func=cmd_parity)

    s = sub.add_parser("classify", help="position in the M_k chain")
    s.add_argument("file")
    s.set_defaults(func=cmd_classify)

    for name, func, help_ in (
        ("decompose", cmd_decompose, "g = u u^y modulo St(N)"),
        ("commutator-form", cmd_commutator_form, "g = [t^a, b] modulo St(N)"),
    ):
        s = sub.add_parser(name, help=help_)
        s.add_argument("file")
        s.add_argument("--depth", type=int, required=True)
        s.add_argument("--out", required=True)
        s.set_defaults(func=func)

    s = sub.add_parser("conjugate-to-odometer", help="exact conjugator from a spine element to t")
    s.add_argument("file")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_conjugate_to_odometer)

    s = sub.add_parser("order-two", help="order-two element with a given parity sequence")
    s.add_argument("--degree", type=int, required=True)
    s.add_argument("--parity", required=True, help='e.g. "pre=1;per=01"')
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_order_two)

    s = sub.add_parser("verify-chain", help="check the chain identities in G_n")
    s.add_argument("--degree", type=int, required=True)
    s.add_argument("--depth", type=int, required=True)
    s.add_argument("--limit", type=int)
    s.set_defaults(func=cmd_verify_chain)

    s = sub.add_parser("selftest", help="run the acceptance checks")
    s.set_defaults(func=cmd_selftest)
    return p


def _dispatch(argv: Sequence[str]) -> int:
    try:
        args = build_parser().parse_args(list(argv))
        code = args.func(args)
        return 0 if code is None else code
    except (UsageError, ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ConstructionError, GroupTooLarge, DegreeMismatch, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def run_command(argv: Sequence[str]) -> tuple[int, str, str]:
    """Run one command; returns ``(exit code, stdout, stderr)``."""
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = _dispatch(argv)
    return code, out.getvalue(), err.getvalue()


def main(argv: Sequence[str] | None = None) -> int:
    return _dispatch(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
