"""Command-line entry point (``wnash``).

Exit status: 0 when the decision is YES or the property holds, 1 when it is
NO or fails, 2 on usage or input errors.
"""
from __future__ import annotations

import argparse
import os
import sys

from . import formats
from .circuit import DEFAULT_CAP
from .errors import ValidationError, WnashError
from .games import solve
from .model import CircuitSystem, StrategyProfile, unfold

EXIT_YES, EXIT_NO, EXIT_ERROR = 0, 1, 2


class UsageError(WnashError):
    pass


def parse_coalition(text: str) -> frozenset:
    """``none`` or comma-separated distinct agent indices."""
    if text.strip() == "none":
        return frozenset()
    try:
        items = [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"bad coalition {text!r}; use e.g. 0,2 or none") from None
    if len(set(items)) != len(items) or any(i < 0 for i in items):
        raise UsageError(f"coalition {text!r} must list distinct non-negative indices")
    return frozenset(items)


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load(path: str, kinds=None):
    text = _read(path)
    kind = formats.detect_kind(text)
    if kinds and kind not in kinds:
        raise UsageError(f"{path}: expected one of {', '.join(kinds)}, got {kind}")
    return formats.PARSERS[kind](text)


def _emit(out, doc):
    out.write(formats.serialize_document(doc) if isinstance(doc, formats.Document) else doc)


def cmd_validate(args, out):
    text = _read(args.file)
    try:
        kind = formats.detect_kind(text)
        formats.PARSERS[kind](text)
    except ValidationError as exc:
        out.write("invalid\n" + "".join(f"  {type(p).__name__}: {p}\n" for p in exc.problems))
        return EXIT_NO
    except WnashError as exc:
        out.write(f"invalid\n  {exc}\n")
        return EXIT_NO
    out.write(f"ok {kind}\n")
    return EXIT_YES


def cmd_unfold(args, out):
    csys = _load(args.file, ("cmas",))
    _emit(out, formats.serialize_emas(unfold(csys, args.cap)))
    return EXIT_YES


def cmd_solve_game(args, out):
    g = _load(args.file, ("game",))
    if g.init is None:
        raise UsageError("game has no init state")
    part = solve(g)
    winner = 0 if g.init in part.win0 else 1
    doc = formats.Document("verdict").add("problem", "solve-game").add("answer", "YES" if winner == 0 else "NO")
    doc.add("winner", winner)
    doc.add("win0", " ".join(str(s) for s in g.states if s in part.win0))
    doc.add("win1", " ".join(str(s) for s in g.states if s in part.win1))
    _emit(out, doc)
    return EXIT_YES if winner == 0 else EXIT_NO


def cmd_realize(args, out):
    from .realizability import realize

    system = _load(args.file, ("emas", "cmas"))
    verdict = realize(system, parse_coalition(args.coalition), args.cap)
    doc = formats.realize_verdict_doc(verdict)
    if not args.witness:
        doc.entries = doc.entries[:4]
    _emit(out, doc)
    return EXIT_YES if verdict.answer else EXIT_NO


def cmd_verify(args, out):
    from .verification import verify

    system = _load(args.file, ("emas", "cmas"))
    want = ("ctrans",) if isinstance(system, CircuitSystem) else ("etrans",)
    profile = StrategyProfile(tuple(_load(p, want) for p in args.profile))
    W = parse_coalition(args.coalition)
    verdict = verify(system, profile, W)
    _emit(out, formats.verify_verdict_doc(verdict, W))
    return EXIT_YES if verdict.is_WNE else EXIT_NO


def cmd_gen(args, out):
    from . import gadgets

    if args.reduction == "a3":
        docs = gadgets.game_to_system(_load(args.input, ("game",)))
        names = ["system.emas"]
    else:
        if args.n is None:
            raise UsageError(f"gen {args.reduction} needs --n")
        if args.reduction == "a4":
            docs = gadgets.atm_to_circuit_system(_load(args.input, ("atm",)), args.n)
            names = ["system.cmas"]
        else:
            m = _load(args.input, ("dtm",))
            fn = gadgets.dtm_to_turnbased if args.reduction == "a6" else gadgets.dtm_to_one_agent_circuit
            system, profile, W = fn(m, args.n)
            docs = (system, *profile, W)
            ext = "etrans" if args.reduction == "a6" else "ctrans"
            names = [f"system.{'emas' if args.reduction == 'a6' else 'cmas'}"]
            names += [f"p{i}.{ext}" for i in range(len(profile))]
    *objects, W = docs
    texts = [formats.serialize_any(obj) for obj in objects]
    coalition = ",".join(map(str, sorted(W))) or "none"
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        for name, text in zip(names, texts):
            with open(os.path.join(args.out, name), "w", encoding="utf-8") as fh:
                fh.write(text)
        out.write(f"wrote {' '.join(names)} to {args.out}\ncoalition: {coalition}\n")
    else:
        out.write(f"# coalition: {coalition}\n" + "---\n".join(texts))
    return EXIT_YES


def cmd_oracle(args, out):
    from .oracle import consistency_suite

    report = consistency_suite(args.seed, args.count)
    _emit(out, formats.suite_report_doc(report))
    return EXIT_YES if report.passed else EXIT_NO


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wnash", description="Nash-equilibrium realizability and verification.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="parse and validate any document")
    s.add_argument("file")
    s.set_defaults(fn=cmd_validate)

    s = sub.add_parser("unfold", help="expand a circuit system into an explicit one")
    s.add_argument("file")
    s.add_argument("--cap", type=int, default=DEFAULT_CAP)
    s.set_defaults(fn=cmd_unfold)

    s = sub.add_parser("solve-game", help="solve a reachability game")
    s.add_argument("file")
    s.set_defaults(fn=cmd_solve_game)

    s = sub.add_parser("realize", help="decide whether an equilibrium with winners W exists")
    s.add_argument("file")
    s.add_argument("--coalition", required=True)
    s.add_argument("--witness", action="store_true", help="include the lasso and certificate")
    s.add_argument("--cap", type=int, default=DEFAULT_CAP)
    s.set_defaults(fn=cmd_realize)

    s = sub.add_parser("verify", help="check whether a profile is an equilibrium with winners W")
    s.add_argument("file")
    s.add_argument("--profile", nargs="+", required=True)
    s.add_argument("--coalition", required=True)
    s.set_defaults(fn=cmd_verify)

    s = sub.add_parser("gen", help="emit a reduction gadget")
    s.add_argument("reduction", choices=("a3", "a4", "a6", "a7"))
    s.add_argument("input")
    s.add_argument("--n", type=int, help="tape length (machine reductions)")
    s.add_argument("--out", help="directory for the generated files")
    s.set_defaults(fn=cmd_gen)

    s = sub.add_parser("oracle", help="run the randomized cross-check suite")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--count", type=int, default=20)
    s.set_defaults(fn=cmd_oracle)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_YES
    try:
        return args.fn(args, out)
    except ValidationError as exc:
        sys.stderr.write("error: invalid input\n" + "".join(f"  {type(p).__name__}: {p}\n" for p in exc.problems))
    except (WnashError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
