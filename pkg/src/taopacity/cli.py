"""``taopacity`` command line.

Exit status: 0 when every check passes, 1 when any check fails (for
opacity checks: the system is not opaque), 2 for usage, parse, model or
configuration errors, 3 when a result fails internal self-revalidation.
"""

from __future__ import annotations

import argparse
import sys
from importlib import resources
from pathlib import Path

from .errors import InvariantViolation, OpacityError
from .modelfile import parse_model
from .report import run_checks

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


def corpus_dir():
    return resources.files("taopacity") / "corpus"


def _resolve(path: str):
    """A filesystem path, or the name of a bundled corpus file (``fig2.ta``)."""
    p = Path(path)
    if p.exists():
        return p
    bundled = corpus_dir() / path
    if bundled.is_file():
        return bundled
    raise FileNotFoundError(path)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="taopacity", description="Bounded opacity checks for timed automata.")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="run the checks declared in a model file")
    check.add_argument("file", help="model file, or the name of a bundled corpus file")
    check.add_argument("--only", action="append", metavar="NAME", help="run only this check (repeatable)")
    check.add_argument("--stable", action="store_true", help="omit timings so output is byte-reproducible")
    check.add_argument("--format", choices=("text", "json"), default="text")
    check.add_argument("--witnesses", type=int, default=1, metavar="N", help="witnesses to print per check")

    sub.add_parser("corpus", help="list the bundled corpus files")
    return parser


def _cmd_check(args, out) -> int:
    if args.witnesses < 0:
        raise SystemExit("--witnesses must be non-negative")
    path = _resolve(args.file)
    text = path.read_text(encoding="utf-8")
    doc = parse_model(text)
    report = run_checks(doc, only=args.only, stable=args.stable, witnesses=args.witnesses, text=text, source=path.name)
    out.write(report.to_json() if args.format == "json" else report.to_text())
    return EXIT_OK if report.all_passed else EXIT_FAIL


def _cmd_corpus(args, out) -> int:
    for entry in sorted(corpus_dir().iterdir(), key=lambda p: p.name):
        if entry.name.endswith(".ta"):
            first = entry.read_text(encoding="utf-8").splitlines()[0].lstrip("# ").strip()
            out.write(f"{entry.name}\t{first}\n")
    return EXIT_OK


def main(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        if args.command == "check":
            return _cmd_check(args, out)
        return _cmd_corpus(args, out)
    except InvariantViolation as exc:
        err.write(f"internal error: {exc}\n")
        return EXIT_INTERNAL
    except (OpacityError, OSError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        err.write(f"error: {msg}\n")
        return EXIT_USAGE
    except SystemExit as exc:
        err.write(f"error: {exc.code}\n")
        return EXIT_USAGE


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
