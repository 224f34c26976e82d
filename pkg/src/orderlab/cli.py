"""Command line entry point.

Verbs:

    normalize TERM
    iso | embed | cvx | bicvx  TERM TERM
    condense TERM
    classify TERM
    intervals {closed|final|initial} TERM
    reduce MAP ARGS...         maps: phi0..phi3 psi circ_iso circ_pcvx e1
    circ {iso_c|embed_c|cvx_c|pcvx} C[...] C[...]
    arc ARCDESC ARCDESC
    knot KNOTDESC KNOTDESC
    corpus run DIR
    verify REPORTFILE

Exit codes: 0 when the command decided or produced a value, 2 when the
outcome is unknown, 1 on errors.  --format picks text (default) or
json; both serializations are accepted back by verify.

Corpus files are plain text.  Each line is a command and its expected
outcome, separated by " | ": first the verb, then every argument, last
the expected outcome.  Blank lines and lines starting with # are
skipped.
"""

import argparse
import sys
from pathlib import Path
from typing import List, Sequence

from . import certify, dsl
from .certify import CliError, Report


def _print_report(r: Report, fmt: str) -> None:
    if fmt == "json":
        print(certify.to_json(r))
    else:
        print(certify.to_text(r), end="")


def _cmd_verify(path: str) -> int:
    try:
        text = Path(path).read_text()
    except OSError as ex:
        print("error: %s" % ex, file=sys.stderr)
        return 1
    try:
        rep = certify.read_report(text)
    except (CliError, ValueError) as ex:
        print("error: unreadable report: %s" % ex, file=sys.stderr)
        return 1
    ok, msg = certify.verify_report(rep)
    print("verified: ok" if ok else "verified: REJECTED (%s)" % msg)
    return 0 if ok else 1


def parse_corpus_line(line: str):
    """Returns (verb, args, expected) or None for blanks and comments."""
    body = line.strip()
    if not body or body.startswith("#"):
        return None
    cells = [c.strip() for c in body.split("|")]
    if len(cells) < 3:
        raise CliError("corpus line needs verb | args... | expected: %r" % line)
    return cells[0], cells[1:-1], cells[-1]


def run_corpus_file(path: Path) -> List[tuple]:
    """Rows of (location, command, expected, actual, passed)."""
    rows = []
    for num, line in enumerate(path.read_text().splitlines(), 1):
        parsed = parse_corpus_line(line)
        if parsed is None:
            continue
        verb, args, expected = parsed
        loc = "%s:%d" % (path.name, num)
        shown = "%s %s" % (verb, " ".join(args))
        try:
            rep = certify.execute(verb, args)
            actual = rep.outcome
        except (CliError, dsl.ParseError, ValueError, TypeError) as ex:
            rows.append((loc, shown, expected, "error: %s" % ex, False))
            continue
        rows.append((loc, shown, expected, actual, actual == expected))
    return rows


def _cmd_corpus(action: str, target: str) -> int:
    if action != "run":
        print("error: corpus supports only: corpus run DIR", file=sys.stderr)
        return 1
    root = Path(target)
    files = sorted(root.glob("*.txt")) if root.is_dir() else [root]
    if not files or not all(f.exists() for f in files):
        print("error: no corpus files under %r" % target, file=sys.stderr)
        return 1
    rows = []
    for f in files:
        rows.extend(run_corpus_file(f))
    width = max((len(r[1]) for r in rows), default=0)
    failed = 0
    for loc, shown, expected, actual, passed in rows:
        mark = "pass" if passed else "FAIL"
        if not passed:
            failed += 1
        print("%-4s %-*s  expected=%s actual=%s  (%s)" % (mark, width, shown, expected, actual, loc))
    print("%d/%d passed" % (len(rows) - failed, len(rows)))
    return 0 if failed == 0 else 1


def main(argv: Sequence[str] = None) -> int:
    ap = argparse.ArgumentParser(
        prog="orderlab",
        description="decide order, circular-order, and arc/knot relations",
    )
    ap.add_argument("--format", choices=("text", "json"), default="text")
    ap.add_argument("verb", help="command verb (see module docstring)")
    ap.add_argument("args", nargs="*", help="operands for the verb")
    ns = ap.parse_args(argv)

    if ns.verb == "verify":
        if len(ns.args) != 1:
            print("error: verify takes one report file", file=sys.stderr)
            return 1
        return _cmd_verify(ns.args[0])
    if ns.verb == "corpus":
        if len(ns.args) != 2:
            print("error: usage: corpus run DIR", file=sys.stderr)
            return 1
        return _cmd_corpus(ns.args[0], ns.args[1])

    try:
        rep = certify.execute(ns.verb, ns.args)
    except (CliError, dsl.ParseError) as ex:
        print("error: %s" % ex, file=sys.stderr)
        return 1
    except (ValueError, TypeError) as ex:
        print("error: %s" % ex, file=sys.stderr)
        return 1
    _print_report(rep, ns.format)
    return certify.exit_code(rep)


if __name__ == "__main__":
    sys.exit(main())
