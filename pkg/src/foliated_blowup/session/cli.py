"""Command line interface: ``foliated-blowup run|check|golden|suite``."""

from __future__ import annotations

import argparse
import os
import sys
from importlib import resources
from typing import List, Optional

from .parser import SessionSyntaxError, parse_session
from .report import render_text, to_json
from .runner import exit_status, run_session

GOLDEN_SESSIONS = ("worked_example_good", "worked_example_bad")


def _data_path(name: str):
    return resources.files("foliated_blowup.session").joinpath("data", name)


def bundled_session(name: str) -> str:
    return _data_path(name + ".fbs").read_text(encoding="utf-8")


def bundled_golden(name: str) -> str:
    return _data_path(name + ".json").read_text(encoding="utf-8")


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def cmd_check(args) -> int:
    try:
        script = parse_session(_read(args.file))
    except SessionSyntaxError as exc:
        print(f"{args.file}:{exc.line}:{exc.col}: {exc}", file=sys.stderr)
        return 2
    print(f"{args.file}: {len(script)} statements")
    return 0


def cmd_run(args) -> int:
    try:
        script = parse_session(_read(args.file))
    except SessionSyntaxError as exc:
        print(f"{args.file}:{exc.line}:{exc.col}: {exc}", file=sys.stderr)
        return 2
    reports = run_session(script)
    doc = to_json(reports)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(doc)
    if args.text or not args.json:
        sys.stdout.write(render_text(reports) if args.text else doc)
    if args.figures:
        from .figures import write_figures

        stem = os.path.splitext(os.path.basename(args.file))[0]
        for path in write_figures(reports, args.figures, stem):
            print(f"figure: {path}", file=sys.stderr)
    return exit_status(reports)


def cmd_golden(args) -> int:
    status = 0
    for name in GOLDEN_SESSIONS:
        doc = to_json(run_session(parse_session(bundled_session(name))))
        if args.update:
            target = os.path.join(args.update, name + ".json")
            with open(target, "w", encoding="utf-8") as fh:
                fh.write(doc)
            print(f"{name}: written to {target}")
            continue
        ok = doc == bundled_golden(name)
        print(f"{name}: {'match' if ok else 'MISMATCH'}")
        if not ok:
            status = 1
    return status


def cmd_suite(args) -> int:
    from ..regression import suite_json

    doc = suite_json()
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(doc)
    else:
        sys.stdout.write(doc)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="foliated-blowup",
                                description="Verify blowup towers of foliated ideal sheaves.")
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run a session script and print its report")
    r.add_argument("file")
    r.add_argument("--json", metavar="OUT", help="write the JSON report to OUT")
    r.add_argument("--text", action="store_true", help="print the human-readable report")
    r.add_argument("--figures", metavar="DIR", help="also render report figures into DIR")
    r.set_defaults(func=cmd_run)
    c = sub.add_parser("check", help="parse a session script without running it")
    c.add_argument("file")
    c.set_defaults(func=cmd_check)
    g = sub.add_parser("golden", help="run the bundled sessions against their golden reports")
    g.add_argument("--update", metavar="DIR", help="write fresh golden files into DIR instead")
    g.set_defaults(func=cmd_golden)
    s = sub.add_parser("suite", help="run the goldens and regression checks, print one JSON document")
    s.add_argument("--json", metavar="OUT", help="write the document to OUT")
    s.set_defaults(func=cmd_suite)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
