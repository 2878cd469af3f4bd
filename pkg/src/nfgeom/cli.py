"""``nf`` command line: run a script or a shipped example."""
from __future__ import annotations

import argparse
import logging
import sys

from .dsl import (EXIT_CHECK, EXIT_MATH, EXIT_OK, EXIT_USAGE, Check, DSLError, Session,
                  SessionConfig, parse_script)
from .parser import ParseError


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"nf: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _check_opts(text: str) -> dict:
    out = {}
    for part in text.split():
        k, sep, v = part.partition("=")
        if not sep or k not in ("points", "tol", "seed"):
            raise ValueError(f"bad --check-numeric option {part!r}")
        out[k] = v
    int(out.get("points", 1)), float(out.get("tol", 1)), int(out.get("seed", 0))
    return out


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="nf", description="Nullity foliations of Finsler spaces (metric given as F^2).")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--split-depth", type=int, default=None)
    common.add_argument("--precision", type=int, default=50)
    common.add_argument("--check-numeric", metavar="OPTS", default=None,
                        help='e.g. "points=20 tol=1e-9 seed=0"')
    common.add_argument("-v", "--verbose", action="store_true")
    r = sub.add_parser("run", parents=[common], help="run a script")
    r.add_argument("file")
    e = sub.add_parser("example", parents=[common], help="run a shipped example")
    e.add_argument("name", choices=("ex1", "ex2", "ex3"))
    return p


def _config(a) -> SessionConfig:
    cfg = SessionConfig(precision=a.precision)
    if a.split_depth is not None:
        cfg.split_depth = a.split_depth
    return cfg


def _report(e: DSLError, src: str):
    loc = f"{src}:{e.line}:{e.col}: " if e.line else f"{src}: "
    print(f"nf: {loc}{e.msg}", file=sys.stderr)


def main(argv=None) -> int:
    a = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        check = _check_opts(a.check_numeric) if a.check_numeric is not None else None
    except ValueError as e:
        print(f"nf: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    cfg = _config(a)
    if a.cmd == "run":
        src = a.file
        try:
            with open(a.file, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as e:
            print(f"nf: error: cannot read {a.file}: {e.strerror}", file=sys.stderr)
            return EXIT_USAGE
    else:
        from .examples import scenario_text
        src, text = f"<{a.name}>", scenario_text(a.name)
    try:
        stmts = parse_script(text)
    except ParseError as e:
        _report(DSLError(e.msg + (f" (expected {e.expected})" if e.expected else ""),
                         e.line, e.col), src)
        return 2
    except DSLError as e:
        _report(e, src)
        return e.code
    if check is not None:
        stmts.append(Check("numeric", (), tuple(check.items()), line=0))
    s = Session(cfg)
    try:
        s.run(stmts)
        rep = None
        if a.cmd == "example":
            from .examples import assess
            rep = assess(a.name, s)
            s.verdicts.extend(rep.verdicts)
            s.checks.extend({"kind": "golden", "example": a.name, **c.to_json()}
                            for c in rep.checks)
            if not rep.passed:
                s.failed_checks += 1
    except DSLError as e:
        _report(e, src)
        return e.code
    except (ArithmeticError, ValueError) as e:
        print(f"nf: {src}: {e}", file=sys.stderr)
        return EXIT_MATH
    if a.format == "json":
        sys.stdout.write(s.render_json() + "\n")
    else:
        sys.stdout.write(s.render_text())
        if rep is not None:
            sys.stdout.write("\n".join(rep.render_lines()) + "\n")
    return EXIT_CHECK if s.failed_checks else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
