#!/usr/bin/env python3
"""Run the shipped scenarios, print their reports and optionally cross-check them numerically.

    python3 scripts/run_examples.py              # all three, text
    python3 scripts/run_examples.py ex2 --json
    python3 scripts/run_examples.py --points 10  # add the jet oracle comparison
"""
import argparse
import json
import sys
import time

from nfgeom import run_example
from nfgeom.oracle import PIPELINE, cross_check

NAMES = ("ex1", "ex2", "ex3")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("names", nargs="*", metavar="NAME", help="subset of ex1 ex2 ex3")
    ap.add_argument("--json", action="store_true")
    ap.add_argument("--points", type=int, default=0, help="oracle sample points (0 skips)")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if bad := [n for n in args.names if n not in NAMES]:
        ap.error(f"unknown example(s): {' '.join(bad)}")

    failed = 0
    out = []
    for name in args.names or NAMES:
        t0 = time.perf_counter()
        rep = run_example(name)
        doc = rep.to_json()
        doc["seconds"] = round(time.perf_counter() - t0, 2)
        if args.points:
            chk = cross_check(rep.session.geometry, PIPELINE, count=args.points, seed=args.seed)
            doc["oracle"] = {"passed": chk.passed,
                             "max_deviation": max(map(float, chk.max_deviation.values()), default=0.0)}
        failed += not rep.passed or not doc.get("oracle", {}).get("passed", True)
        if args.json:
            out.append(doc)
            continue
        print("\n".join(rep.render_lines()))
        if "oracle" in doc:
            o = doc["oracle"]
            print(f"oracle: {'ok' if o['passed'] else 'FAIL'} max deviation {o['max_deviation']:.2e}")
        print(f"({doc['seconds']} s)\n")
    if args.json:
        print(json.dumps(out, indent=2, ensure_ascii=False))
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
