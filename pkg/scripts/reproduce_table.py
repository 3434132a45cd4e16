#!/usr/bin/env python3
"""Classify every dominant weight with small label sum and print a table.

Usage: python scripts/reproduce_table.py [--max-sum 2] [--systems G2,F4,E6]
"""
import argparse
import itertools
import time
from fractions import Fraction

from torusorbits.certificates import classify, table_status
from torusorbits.rootsys import build


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-sum", type=int, default=2)
    ap.add_argument("--systems", default="G2,F4,E6")
    args = ap.parse_args()
    mismatches = 0
    for sid in args.systems.split(","):
        rs = build(sid)
        for labels in itertools.product(range(args.max_sum + 1), repeat=rs.rank):
            if sum(labels) > args.max_sum:
                continue
            t0 = time.perf_counter()
            lam = rs.from_dynkin([Fraction(x) for x in labels])
            v = classify(rs, lam)
            expected = table_status(rs, lam)
            evidence = v.evidence.get("certificate", {}).get("id", v.evidence["kind"])
            flag = "" if v.status == expected and v.verified else "  MISMATCH"
            mismatches += bool(flag)
            print(f"{sid:3} {str(labels):24} {v.status:10} {evidence:28} {time.perf_counter() - t0:6.2f}s{flag}")
    return 1 if mismatches else 0


if __name__ == "__main__":
    raise SystemExit(main())
