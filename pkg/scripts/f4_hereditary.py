#!/usr/bin/env python3
"""Prove hereditary normality of the 24 short roots of F4, with and without symmetry pruning."""
import argparse
import time

from torusorbits.certificates import simple_reflection_maps
from torusorbits.rootsys import build
from torusorbits.saturation import is_hereditarily_normal
from torusorbits.weights import enumerate_weights


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--no-symmetry", action="store_true", help="also run the unpruned search")
    ap.add_argument("--parallel", type=int, default=1)
    args = ap.parse_args()
    f4 = build("F4")
    m = enumerate_weights(f4, f4.fundamental_weights[0]).nonzero()
    runs = [("symmetry", simple_reflection_maps(f4))]
    if args.no_symmetry:
        runs.append(("plain", None))
    ok = True
    for name, sym in runs:
        t0 = time.perf_counter()
        v = is_hereditarily_normal(m, symmetry=sym, workers=args.parallel)
        print(f"{name:9} {v.status:10} {time.perf_counter() - t0:7.2f}s {v.stats.to_json()}")
        ok &= v.normal
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
