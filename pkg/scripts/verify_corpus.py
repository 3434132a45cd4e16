#!/usr/bin/env python3
"""Run every embedded check and print one line per report entry."""
import argparse

from torusorbits.certificates import load_corpus, verify_paper_corpus


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--corpus", help="alternative corpus JSON")
    ap.add_argument("--case", help="run a single entry")
    args = ap.parse_args()
    rep = verify_paper_corpus(load_corpus(args.corpus), case=args.case)
    for e in rep.entries:
        print(f"{'PASS' if e.passed else 'FAIL'} {e.id:34} {e.seconds:7.2f}s")
    return 0 if rep.passed else 2


if __name__ == "__main__":
    raise SystemExit(main())
