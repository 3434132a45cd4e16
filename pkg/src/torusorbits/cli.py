"""Command-line front end: ``torusorbits <command> ...``.

Exit codes: 0 success or normal, 1 verified non-normal / witness found,
2 verification failure, 64 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from . import __version__
from .certificates import (
    EXTRA_ENTRY_IDS,
    CertificateError,
    LemmaContradiction,
    builtin_corpus,
    classify,
    load_corpus,
    simple_reflection_maps,
    verify_paper_corpus,
)
from .jsonio import dumps
from .linalg import Vector, fmt_vector, parse_vector
from .rootsys import LatticeError, RootSystem, SizeLimitError, build
from .saturation import VectorSet, is_hereditarily_normal, is_saturated
from .weights import DEFAULT_ENUM_CAP, enumerate_weights, member

SCHEMA_VERSION = 1
EXIT_OK, EXIT_WITNESS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit with 2
        raise UsageError(message)


def parse_hw(rs: RootSystem, text: str) -> Vector:
    """``"a1,...,ar"`` -> dominant weight ``Σ a_i π_i`` in ambient coordinates."""
    toks = [t.strip() for t in text.split(",")] if text.strip() else []
    if len(toks) != rs.rank:
        raise UsageError(f"{rs.id} needs {rs.rank} comma-separated coefficients, got {len(toks)}")
    try:
        coeffs = [int(t) for t in toks]
    except ValueError:
        raise UsageError(f"highest weight coefficients must be integers: {text!r}") from None
    return rs.dominant_rep(rs.from_dynkin([Fraction(c) for c in coeffs])).dominant


def _system(name: str) -> RootSystem:
    try:
        return build(name)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _load_set(path: str) -> VectorSet:
    try:
        with open(path) as fh:
            return VectorSet.from_json(json.load(fh))
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"malformed vector set {path}: {exc}") from None


def _weight_payload(rs: RootSystem, lam: Vector) -> dict:
    return {"ambient": fmt_vector(lam), "dynkin_labels": [int(x) for x in rs.dynkin(lam)]}


def _need(args, *names):
    for n in names:
        if getattr(args, n) is None:
            raise UsageError(f"{args.command} requires --{n.replace('_', '-')}")


# ---------------------------------------------------------------------------
# commands: each returns (payload, exit code)


def cmd_roots(args):
    rs = _system(args.system)
    return rs.to_json(), EXIT_OK


def cmd_weights(args):
    _need(args, "hw")
    rs = _system(args.system)
    lam = parse_hw(rs, args.hw)
    ws = enumerate_weights(rs, lam, cap=args.limit or DEFAULT_ENUM_CAP)
    return {
        "system": str(rs.id),
        "highest_weight": _weight_payload(rs, lam),
        "count": len(ws),
        "weights": [fmt_vector(m) for m in ws.members],
    }, EXIT_OK


def cmd_member(args):
    _need(args, "hw", "weight")
    rs = _system(args.system)
    lam = parse_hw(rs, args.hw)
    try:
        mu = parse_vector(t.strip() for t in args.weight.split(","))
        proof = member(rs, lam, mu)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(str(exc)) from None
    return {"system": str(rs.id), "proof": proof.to_json()}, EXIT_OK


def cmd_saturated(args):
    _need(args, "file")
    s = _load_set(args.file)
    kw = {"cap": args.limit} if args.limit else {}
    v = is_saturated(list(s), **kw)
    code = EXIT_OK
    if not v.saturated:
        code = EXIT_WITNESS if v.witness.verify() else EXIT_FAIL
    return {"input": s.to_json(), "verdict": v.to_json()}, code


def cmd_hereditary(args):
    kw = {"cap": args.limit} if args.limit else {}
    if args.file:
        s = list(_load_set(args.file))
        source = {"file_vectors": len(s)}
        sym = None
    else:
        if args.system is None:
            raise UsageError("hereditary needs --file or a system with --hw")
        _need(args, "hw")
        rs = _system(args.system)
        lam = parse_hw(rs, args.hw)
        s = enumerate_weights(rs, lam).nonzero()
        source = {"system": str(rs.id), "highest_weight": _weight_payload(rs, lam)}
        sym = simple_reflection_maps(rs)
    v = is_hereditarily_normal(s, symmetry=sym, workers=args.parallel, **kw)
    code = EXIT_OK
    if not v.normal:
        code = EXIT_WITNESS if v.witness.verify() else EXIT_FAIL
    return {"input": source, "verdict": v.to_json()}, code


def cmd_classify(args):
    _need(args, "hw")
    rs = _system(args.system)
    lam = parse_hw(rs, args.hw)
    corpus = load_corpus(args.corpus) if args.corpus else None
    try:
        v = classify(rs, lam, corpus, workers=args.parallel)
    except LemmaContradiction as exc:
        return {"system": str(rs.id), "error": str(exc)}, EXIT_FAIL
    code = EXIT_FAIL if not v.verified else (EXIT_OK if v.normal else EXIT_WITNESS)
    return {"verdict": v.to_json()}, code


def cmd_verify_paper(args):
    corpus = load_corpus(args.corpus) if args.corpus else load_corpus()
    known = corpus.ids() + list(EXTRA_ENTRY_IDS)
    if args.case is not None and args.case not in known:
        raise UsageError(f"unknown case {args.case!r}; known: {', '.join(known)}")
    rep = verify_paper_corpus(corpus, case=args.case, workers=args.parallel)
    out = rep.to_json()
    if not args.timings:
        for e in out["entries"]:
            e.pop("seconds")
    return out, EXIT_OK if rep.passed else EXIT_FAIL



COMMANDS = {
    "roots": cmd_roots,
    "weights": cmd_weights,
    "member": cmd_member,
    "saturated": cmd_saturated,
    "hereditary": cmd_hereditary,
    "classify": cmd_classify,
    "verify-paper": cmd_verify_paper,
}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="torusorbits", description="Normality of torus orbit closures in simple modules.")
    p.add_argument("--version", action="version", version=f"torusorbits {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def common(sp):
        sp.add_argument("--format", choices=("json", "text"), default="json")
        sp.add_argument("--timings", action="store_true", help="include wall-clock timings (not reproducible)")

    for name in ("roots", "weights", "member", "classify"):
        sp = sub.add_parser(name)
        sp.add_argument("system")
        if name != "roots":
            sp.add_argument("--hw", help="highest weight coefficients a1,...,ar over the fundamental weights")
        if name == "member":
            sp.add_argument("--weight", help="ambient coordinates, e.g. -1,0,1 or 1/2,...")
        if name == "weights":
            sp.add_argument("--limit", type=int, help="enumeration cap")
        if name == "classify":
            sp.add_argument("--parallel", type=int, default=1)
            sp.add_argument("--corpus", help="certificate corpus JSON (overrides the packaged one)")
        common(sp)
    sp = sub.add_parser("saturated")
    sp.add_argument("--file", required=True)
    sp.add_argument("--limit", type=int, help="maximum set size")
    common(sp)
    sp = sub.add_parser("hereditary")
    sp.add_argument("system", nargs="?")
    sp.add_argument("--hw")
    sp.add_argument("--file")
    sp.add_argument("--limit", type=int, help="maximum set size")
    sp.add_argument("--parallel", type=int, default=1)
    common(sp)
    sp = sub.add_parser("verify-paper")
    sp.add_argument("--case")
    sp.add_argument("--corpus", help="certificate corpus JSON (overrides the packaged one)")
    sp.add_argument("--parallel", type=int, default=1)
    common(sp)
    return p


def _text(obj, indent: int = 0) -> List[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _scalar_list(v):
                lines.append(f"{pad}{k}:")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and not _scalar_list(v):
                lines.append(f"{pad}-")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(pad + _scalar(obj))
    return lines


def _scalar_list(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


def _scalar(v) -> str:
    if v is None:
        return "null"
    if isinstance(v, list):
        return "(" + ", ".join(str(x) for x in v) + ")"
    return json.dumps(v) if isinstance(v, str) else str(v).lower() if isinstance(v, bool) else str(v)


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a command is required")
        if getattr(args, "parallel", 1) < 1:
            raise UsageError("--parallel must be positive")
        if getattr(args, "limit", None) is not None and args.limit < 1:
            raise UsageError("--limit must be positive")
        t0 = time.perf_counter()
        payload, code = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"torusorbits: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CertificateError, LatticeError, SizeLimitError) as exc:
        print(f"torusorbits: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL if isinstance(exc, CertificateError) else EXIT_USAGE
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": {"name": args.command, "argv": argv},
        "tool_version": __version__,
        "corpus_version": builtin_corpus().corpus_version,
        "exit_code": code,
        "result": payload,
    }
    if args.timings:
        report["seconds"] = round(time.perf_counter() - t0, 4)
    if args.format == "json":
        sys.stdout.write(dumps(report))
    else:
        sys.stdout.write("\n".join(_text(report)) + "\n")
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
