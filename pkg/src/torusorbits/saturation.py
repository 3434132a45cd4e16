"""Saturation and hereditary normality of finite vector sets.

A set ``S`` is saturated when ``Z≥0(S) = Z(S) ∩ Q≥0(S)``.  Every failure is
witnessed by a lattice point ``v0`` of ``Z(S)`` in the half-open
parallelepiped of some linearly independent ``B ⊆ S`` with ``v0 ∉ Z≥0(S)``;
the searches below enumerate exactly those points and refute membership with
a complete nonnegative-integer solver.
"""
from __future__ import annotations

import itertools
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from .linalg import (
    LatticeBasis,
    Vector,
    combo,
    common_denominator,
    dot,
    fmt_rational,
    fmt_vector,
    in_integer_span,
    is_independent,
    is_zero,
    lattice_points_in_box_with_coeffs,
    neg,
    rank,
    sub,
    to_integer_rows,
    transpose,
    vec,
)
from .lp import feasible_nonneg
from .rootsys import SizeLimitError

DEFAULT_SATURATION_CAP = 32
DEFAULT_HEREDITARY_CAP = 26


class VectorSet(tuple):
    """Ordered tuple of distinct exact vectors of one dimension."""

    def __new__(cls, vectors):
        seen = []
        for v in vectors:
            v = vec(v)
            if v not in seen:
                seen.append(v)
        if seen and len({len(v) for v in seen}) != 1:
            raise ValueError("vectors of different dimensions")
        return super().__new__(cls, seen)

    @property
    def ambient_dim(self) -> Optional[int]:
        return len(self[0]) if self else None

    def to_json(self) -> dict:
        return {"dim": self.ambient_dim, "vectors": [fmt_vector(v) for v in self]}

    @classmethod
    def from_json(cls, data: dict) -> "VectorSet":
        vs = cls(data["vectors"])
        if vs and data.get("dim") is not None and data["dim"] != vs.ambient_dim:
            raise ValueError("declared dim does not match the vectors")
        return vs


# ---------------------------------------------------------------------------
# cones and nonnegative integer combinations


@dataclass(frozen=True)
class ConeMembership:
    coeffs: Optional[Vector]
    separator: Optional[Vector]

    @property
    def member(self) -> bool:
        return self.coeffs is not None


def in_rational_cone(s: Sequence[Sequence], v: Sequence) -> ConeMembership:
    """Nonnegative rational coefficients, or a functional ``f`` with
    ``f(v) < 0 <= f(s_i)``."""
    s = [vec(x) for x in s]
    v = vec(v)
    if is_zero(v):
        return ConeMembership(tuple(Fraction(0) for _ in s), None)
    if not s:
        # the zero cone: separate with v itself
        return ConeMembership(None, neg(v))
    res = feasible_nonneg(s, v)
    if res.feasible:
        return ConeMembership(res.solution, None)
    return ConeMembership(None, res.farkas)


def _primitive(v: Sequence[Fraction]) -> Tuple[int, ...]:
    d = common_denominator([v])
    ints = [int(x * d) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints) if g else tuple(ints)


def nonneg_combination(gens: Sequence[Sequence], v: Sequence) -> Optional[Tuple[int, ...]]:
    """Nonnegative integers ``n`` with ``sum n_i gens_i == v``, or ``None``.

    Complete: generators ``g`` whose negative lies in the cone span the
    lineality space ``L``, where the semigroup is the group ``Z(L)``; the
    others are weighted positively by a functional ``f`` vanishing on ``L``,
    which bounds their coefficients.  Counts are tried largest first.
    """
    gens = [vec(g) for g in gens]
    v = vec(v)
    n = len(gens)
    if n == 0:
        return () if is_zero(v) else None
    if in_integer_span(gens, v) is None:
        return None
    live = [i for i in range(n) if not is_zero(gens[i])]
    lineal: List[int] = []
    relation = [Fraction(0)] * n
    farkas: List[Vector] = []
    live_gens = [gens[i] for i in live]
    for i in live:
        res = feasible_nonneg(live_gens, neg(gens[i]))
        if res.feasible:
            lineal.append(i)
            relation[i] += 1
            for k, x in zip(live, res.solution):
                relation[k] += x
        else:
            farkas.append(res.farkas)
    pointed = [i for i in live if i not in lineal]
    dim = len(v)
    f = tuple(sum((y[j] for y in farkas), Fraction(0)) for j in range(dim))
    f = _primitive(f) if farkas else tuple(0 for _ in range(dim))
    weights = {i: dot(f, gens[i]) for i in pointed}
    target = dot(f, v)
    if target < 0:
        return None
    lineal_gens = [gens[i] for i in lineal]
    counts = [0] * n
    failed = set()

    def finish(residual: Vector) -> Optional[Dict[int, int]]:
        if not lineal:
            return {} if is_zero(residual) else None
        z = in_integer_span(lineal_gens, residual)
        if z is None:
            return None
        den = common_denominator([[relation[i] for i in lineal]])
        c = [int(relation[i] * den) for i in lineal]
        k = max([0] + [-(zi // ci) for zi, ci in zip(z, c)])  # ceil(-z/c)
        return {i: zi + k * ci for i, zi, ci in zip(lineal, z, c)}

    def dfs(pos: int, residual: Vector, budget: Fraction) -> Optional[Dict[int, int]]:
        if pos == len(pointed):
            if budget != 0:
                return None
            return finish(residual)
        key = (pos, residual)
        if key in failed:
            return None
        i = pointed[pos]
        w = weights[i]
        top = int(budget // w)
        for c in range(top, -1, -1):
            nxt = sub(residual, tuple(c * x for x in gens[i])) if c else residual
            sol = dfs(pos + 1, nxt, budget - c * w)
            if sol is not None:
                counts[i] = c
                return sol
        failed.add(key)
        return None

    lin = dfs(0, v, target)
    if lin is None:
        return None
    out = [0] * n
    for i in pointed:
        out[i] = counts[i]
    for i, x in lin.items():
        out[i] = x
    if combo(out, gens) != v or any(x < 0 for x in out):
        raise ArithmeticError("nonnegative solver produced an invalid combination")
    return tuple(out)


def nonneg_integer_solve(a: Sequence[Sequence], b: Sequence) -> Optional[Tuple[int, ...]]:
    """Solve ``a·n = b`` over ``n ∈ Z≥0^cols`` (columns of ``a`` are generators)."""
    cols = transpose([vec(r) for r in a])
    return nonneg_combination(cols, b)


def verify_discriminating(f: Sequence, v0: Sequence, s: Sequence[Sequence]) -> bool:
    """True iff ``f(v0)`` is not a ``Z≥0``-combination of the values ``f(s_i)``."""
    f = vec(f)
    values = [dot(f, vec(x)) for x in s]
    t = dot(f, vec(v0))
    return nonneg_combination([(x,) for x in values], (t,)) is None


# ---------------------------------------------------------------------------
# witnesses and verdicts


@dataclass(frozen=True)
class EnssWitness:
    """``v0`` together with the set it refutes and both of its representations."""

    v0: Vector
    subset: VectorSet
    independent_indices: Tuple[int, ...]
    rational_coeffs: Tuple[Fraction, ...]
    integer_coeffs: Tuple[int, ...]
    refutation: dict = field(default_factory=lambda: {"type": "complete-solver"})

    def checks(self) -> Dict[str, bool]:
        basis = [self.subset[i] for i in self.independent_indices]
        out = {
            "independent": bool(basis) and is_independent(basis),
            "coefficients_in_unit_interval": all(0 <= q < 1 for q in self.rational_coeffs),
            "rational_combination": bool(basis) and combo(self.rational_coeffs, basis) == self.v0,
            "integer_combination": len(self.integer_coeffs) == len(self.subset)
            and combo(self.integer_coeffs, list(self.subset)) == self.v0,
            "not_nonnegative_combination": nonneg_combination(self.subset, self.v0) is None,
        }
        if self.refutation.get("type") == "discriminating":
            out["discriminating_functional"] = verify_discriminating(
                self.refutation["functional"], self.v0, self.subset
            )
        return out

    def verify(self) -> bool:
        return all(self.checks().values())

    def to_json(self) -> dict:
        ref = dict(self.refutation)
        if "functional" in ref:
            ref["functional"] = fmt_vector(vec(ref["functional"]))
        return {
            "v0": fmt_vector(self.v0),
            "subset": [fmt_vector(v) for v in self.subset],
            "independent_indices": list(self.independent_indices),
            "rational_coeffs": [fmt_rational(q) for q in self.rational_coeffs],
            "integer_coeffs": list(self.integer_coeffs),
            "refutation": ref,
        }


@dataclass
class SearchStats:
    subsets: int = 0
    boxes: int = 0
    box_points: int = 0
    completions: int = 0
    solver_calls: int = 0
    orbits_pruned: int = 0

    def to_json(self) -> dict:
        return dict(self.__dict__)


@dataclass
class SaturationVerdict:
    status: str  # "saturated" | "not_saturated"
    witness: Optional[EnssWitness]
    stats: SearchStats

    @property
    def saturated(self) -> bool:
        return self.status == "saturated"

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "witness": None if self.witness is None else self.witness.to_json(),
            "stats": self.stats.to_json(),
        }


@dataclass
class HereditaryVerdict:
    status: str  # "normal" | "not_normal"
    witness: Optional[EnssWitness]
    stats: SearchStats

    @property
    def normal(self) -> bool:
        return self.status == "normal"

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "witness": None if self.witness is None else self.witness.to_json(),
            "stats": self.stats.to_json(),
        }


def _make_witness(subset: Sequence[Vector], basis_idx: Sequence[int], q: Sequence[Fraction], v0: Vector) -> EnssWitness:
    keep = [(i, c) for i, c in zip(basis_idx, q) if c != 0]
    z = in_integer_span(subset, v0)
    if z is None:
        raise ArithmeticError("witness is not in the integer span of its subset")
    return EnssWitness(
        v0=v0,
        subset=VectorSet(subset),
        independent_indices=tuple(i for i, _ in keep),
        rational_coeffs=tuple(c for _, c in keep),
        integer_coeffs=z,
    )


def is_saturated(s: Sequence[Sequence], cap: int = DEFAULT_SATURATION_CAP) -> SaturationVerdict:
    """Decide saturatedness; the first violation found is returned as witness.

    Only maximal independent subsets ``B`` are scanned: the parallelepiped of
    any independent subset is a face of the parallelepiped of a basis of
    ``span(s)`` extending it.  Order: ``B`` lexicographic by index tuple,
    then box points by coefficient vector.
    """
    vs = VectorSet(s)
    if len(vs) > cap:
        raise SizeLimitError(f"set of {len(vs)} vectors exceeds saturation cap {cap}")
    stats = SearchStats()
    nz = [i for i, v in enumerate(vs) if not is_zero(v)]
    if not nz:
        return SaturationVerdict("saturated", None, stats)
    gens = [vs[i] for i in nz]
    lat = LatticeBasis.from_generators(gens)
    r = lat.rank
    memo: Dict[Vector, bool] = {}
    for idx in itertools.combinations(range(len(nz)), r):
        basis = [gens[i] for i in idx]
        stats.subsets += 1
        if not is_independent(basis):
            continue
        stats.boxes += 1
        for p, q in lattice_points_in_box_with_coeffs(basis, lat):
            if is_zero(p):
                continue
            stats.box_points += 1
            if p not in memo:
                stats.solver_calls += 1
                memo[p] = nonneg_combination(gens, p) is not None
            if not memo[p]:
                w = _make_witness(list(vs), [nz[i] for i in idx], q, p)
                return SaturationVerdict("not_saturated", w, stats)
    return SaturationVerdict("saturated", None, stats)


# ---------------------------------------------------------------------------
# hereditary normality


SymmetryGen = Union[Callable[[Vector], Vector], Sequence[Sequence]]


def _as_map(g: SymmetryGen) -> Callable[[Vector], Vector]:
    if callable(g):
        return lambda v: vec(g(v))
    m = [vec(r) for r in g]
    return lambda v: tuple(dot(row, v) for row in m)


def _permutations(vectors: Sequence[Vector], symmetry: Sequence[SymmetryGen]) -> List[Tuple[int, ...]]:
    pos = {v: i for i, v in enumerate(vectors)}
    perms = []
    for g in symmetry:
        fn = _as_map(g)
        try:
            perms.append(tuple(pos[fn(v)] for v in vectors))
        except KeyError:
            raise ValueError("symmetry generator does not permute the set") from None
    return perms


def _orbit_of_subset(b: Tuple[int, ...], perms: Sequence[Tuple[int, ...]]) -> set:
    seen = {b}
    queue = deque([b])
    while queue:
        x = queue.popleft()
        for p in perms:
            y = tuple(sorted(p[i] for i in x))
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def _independent_subsets(gens: Sequence[Vector], r: int):
    for k in range(1, r + 1):
        for idx in itertools.combinations(range(len(gens)), k):
            yield idx


class _Prover:
    """State of one hereditary-normality search over a fixed set."""

    def __init__(self, gens: Sequence[Vector]):
        self.gens = list(gens)
        self.lat = LatticeBasis.from_generators(self.gens)
        self.stats = SearchStats()
        self._span_cache: Dict[Tuple[Tuple[int, ...], Vector], bool] = {}
        self._solve_cache: Dict[Tuple[Tuple[int, ...], Vector], bool] = {}

    def in_span(self, idx: Tuple[int, ...], v: Vector) -> bool:
        key = (idx, v)
        if key not in self._span_cache:
            self._span_cache[key] = in_integer_span([self.gens[i] for i in idx], v) is not None
        return self._span_cache[key]

    def nonneg(self, idx: Tuple[int, ...], v: Vector) -> bool:
        key = (idx, v)
        if key not in self._solve_cache:
            self.stats.solver_calls += 1
            self._solve_cache[key] = nonneg_combination([self.gens[i] for i in idx], v) is not None
        return self._solve_cache[key]

    def check_basis(self, idx: Tuple[int, ...]) -> Optional[EnssWitness]:
        basis = [self.gens[i] for i in idx]
        self.stats.boxes += 1
        rest = [i for i in range(len(self.gens)) if i not in idx]
        for p, q in lattice_points_in_box_with_coeffs(basis, self.lat):
            if is_zero(p):
                continue
            self.stats.box_points += 1
            minimal: List[frozenset] = []
            for k in range(len(rest) + 1):
                examined = False
                for t in itertools.combinations(rest, k):
                    ts = frozenset(t)
                    if any(m <= ts for m in minimal):
                        continue
                    examined = True
                    s_idx = tuple(sorted(idx + t))
                    if not self.in_span(s_idx, p):
                        continue
                    minimal.append(ts)
                    self.stats.completions += 1
                    if not self.nonneg(s_idx, p):
                        subset = [self.gens[i] for i in s_idx]
                        local = [s_idx.index(i) for i in idx]
                        return _make_witness(subset, local, q, p)
                if not examined:
                    break
        return None


def _check_chunk(gens: Sequence[Vector], chunk: Sequence[Tuple[int, ...]]):
    prover = _Prover(gens)
    for idx in chunk:
        w = prover.check_basis(idx)
        if w is not None:
            return w, prover.stats
    return None, prover.stats


def is_hereditarily_normal(
    m: Sequence[Sequence],
    symmetry: Optional[Sequence[SymmetryGen]] = None,
    cap: int = DEFAULT_HEREDITARY_CAP,
    workers: int = 1,
) -> HereditaryVerdict:
    """Decide whether every subset of ``m`` is saturated.

    For each independent ``B`` (by size, then lexicographic) and each nonzero
    point ``v0`` of ``Z(m)`` in its half-open box, the minimal completions
    ``S = B ∪ T`` with ``v0 ∈ Z(S)`` are enumerated by increasing ``|T|``;
    any violating superset contains a violating minimal one.  ``symmetry``
    generators (matrices or callables permuting ``m``) restrict the scan to
    one ``B`` per orbit.
    """
    vs = VectorSet(v for v in m if not is_zero(vec(v)))
    if len(vs) > cap:
        raise SizeLimitError(f"set of {len(vs)} vectors exceeds hereditary cap {cap}")
    gens = list(vs)
    stats = SearchStats()
    if not gens:
        return HereditaryVerdict("normal", None, stats)
    r = rank(gens)
    perms = _permutations(gens, symmetry) if symmetry else []
    visited: set = set()
    reps: List[Tuple[int, ...]] = []
    for idx in _independent_subsets(gens, r):
        if idx in visited:
            stats.orbits_pruned += 1
            continue
        stats.subsets += 1
        if perms:
            visited |= _orbit_of_subset(idx, perms)
        if not is_independent([gens[i] for i in idx]):
            continue
        reps.append(idx)

    if workers <= 1:
        results = [_check_chunk(gens, reps)]
    else:
        size = max(1, -(-len(reps) // (workers * 4)))
        chunks = [reps[i : i + size] for i in range(0, len(reps), size)]
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_check_chunk, [gens] * len(chunks), chunks))
    for w, st in results:
        for k in ("boxes", "box_points", "completions", "solver_calls"):
            setattr(stats, k, getattr(stats, k) + getattr(st, k))
        if w is not None:
            return HereditaryVerdict("not_normal", w, stats)
    return HereditaryVerdict("normal", None, stats)
