"""Exact rational and integer linear algebra.

Vectors are tuples of :class:`fractions.Fraction`; matrices are tuples of row
vectors.  Everything here is pure and deterministic.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, List, Optional, Sequence, Tuple

Vector = Tuple[Fraction, ...]
Matrix = Tuple[Vector, ...]
IntMatrix = List[List[int]]


# ---------------------------------------------------------------------------
# construction / serialization helpers


def frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def vec(*entries) -> Vector:
    if len(entries) == 1 and not isinstance(entries[0], (int, Fraction, str)):
        entries = tuple(entries[0])
    return tuple(frac(e) for e in entries)


def mat(rows: Iterable[Iterable]) -> Matrix:
    out = tuple(vec(r) for r in rows)
    if out and len({len(r) for r in out}) != 1:
        raise ValueError("ragged matrix")
    return out


def fmt_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def fmt_vector(v: Sequence[Fraction]) -> List[str]:
    return [fmt_rational(frac(x)) for x in v]


def parse_vector(items: Sequence) -> Vector:
    return tuple(frac(x) for x in items)


def identity(n: int) -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


# ---------------------------------------------------------------------------
# vector arithmetic


def dot(x: Sequence[Fraction], y: Sequence[Fraction]) -> Fraction:
    if len(x) != len(y):
        raise ValueError("dimension mismatch")
    return sum((a * b for a, b in zip(x, y)), Fraction(0))


def add(x: Vector, y: Vector) -> Vector:
    return tuple(a + b for a, b in zip(x, y))


def sub(x: Vector, y: Vector) -> Vector:
    return tuple(a - b for a, b in zip(x, y))


def scale(c, x: Vector) -> Vector:
    return tuple(c * a for a in x)


def neg(x: Vector) -> Vector:
    return tuple(-a for a in x)


def combo(coeffs: Sequence, vectors: Sequence[Vector]) -> Vector:
    """Return ``sum(c_i * v_i)``."""
    if len(coeffs) != len(vectors):
        raise ValueError("coefficient count mismatch")
    if not vectors:
        raise ValueError("empty combination has no dimension")
    n = len(vectors[0])
    out = [Fraction(0)] * n
    for c, v in zip(coeffs, vectors):
        if c:
            for j in range(n):
                out[j] += c * v[j]
    return tuple(out)


def is_zero(v: Sequence) -> bool:
    return all(x == 0 for x in v)


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list:
    cols = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in cols] for row in a]


def transpose(m: Sequence[Sequence]) -> Matrix:
    return tuple(tuple(col) for col in zip(*m))


def common_denominator(vectors: Iterable[Sequence[Fraction]]) -> int:
    return reduce(lcm, (frac(x).denominator for v in vectors for x in v), 1)


def to_integer_rows(vectors: Sequence[Sequence[Fraction]], d: int) -> IntMatrix:
    out = []
    for v in vectors:
        row = []
        for x in v:
            y = frac(x) * d
            if y.denominator != 1:
                raise ValueError("denominator does not clear")
            row.append(y.numerator)
        out.append(row)
    return out


# ---------------------------------------------------------------------------
# Hermite normal form


def _xgcd(a: int, b: int) -> Tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def hnf_int(m: Sequence[Sequence[int]], with_transform: bool = True):
    """Row Hermite normal form of an integer matrix.

    Returns ``(h, u, pivots)`` with ``u @ m == h``, ``u`` unimodular, pivots
    positive and the entries above each pivot reduced into ``[0, pivot)``.
    Zero rows of ``h`` come last.  ``u`` is ``None`` when not requested.
    """
    h = [list(map(int, r)) for r in m]
    rows = len(h)
    cols = len(h[0]) if rows else 0
    u = [[int(i == j) for j in range(rows)] for i in range(rows)] if with_transform else None
    pivots: List[int] = []
    p = 0
    for c in range(cols):
        if p == rows:
            break
        for i in range(p + 1, rows):
            if h[i][c] == 0:
                continue
            a, b = h[p][c], h[i][c]
            g, x, y = _xgcd(a, b)
            s, t = -b // g, a // g
            rp, ri = h[p], h[i]
            h[p] = [x * e + y * f for e, f in zip(rp, ri)]
            h[i] = [s * e + t * f for e, f in zip(rp, ri)]
            if u is not None:
                up, ui = u[p], u[i]
                u[p] = [x * e + y * f for e, f in zip(up, ui)]
                u[i] = [s * e + t * f for e, f in zip(up, ui)]
        if h[p][c] == 0:
            continue
        if h[p][c] < 0:
            h[p] = [-e for e in h[p]]
            if u is not None:
                u[p] = [-e for e in u[p]]
        piv = h[p][c]
        for i in range(p):
            q = h[i][c] // piv
            if q:
                h[i] = [e - q * f for e, f in zip(h[i], h[p])]
                if u is not None:
                    u[i] = [e - q * f for e, f in zip(u[i], u[p])]
        pivots.append(c)
        p += 1
    return h, u, pivots


def hnf(m: Sequence[Sequence]) -> Tuple[Matrix, Matrix]:
    """Row Hermite normal form ``h`` and unimodular ``u`` with ``u·m = h``."""
    ints = to_integer_rows(m, 1)
    h, u, _ = hnf_int(ints)
    return mat(h), mat(u)


# ---------------------------------------------------------------------------
# Gaussian elimination over Q


def rref(m: Sequence[Sequence[Fraction]]) -> Tuple[List[List[Fraction]], List[int]]:
    a = [[frac(x) for x in r] for r in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        pr = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def rank(vectors: Sequence[Sequence[Fraction]]) -> int:
    if not vectors:
        return 0
    d = common_denominator(vectors)
    return len(hnf_int(to_integer_rows(vectors, d), with_transform=False)[2])


def is_independent(vectors: Sequence[Sequence[Fraction]]) -> bool:
    return rank(vectors) == len(vectors)


def det(m: Sequence[Sequence]) -> Fraction:
    """Exact determinant of a square matrix."""
    a = [[frac(x) for x in r] for r in m]
    n = len(a)
    if any(len(r) != n for r in a):
        raise ValueError("determinant of a non-square matrix")
    result = Fraction(1)
    for c in range(n):
        pr = next((i for i in range(c, n) if a[i][c] != 0), None)
        if pr is None:
            return Fraction(0)
        if pr != c:
            a[c], a[pr] = a[pr], a[c]
            result = -result
        piv = a[c][c]
        result *= piv
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = a[i][c] / piv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return result


def solve_rational(a: Sequence[Sequence], b: Sequence) -> Optional[Vector]:
    """Solve ``a·x = b`` for ``a`` with linearly independent columns.

    Returns ``None`` when ``b`` is outside the column span.
    """
    a = mat(a)
    b = vec(b)
    if len(a) != len(b):
        raise ValueError("dimension mismatch")
    ncols = len(a[0]) if a else 0
    aug = [list(row) + [rhs] for row, rhs in zip(a, b)]
    red, pivots = rref(aug)
    if ncols in pivots:
        return None
    if len(pivots) != ncols:
        raise ValueError("columns are linearly dependent")
    return tuple(red[i][ncols] for i in range(ncols))


def coordinates(basis: Sequence[Vector], v: Sequence[Fraction]) -> Optional[Vector]:
    """Coefficients of ``v`` in the (independent) row vectors ``basis``."""
    return solve_rational(transpose(basis), v)


def coordinates_many(basis: Sequence[Vector], targets: Sequence[Sequence[Fraction]]) -> List[Optional[Vector]]:
    """Coordinates of each target over the independent rows ``basis``."""
    k = len(basis)
    if not targets:
        return []
    cols = transpose(basis)
    aug = [list(row) + [frac(t[i]) for t in targets] for i, row in enumerate(cols)]
    red, pivots = rref(aug)
    if pivots[:k] != list(range(k)):
        raise ValueError("rows are linearly dependent")
    out: List[Optional[Vector]] = []
    for j in range(len(targets)):
        c = k + j
        if any(red[i][c] != 0 for i in range(k, len(red))):
            out.append(None)
        else:
            out.append(tuple(red[i][c] for i in range(k)))
    return out


def nullspace(m: Sequence[Sequence[Fraction]], ncols: int) -> List[Vector]:
    """Basis of ``{x : m·x = 0}`` over Q."""
    if not m:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    red, pivots = rref(m)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for r, pc in enumerate(pivots):
            x[pc] = -red[r][f]
        basis.append(tuple(x))
    return basis


# ---------------------------------------------------------------------------
# lattices


@dataclass(frozen=True)
class LatticeBasis:
    """Lattice given by linearly independent generating rows."""

    rows: Matrix

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def dim(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @classmethod
    def from_generators(cls, gens: Sequence[Sequence[Fraction]]) -> "LatticeBasis":
        gens = [vec(g) for g in gens if not is_zero(g)]
        if not gens:
            return cls(())
        d = common_denominator(gens)
        h, _, piv = hnf_int(to_integer_rows(gens, d), with_transform=False)
        return cls(tuple(tuple(Fraction(x, d) for x in h[i]) for i in range(len(piv))))

    def contains(self, v: Sequence[Fraction]) -> bool:
        return in_integer_span(self.rows, v) is not None

    def gram_det(self) -> Fraction:
        """Squared covolume (Gram determinant of the basis)."""
        return det([[dot(x, y) for y in self.rows] for x in self.rows])

    def index_in(self, other: "LatticeBasis") -> int:
        """Index of ``self`` in the superlattice ``other`` (same rank)."""
        ratio = self.gram_det() / other.gram_det()
        root = _exact_sqrt(ratio)
        if root is None or root.denominator != 1:
            raise ValueError("not a finite-index sublattice")
        return root.numerator


def _exact_sqrt(q: Fraction) -> Optional[Fraction]:
    from math import isqrt

    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _reduce_by_kernel(z: List[int], kernel: List[List[int]]) -> List[int]:
    # size reduction only, no LLL
    for _ in range(4):
        changed = False
        for k in kernel:
            kk = sum(x * x for x in k)
            t = Fraction(sum(a * b for a, b in zip(z, k)), kk)
            r = round(t)
            if r:
                z = [a - r * b for a, b in zip(z, k)]
                changed = True
        if not changed:
            break
    return z


def in_integer_span(gens: Sequence[Sequence], v: Sequence) -> Optional[Tuple[int, ...]]:
    """Integer coefficients ``z`` with ``sum z_i gens_i == v``, else ``None``.

    The returned combination is size-reduced against the integer relations
    among ``gens`` so that short combinations are preferred.
    """
    gens = [vec(g) for g in gens]
    v = vec(v)
    if not gens:
        return () if is_zero(v) else None
    d = common_denominator(gens + [v])
    g_int = to_integer_rows(gens, d)
    (target,) = to_integer_rows([v], d)
    h, u, piv = hnf_int(g_int)
    coeffs = []
    rem = list(target)
    for i, c in enumerate(piv):
        q, r = divmod(rem[c], h[i][c])
        if r:
            return None
        coeffs.append(q)
        if q:
            rem = [a - q * b for a, b in zip(rem, h[i])]
    if any(rem):
        return None
    z = [0] * len(gens)
    for i, q in enumerate(coeffs):
        if q:
            z = [a + q * b for a, b in zip(z, u[i])]
    kernel = [u[i] for i in range(len(piv), len(gens))]
    if kernel:
        z = _reduce_by_kernel(z, kernel)
    return tuple(z)


def integer_kernel(m: Sequence[Sequence[Fraction]]) -> List[List[int]]:
    """Basis of integer row vectors ``z`` with ``z·m == 0``."""
    if not m:
        return []
    ncols = len(m[0])
    if ncols == 0:
        return [[int(i == j) for j in range(len(m))] for i in range(len(m))]
    cols = transpose(m)
    d = common_denominator(cols)
    ints = to_integer_rows(m, d)
    h, u, piv = hnf_int(ints)
    return [u[i] for i in range(len(piv), len(m))]


def lattice_points_in_box(b: Sequence[Sequence], lat) -> List[Vector]:
    """Points of ``lat`` in the half-open parallelepiped spanned by ``b``.

    ``lat`` is a :class:`LatticeBasis` or a list of generators.  Points are
    returned in lexicographic order of their coefficient vectors over ``b``.
    """
    pts = lattice_points_in_box_with_coeffs(b, lat)
    return [p for p, _ in pts]


def lattice_points_in_box_with_coeffs(
    b: Sequence[Sequence], lat
) -> List[Tuple[Vector, Vector]]:
    b = [vec(x) for x in b]
    if not isinstance(lat, LatticeBasis):
        lat = LatticeBasis.from_generators(lat)
    k = len(b)
    if k == 0:
        return []
    if not is_independent(b):
        raise ValueError("box generators are linearly dependent")
    n = len(b[0])
    if lat.rank == 0:
        return [(tuple(Fraction(0) for _ in range(n)), tuple(Fraction(0) for _ in range(k)))]
    # lat ∩ span(b): integer combos z of lat rows with z·L·C = 0, C ⟂ span(b)
    comp = nullspace(b, n)
    lrows = list(lat.rows)
    if comp:
        m = [[dot(r, c) for c in comp] for r in lrows]
        kern = integer_kernel(m)
        sub_rows = [combo(z, lrows) for z in kern]
    else:
        sub_rows = lrows
    sub_rows = [r for r in sub_rows if not is_zero(r)]
    coords = coordinates_many(b, sub_rows)
    if any(c is None for c in coords):
        raise ArithmeticError("lattice intersection left span(b)")
    if not coords:
        return [(tuple(Fraction(0) for _ in range(n)), tuple(Fraction(0) for _ in range(k)))]
    d = common_denominator(coords)
    h, _, piv = hnf_int(to_integer_rows(coords, d), with_transform=False)
    ech = [[Fraction(x, d) for x in h[i]] for i in range(len(piv))]

    found: List[Vector] = []

    def rec(i: int, partial: List[Fraction]) -> None:
        if i == len(ech):
            if all(0 <= x < 1 for x in partial):
                found.append(tuple(partial))
            return
        c = piv[i]
        hv = ech[i][c]
        lo = _ceil(-partial[c] / hv)
        hi = _ceil((1 - partial[c]) / hv) - 1
        for z in range(lo, hi + 1):
            nxt = [p + z * e for p, e in zip(partial, ech[i])] if z else partial
            rec(i + 1, nxt)

    rec(0, [Fraction(0)] * k)
    found.sort()
    return [(combo(q, b), q) for q in found]


def _ceil(q: Fraction) -> int:
    return -((-q.numerator) // q.denominator)
