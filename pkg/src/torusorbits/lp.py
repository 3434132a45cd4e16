"""Exact feasibility for ``A x = b, x >= 0`` over the rationals.

Phase-one simplex on a dense Fraction tableau with Bland's rule.  Every answer
comes with a certificate: a nonnegative solution, or a Farkas vector ``y``
with ``y·A_j >= 0`` for every column and ``y·b < 0``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .linalg import Vector, dot, frac


@dataclass(frozen=True)
class Feasibility:
    solution: Optional[Vector]
    farkas: Optional[Vector]

    @property
    def feasible(self) -> bool:
        return self.solution is not None


def feasible_nonneg(columns: Sequence[Sequence], b: Sequence) -> Feasibility:
    """Decide whether ``b`` is a nonnegative combination of ``columns``.

    ``columns`` are the columns of ``A`` (each of length ``len(b)``).
    """
    cols = [tuple(frac(x) for x in c) for c in columns]
    rhs = [frac(x) for x in b]
    m = len(rhs)
    n = len(cols)
    if any(len(c) != m for c in cols):
        raise ValueError("dimension mismatch")
    if all(x == 0 for x in rhs):
        return Feasibility(tuple(Fraction(0) for _ in range(n)), None)

    sign = [(-1 if x < 0 else 1) for x in rhs]
    # tableau rows: [A (n) | I (m) | b]
    t: List[List[Fraction]] = []
    for i in range(m):
        s = sign[i]
        row = [s * cols[j][i] for j in range(n)]
        row += [Fraction(int(i == k)) for k in range(m)]
        row.append(s * rhs[i])
        t.append(row)
    basis = [n + i for i in range(m)]
    width = n + m
    cost = [Fraction(0)] * n + [Fraction(1)] * m

    def reduced(j: int) -> Fraction:
        return cost[j] - sum((cost[basis[r]] * t[r][j] for r in range(m)), Fraction(0))

    while True:
        enter = next((j for j in range(width) if reduced(j) < 0), None)
        if enter is None:
            break
        best: Optional[Tuple[Fraction, int, int]] = None
        for r in range(m):
            a = t[r][enter]
            if a > 0:
                key = (t[r][-1] / a, basis[r], r)
                if best is None or key < best:
                    best = key
        if best is None:  # cannot happen: phase one is bounded below by 0
            raise ArithmeticError("unbounded phase-one problem")
        r = best[2]
        piv = t[r][enter]
        t[r] = [x / piv for x in t[r]]
        for i in range(m):
            if i != r and t[i][enter] != 0:
                f = t[i][enter]
                t[i] = [x - f * y for x, y in zip(t[i], t[r])]
        basis[r] = enter

    objective = sum((cost[basis[r]] * t[r][-1] for r in range(m)), Fraction(0))
    if objective == 0:
        x = [Fraction(0)] * n
        for r in range(m):
            if basis[r] < n:
                x[basis[r]] = t[r][-1]
        sol = tuple(x)
        return Feasibility(sol, None)
    # duals of the phase-one problem: y_i = c_B · B^{-1}[:, i]
    y = []
    for i in range(m):
        yi = sum((cost[basis[r]] * t[r][n + i] for r in range(m)), Fraction(0))
        y.append(-yi * sign[i])
    farkas = tuple(y)
    if any(dot(farkas, c) < 0 for c in cols) or dot(farkas, rhs) >= 0:
        raise ArithmeticError("phase one produced an invalid Farkas certificate")
    return Feasibility(None, farkas)
