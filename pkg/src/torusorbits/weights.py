"""Weight systems ``M(λ) = (λ + Ξ) ∩ P(λ)``.

Membership is decided by the dominance criterion: ``μ ∈ M(λ)`` iff the
dominant representative of ``W·μ`` lies below ``λ`` with nonnegative integer
coefficients over the simple roots.  :func:`hull_member_oracle` decides the
same question literally (convex hull of the orbit plus the lattice test) and
exists to cross-check the criterion.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .linalg import Vector, fmt_vector, is_zero, sub, vec
from .lp import feasible_nonneg
from .rootsys import DEFAULT_ORBIT_CAP, RootSystem, SizeLimitError

DEFAULT_ENUM_CAP = 10**5


@dataclass(frozen=True)
class MemberProof:
    """Why ``mu`` is (or is not) a weight of ``V(lam)``."""

    lam: Vector
    mu: Vector
    member: bool
    dominant: Vector
    word: Tuple[int, ...]
    dominance_coeffs: Optional[Tuple[int, ...]]
    lam_word: Tuple[int, ...] = ()

    def to_json(self) -> dict:
        return {
            "highest_weight": fmt_vector(self.lam),
            "weight": fmt_vector(self.mu),
            "member": self.member,
            "dominant_representative": fmt_vector(self.dominant),
            "reflection_word": [i + 1 for i in self.word],
            "dominance_coefficients": None
            if self.dominance_coeffs is None
            else list(self.dominance_coeffs),
        }


@dataclass(frozen=True)
class WeightSystem:
    system: RootSystem
    highest_weight: Vector
    members: Tuple[Vector, ...]

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, v) -> bool:
        return vec(v) in set(self.members)

    def nonzero(self) -> List[Vector]:
        return [m for m in self.members if not is_zero(m)]


def _dominant_lambda(rs: RootSystem, lam: Sequence[Fraction]) -> Tuple[Vector, Tuple[int, ...]]:
    lam = rs.weight(lam)
    rec = rs.dominant_rep(lam)
    return rec.dominant, rec.word


def member(rs: RootSystem, lam: Sequence[Fraction], mu: Sequence[Fraction]) -> MemberProof:
    """Decide ``mu ∈ M(lam)``; a non-dominant ``lam`` is first made dominant."""
    dom_lam, lam_word = _dominant_lambda(rs, lam)
    mu = rs.weight(mu)
    rec = rs.dominant_rep(mu)
    coeffs = rs.dominance_leq(rec.dominant, dom_lam)
    return MemberProof(dom_lam, mu, coeffs is not None, rec.dominant, rec.word, coeffs, lam_word)


def is_member(rs: RootSystem, lam, mu) -> bool:
    return member(rs, lam, mu).member


def dominant_weights_below(rs: RootSystem, lam: Sequence[Fraction], cap: int = DEFAULT_ENUM_CAP) -> List[Vector]:
    """Dominant ``μ`` with ``λ - μ ∈ Z≥0 Δ``, by subtracting positive roots.

    Completeness relies on the fact that covers in the dominance order of
    dominant weights differ by a positive root.
    """
    lam = vec(lam)
    seen = {lam}
    queue = deque([lam])
    pos = rs.positive_roots
    while queue:
        mu = queue.popleft()
        for a in pos:
            nu = sub(mu, a)
            if nu not in seen and rs.is_dominant(nu):
                seen.add(nu)
                if len(seen) > cap:
                    raise SizeLimitError(f"more than {cap} dominant weights below {fmt_vector(lam)}")
                queue.append(nu)
    return sorted(seen)


def enumerate_weights(rs: RootSystem, lam: Sequence[Fraction], cap: int = DEFAULT_ENUM_CAP) -> WeightSystem:
    """Materialize ``M(λ)`` (sorted lexicographically)."""
    dom_lam, _ = _dominant_lambda(rs, lam)
    out = set()
    for mu in dominant_weights_below(rs, dom_lam, cap):
        out.update(rs.weyl_orbit(mu, cap=DEFAULT_ORBIT_CAP))
        if len(out) > cap:
            raise SizeLimitError(f"|M({fmt_vector(dom_lam)})| exceeds cap {cap}")
    return WeightSystem(rs, dom_lam, tuple(sorted(out)))


def hull_member_oracle(
    rs: RootSystem, lam: Sequence[Fraction], mu: Sequence[Fraction], orbit_cap: int = 20_000
) -> bool:
    """``mu ∈ (λ + Ξ) ∩ conv(W·λ)`` decided by exact linear feasibility."""
    lam = rs.weight(lam)
    mu = rs.weight(mu)
    if rs.lattice_test(sub(mu, lam)) != 0:
        return False
    orbit = rs.weyl_orbit(lam, cap=orbit_cap)
    cols = [tuple(p) + (Fraction(1),) for p in orbit]
    res = feasible_nonneg(cols, tuple(mu) + (Fraction(1),))
    return res.feasible
