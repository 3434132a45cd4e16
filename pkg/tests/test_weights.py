import itertools
import random
from fractions import Fraction as F

import pytest

from torusorbits.linalg import vec
from torusorbits.rootsys import build, reflect
from torusorbits.weights import enumerate_weights, hull_member_oracle, is_member, member

HALF = F(1, 2)


def test_member_examples():
    g2 = build("G2")
    p1, p2 = g2.fundamental_weights
    assert is_member(g2, p1, p1)
    assert is_member(g2, p1, vec(1, -1, 0))
    assert not is_member(g2, p1, p2)
    e8 = build("E8")
    assert is_member(e8, vec(2, 0, 0, 0, 0, 0, 0, 0), vec(1, 1, 0, 0, 0, 0, 0, 0))


def test_member_proof_record():
    g2 = build("G2")
    p1, p2 = g2.fundamental_weights
    proof = member(g2, p2, vec(0, 1, -1))
    assert proof.member and proof.dominant == p1 and proof.dominance_coeffs == (1, 1)
    assert g2.apply_word(proof.word, proof.mu) == proof.dominant
    js = proof.to_json()
    assert js["member"] is True and js["dominance_coefficients"] == [1, 1]


@pytest.mark.parametrize(
    "sid,labels,n",
    [
        ("G2", (1, 0), 7),
        ("G2", (0, 1), 13),
        ("F4", (1, 0, 0, 0), 25),
        ("F4", (0, 0, 0, 1), 49),
        ("E6", (1, 0, 0, 0, 0, 0), 27),
        ("E6", (0, 1, 0, 0, 0, 0), 73),
        ("E7", (0, 0, 0, 0, 0, 0, 1), 56),
        ("A1", (3,), 4),
        ("A2", (2, 0), 6),
        ("B2", (0, 1), 4),
    ],
)
def test_enumeration_sizes(sid, labels, n):
    rs = build(sid)
    assert len(enumerate_weights(rs, rs.from_dynkin([F(x) for x in labels]))) == n


def test_enumerate_zero():
    for sid in ("G2", "F4", "E6"):
        rs = build(sid)
        ws = enumerate_weights(rs, rs.from_dynkin([F(0)] * rs.rank))
        assert ws.members == (tuple(F(0) for _ in range(rs.ambient_dim)),)


def test_g2_short_roots():
    g2 = build("G2")
    ws = enumerate_weights(g2, g2.fundamental_weights[0])
    short = {vec(0, 1, -1), vec(0, -1, 1), vec(1, 0, -1), vec(-1, 0, 1), vec(1, -1, 0), vec(-1, 1, 0)}
    assert set(ws.nonzero()) == short
    assert vec(0, 0, 0) in ws


def test_g2_pi2_is_all_roots_and_zero():
    g2 = build("G2")
    ws = enumerate_weights(g2, g2.fundamental_weights[1])
    assert set(ws.nonzero()) == set(g2.roots)


def test_hull_oracle_examples():
    g2 = build("G2")
    p1, p2 = g2.fundamental_weights
    assert hull_member_oracle(g2, p2, p2)
    assert hull_member_oracle(g2, p2, vec(-1, 0, 1))
    assert not hull_member_oracle(g2, p1, p2)


@pytest.mark.parametrize("sid", ["G2", "F4"])
def test_member_matches_enumeration_in_box(sid):
    rs = build(sid)
    for lam in rs.fundamental_weights:
        ws = set(enumerate_weights(rs, lam).members)
        rng = range(-2, 3)
        for c in itertools.product(rng, repeat=rs.rank):
            mu = rs.from_dynkin([F(x) for x in c])
            assert is_member(rs, lam, mu) == (mu in ws)


@pytest.mark.parametrize("sid", ["G2", "F4"])
def test_member_matches_hull_oracle(sid):
    rs = build(sid)
    rng = random.Random(5)
    lams = [rs.fundamental_weights[i] for i in range(rs.rank)]
    for _ in range(120):
        lam = rng.choice(lams)
        mu = rs.from_dynkin([F(rng.randint(-3, 3)) for _ in range(rs.rank)])
        assert is_member(rs, lam, mu) == hull_member_oracle(rs, lam, mu)


@pytest.mark.parametrize("sid,labels", [("G2", (1, 1)), ("F4", (0, 0, 0, 1)), ("E6", (1, 0, 0, 0, 0, 1))])
def test_weight_system_invariants(sid, labels):
    rs = build(sid)
    lam = rs.from_dynkin([F(x) for x in labels])
    ws = enumerate_weights(rs, lam)
    members = set(ws.members)
    assert lam in members
    label = rs.lattice_test(lam)
    assert all(rs.lattice_test(m) == label for m in members)
    for a in rs.simple_roots:
        assert {reflect(a, m) for m in members} == members


def test_monotonicity():
    f4 = build("F4")
    rng = random.Random(2)
    for _ in range(8):
        small = [F(0)] * 4
        small[rng.randrange(4)] = F(1)
        big = list(small)
        big[rng.randrange(4)] += 1
        a = set(enumerate_weights(f4, f4.from_dynkin(small)).members)
        b = set(enumerate_weights(f4, f4.from_dynkin(big)).members)
        assert a <= b


def test_non_dominant_highest_weight_is_reduced():
    g2 = build("G2")
    a = enumerate_weights(g2, vec(0, 1, -1))
    b = enumerate_weights(g2, g2.fundamental_weights[0])
    assert a.members == b.members and a.highest_weight == b.highest_weight
