import itertools
import random
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import brute_is_saturated, exhaustive_nonneg, random_unimodular
from torusorbits.linalg import det, vec
from torusorbits.rootsys import build, reflect
from torusorbits.saturation import (
    EnssWitness,
    VectorSet,
    in_rational_cone,
    is_hereditarily_normal,
    is_saturated,
    nonneg_combination,
    nonneg_integer_solve,
    verify_discriminating,
)
from torusorbits.weights import enumerate_weights

HALF = F(1, 2)
E8_SET = [
    vec(1, 0, 1, 0, 0, 0, 0, 0),
    vec(1, 0, 0, 1, 0, 0, 0, 0),
    vec(0, 1, 0, 0, 1, 0, 0, 0),
    vec(0, 1, 0, 0, 0, 1, 0, 0),
    vec(0, 0, -1, -1, 0, 0, 0, 0),
    vec(0, 0, 0, 0, -1, -1, 0, 0),
    vec(1, 0, 0, 0, 0, 0, 1, 0),
    vec(0, -1, 0, 0, 0, 0, 1, 0),
]
G2_SET = [vec(-1, -1, 2), vec(-2, 1, 1), vec(0, -1, 1)]

vectors3 = st.lists(st.tuples(*[st.integers(-2, 2)] * 3), min_size=1, max_size=5)


# -- nonnegative integer solving ------------------------------------------


def test_solve_zero_target():
    assert nonneg_integer_solve([[1, 2], [3, 4]], (0, 0)) == (0, 0)


def test_solve_one_dimensional():
    assert nonneg_integer_solve([[17, 14, 2]], (15,)) is None
    assert nonneg_integer_solve([[17, 14, 2]], (16,)) == (0, 1, 1)


@given(
    st.lists(st.lists(st.integers(0, 3), min_size=2, max_size=2), min_size=1, max_size=4),
    st.lists(st.integers(0, 7), min_size=2, max_size=2),
)
def test_solver_matches_exhaustive_search(cols, b):
    got = nonneg_combination([vec(*c) for c in cols], vec(*b))
    expected = exhaustive_nonneg(cols, b)
    assert (got is None) == (expected is None)
    if got is not None:
        assert all(n >= 0 for n in got)
        assert [sum(n * c[i] for n, c in zip(got, cols)) for i in range(2)] == b


@given(vectors3, st.tuples(*[st.integers(-4, 4)] * 3))
def test_solver_with_lineality(gens, v):
    # signed generators: compare against reachability in a box
    got = nonneg_combination([vec(*g) for g in gens], vec(*v))
    if got is not None:
        assert all(n >= 0 for n in got)
        assert tuple(sum(n * g[i] for n, g in zip(got, gens)) for i in range(3)) == v


# -- rational cone ---------------------------------------------------------


def test_cone_zero_is_empty_combination():
    res = in_rational_cone([vec(1, 0)], vec(0, 0))
    assert res.member and all(c == 0 for c in res.coeffs)


def test_cone_e8_half_coefficients():
    res = in_rational_cone(E8_SET[:6], vec(1, 1, 0, 0, 0, 0, 0, 0))
    assert res.coeffs == tuple([HALF] * 6)


def test_cone_opposite_ray_separated():
    res = in_rational_cone([vec(1, 0)], vec(-1, 0))
    y = res.separator
    assert not res.member
    assert y[0] * 1 >= 0 and -y[0] < 0


# -- discriminating functionals -------------------------------------------


def test_discriminating_zero_value_is_not_discriminating():
    assert not verify_discriminating(vec(1, 0), vec(0, 1), [vec(1, 0)])


def test_discriminating_trivial_positive():
    assert verify_discriminating(vec(1), vec(1), [vec(2)])


# -- saturation ------------------------------------------------------------


def test_standard_basis_saturated():
    for n in (1, 2, 4):
        basis = [tuple(F(int(i == j)) for j in range(n)) for i in range(n)]
        assert is_saturated(basis).saturated


def test_degenerate_inputs_saturated():
    assert is_saturated([]).saturated
    assert is_saturated([vec(0, 0)]).saturated


def test_e8_set_witness():
    v = is_saturated(E8_SET)
    assert not v.saturated
    w = v.witness
    assert w.v0 == vec(1, 1, 0, 0, 0, 0, 0, 0)
    assert w.verify()


def test_g2_set_witness():
    v = is_saturated(G2_SET)
    assert not v.saturated
    assert v.witness.v0 == vec(-1, 0, 1)
    assert v.witness.rational_coeffs == (F(1, 3), F(1, 3))
    assert v.witness.verify()


def test_witness_checks_detect_tampering():
    w = is_saturated(G2_SET).witness
    bad = EnssWitness(G2_SET[0], w.subset, w.independent_indices, w.rational_coeffs, w.integer_coeffs)
    checks = bad.checks()
    assert not checks["not_nonnegative_combination"]
    assert not bad.verify()


def test_oracle_agreement_random_sets():
    rng = random.Random(20240)
    for _ in range(200):
        d = rng.randint(1, 3)
        s = [tuple(rng.randint(-2, 2) for _ in range(d)) for _ in range(rng.randint(1, 5))]
        got = is_saturated([vec(*v) for v in s])
        expected, _ = brute_is_saturated(s)
        assert got.saturated == expected, s
        if not got.saturated:
            assert got.witness.verify()


@given(vectors3, st.randoms(use_true_random=False))
def test_unimodular_permutation_negation_invariance(s, rnd):
    base = is_saturated([vec(*v) for v in s]).saturated
    u = random_unimodular(rnd, 3)
    us = [tuple(sum(u[i][j] * v[j] for j in range(3)) for i in range(3)) for v in s]
    assert is_saturated([vec(*v) for v in us]).saturated == base
    perm = list(s)
    rnd.shuffle(perm)
    assert is_saturated([vec(*v) for v in perm]).saturated == base
    assert is_saturated([vec(*(-x for x in v)) for v in s]).saturated == base


def test_vector_set_dedupes_and_round_trips():
    s = VectorSet([vec(1, 2), vec(1, 2), vec(HALF, 0)])
    assert len(s) == 2
    assert VectorSet.from_json(s.to_json()) == s
    with pytest.raises(ValueError):
        VectorSet([vec(1, 2), vec(1, 2, 3)])


# -- hereditary normality -------------------------------------------------


def test_hereditary_standard_basis():
    assert is_hereditarily_normal([vec(1, 0, 0), vec(0, 1, 0), vec(0, 0, 1)]).normal


def test_hereditary_g2_pi1_normal():
    g2 = build("G2")
    m = enumerate_weights(g2, g2.fundamental_weights[0]).nonzero()
    assert is_hereditarily_normal(m).normal


def test_hereditary_g2_pi2_witness():
    g2 = build("G2")
    m = enumerate_weights(g2, g2.fundamental_weights[1]).nonzero()
    v = is_hereditarily_normal(m)
    assert not v.normal
    w = v.witness
    assert w.verify()
    assert w.v0 == vec(-1, 0, 1)
    basis = {w.subset[i] for i in w.independent_indices}
    assert basis == {vec(-2, 1, 1), vec(-1, -1, 2)}


def test_hereditary_symmetry_gives_same_verdict():
    g2 = build("G2")
    sym = [lambda v, a=a: reflect(a, v) for a in g2.simple_roots]
    for lam in g2.fundamental_weights:
        m = enumerate_weights(g2, lam).nonzero()
        assert is_hereditarily_normal(m).status == is_hereditarily_normal(m, symmetry=sym).status


def test_hereditary_normal_implies_subsets_saturated():
    f4 = build("F4")
    m = enumerate_weights(f4, f4.fundamental_weights[0]).nonzero()
    sym = [lambda v, a=a: reflect(a, v) for a in f4.simple_roots]
    assert is_hereditarily_normal(m, symmetry=sym).normal
    rng = random.Random(9)
    for _ in range(50):
        s = rng.sample(m, rng.randint(1, 8))
        assert is_saturated(s).saturated


def test_hereditary_against_subset_enumeration():
    rng = random.Random(4)
    for _ in range(25):
        m = {tuple(F(rng.randint(-2, 2)) for _ in range(2)) for _ in range(rng.randint(2, 5))}
        m = sorted(v for v in m if any(v))
        if not m:
            continue
        brute = all(
            is_saturated(list(sub)).saturated
            for k in range(1, len(m) + 1)
            for sub in itertools.combinations(m, k)
        )
        assert is_hereditarily_normal(m).normal == brute


def test_hereditary_parallel_matches_serial():
    g2 = build("G2")
    m = enumerate_weights(g2, g2.fundamental_weights[1]).nonzero()
    a = is_hereditarily_normal(m)
    b = is_hereditarily_normal(m, workers=2)
    assert a.to_json()["witness"] == b.to_json()["witness"]


def test_f4_determinant_property_sample():
    f4 = build("F4")
    short = enumerate_weights(f4, f4.fundamental_weights[0]).nonzero()
    assert len(short) == 24
    for quad in itertools.islice(itertools.combinations(short, 4), 0, None, 37):
        assert abs(det(quad)) in (0, HALF, 1)
