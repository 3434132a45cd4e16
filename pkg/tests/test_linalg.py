import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import bounded_integer_span
from torusorbits.linalg import (
    LatticeBasis,
    coordinates,
    det,
    fmt_rational,
    fmt_vector,
    hnf,
    hnf_int,
    identity,
    in_integer_span,
    integer_kernel,
    is_independent,
    lattice_points_in_box,
    matmul,
    parse_vector,
    rank,
    solve_rational,
    vec,
)
from torusorbits.rootsys import build

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

small_ints = st.integers(-4, 4)


def int_matrix(rows, cols):
    return st.lists(st.lists(small_ints, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


# -- hnf ------------------------------------------------------------------


def test_hnf_identity():
    h, u = hnf(identity(3))
    assert h == identity(3) and u == identity(3)


def test_hnf_two_by_two():
    h, _ = hnf([[1, 2], [3, 4]])
    assert h == ((1, 0), (0, 2))


def test_hnf_zero_row():
    h, _ = hnf([[0, 0]])
    assert h == ((0, 0),)


@given(st.integers(1, 4).flatmap(lambda r: st.integers(1, 4).flatmap(lambda c: int_matrix(r, c))))
def test_hnf_round_trip(m):
    h, u = hnf(m)
    assert [list(r) for r in matmul(u, m)] == [list(r) for r in h]
    assert abs(det(u)) == 1


@given(int_matrix(3, 3))
def test_hnf_is_echelon_with_reduced_columns(m):
    h, _, piv = hnf_int(m, with_transform=False)
    for i, p in enumerate(piv):
        assert h[i][p] > 0
        assert all(h[i][j] == 0 for j in range(p))
        for k in range(i):
            assert 0 <= h[k][p] < h[i][p]
    assert piv == sorted(piv)


# -- det / solve -----------------------------------------------------------


def test_det_examples():
    assert det(identity(4)) == 1
    assert det([[1, 2], [3, 4]]) == -2
    rows = [vec(1, 0, 0, 0), vec(0, 1, 0, 0), vec(0, 0, 1, 0), vec(HALF, HALF, HALF, HALF)]
    assert det(rows) == HALF


def test_det_rejects_non_square():
    with pytest.raises(ValueError):
        det([[1, 2, 3], [4, 5, 6]])


def test_solve_identity():
    v = vec(3, F(-1, 2), 7)
    assert solve_rational(identity(3), v) == v


def test_solve_e8_half_combination():
    cols = [list(r) for r in zip(*E8_SET[:6])]
    assert solve_rational(cols, vec(1, 1, 0, 0, 0, 0, 0, 0)) == tuple([HALF] * 6)


def test_solve_outside_span_is_absent():
    assert solve_rational([[1], [0]], vec(0, 1)) is None


def test_solve_dependent_columns_raise():
    with pytest.raises(ValueError):
        solve_rational([[1, 2], [1, 2]], vec(1, 1))


@given(int_matrix(3, 3), st.lists(small_ints, min_size=3, max_size=3))
def test_coordinates_reconstruct(m, x):
    if not is_independent(m):
        return
    v = tuple(sum(F(xi) * m[i][j] for i, xi in enumerate(x)) for j in range(3))
    assert coordinates(m, v) == tuple(F(xi) for xi in x)


def test_rank():
    assert rank([vec(1, 2), vec(2, 4)]) == 1
    assert rank(E8_SET[:6]) == 6
    assert rank(E8_SET) == 7


# -- integer span ----------------------------------------------------------


def test_integer_span_unit():
    gens = [vec(2, 1), vec(0, 3)]
    assert in_integer_span(gens, gens[0]) == (1, 0)


def test_integer_span_e8_uses_last_two():
    assert in_integer_span(E8_SET, vec(1, 1, 0, 0, 0, 0, 0, 0)) == (0, 0, 0, 0, 0, 0, 1, -1)


def test_integer_span_half_of_primitive_is_absent():
    assert in_integer_span([vec(2, 1)], vec(1, HALF)) is None


@given(
    st.lists(st.lists(st.integers(-2, 2), min_size=3, max_size=3), min_size=1, max_size=3),
    st.lists(st.integers(-3, 3), min_size=3, max_size=3),
)
def test_integer_span_matches_bounded_search(gens, v):
    z = in_integer_span([vec(*g) for g in gens], vec(*v))
    assert (z is not None) == bounded_integer_span(gens, v)
    if z is not None:
        assert [sum(zi * g[j] for zi, g in zip(z, gens)) for j in range(3)] == v


def test_integer_kernel():
    k = integer_kernel([vec(1, 2, 3), vec(2, 4, 6), vec(0, 0, 1)])
    assert len(k) == 1
    assert sorted(map(abs, k[0])) == [0, 2, 2] or sorted(map(abs, k[0])) == [0, 1, 2]


# -- lattices and boxes ----------------------------------------------------


def test_box_standard_basis():
    assert lattice_points_in_box(identity(2), identity(2)) == [vec(0, 0)]


def test_box_skew_basis():
    pts = lattice_points_in_box([vec(1, 1), vec(1, -1)], identity(2))
    assert sorted(pts) == [vec(0, 0), vec(1, 0)]


def test_box_f4_weight_lattice():
    f4 = build("F4")
    pts = lattice_points_in_box(identity(4), f4.weight_lattice.rows)
    assert sorted(pts) == [vec(0, 0, 0, 0), tuple([HALF] * 4)]


def test_box_rejects_dependent_basis():
    with pytest.raises(ValueError):
        lattice_points_in_box([vec(1, 0), vec(2, 0)], identity(2))


@given(int_matrix(2, 2), int_matrix(2, 2))
def test_box_count_matches_index(b, lat):
    if not is_independent(b) or not is_independent(lat):
        return
    lb = LatticeBasis.from_generators(lat)
    if not all(lb.contains(v) for v in b):
        b = [tuple(F(sum(c * r[j] for c, r in zip(row, lat))) for j in range(2)) for row in b]
    pts = lattice_points_in_box(b, lat)
    assert len(pts) == abs(det(b) / det(lat))
    for p in pts:
        q = coordinates(b, p)
        assert all(0 <= x < 1 for x in q)
        assert lb.contains(p)


def test_box_in_subspace():
    # a 2-dimensional box inside Z^3
    b = [vec(1, 1, 0), vec(0, 1, 1)]
    pts = lattice_points_in_box(b, identity(3))
    assert pts == [vec(0, 0, 0)]
    b = [vec(2, 0, 0), vec(0, 1, 1)]
    assert sorted(lattice_points_in_box(b, identity(3))) == [vec(0, 0, 0), vec(1, 0, 0)]


def test_lattice_index():
    e6 = build("E6")
    assert e6.root_lattice.index_in(e6.weight_lattice) == 3


def test_deterministic_outputs():
    b = [vec(2, 1), vec(-1, 3)]
    assert lattice_points_in_box(b, identity(2)) == lattice_points_in_box(b, identity(2))
    assert hnf([[4, 6], [2, 9]]) == hnf([[4, 6], [2, 9]])


# -- serialization ---------------------------------------------------------


def test_rational_strings():
    assert fmt_rational(F(-3, 6)) == "-1/2"
    assert fmt_rational(F(4)) == "4"
    assert fmt_vector(vec(HALF, 2)) == ["1/2", "2"]
    assert parse_vector(["1/3", "-2"]) == (F(1, 3), F(-2))


@given(st.lists(st.fractions(max_denominator=12), min_size=1, max_size=6))
def test_rational_round_trip(xs):
    v = tuple(xs)
    assert parse_vector(fmt_vector(v)) == v


def test_bruteforce_box_agrees_on_small_grid():
    # every lattice point of the half-open box, by direct scan over a grid
    b = [vec(2, 1), vec(1, 3)]
    expected = []
    for x, y in itertools.product(range(-1, 5), repeat=2):
        q = coordinates(b, vec(x, y))
        if all(0 <= c < 1 for c in q):
            expected.append(vec(x, y))
    assert sorted(lattice_points_in_box(b, identity(2))) == sorted(expected)
