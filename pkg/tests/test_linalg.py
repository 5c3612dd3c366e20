import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rankshare.field import field_make
from rankshare.linalg import (
    DimensionMismatch,
    EnumerationLimitError,
    Mat,
    Subspace,
    adapted_form,
    coordinates_in,
    embed,
    enumerate_gl,
    enumerate_subspaces,
    gaussian_binomial,
    gl_order,
    image,
    intersect,
    inverse,
    is_nondegenerate_on,
    lattice,
    lattice_size,
    nullspace,
    orthocomplement,
    quotient_setup,
    rank_of,
    rref,
    solve,
    span_sum,
    subspace_from_rows,
    subspaces_of,
)

from conftest import brute_subspaces, span

F2 = field_make(2)
F3 = field_make(3)
F4 = field_make(2, 2)


def test_rref_identity():
    R, piv, rank = rref(F2, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert [list(r) for r in R] == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert (list(piv), rank) == ([0, 1, 2], 3)


def test_rref_duplicate_rows():
    R, piv, rank = rref(F2, [[1, 0, 0, 1], [1, 0, 0, 1]])
    assert rank == 1 and list(piv) == [0]
    assert list(R[1]) == [0, 0, 0, 0]


def test_rank_of_printed_dealt_matrix(ex1):
    # rows 2 and 3 coincide and row 1 + row 4 is independent of them
    assert ex1["X"].rank() == 3


def test_rref_over_gf4_normalises_pivots():
    R, piv, rank = rref(F4, [[2, 3], [3, 1]])
    det = F4.sub(F4.mul(2, 1), F4.mul(3, 3))
    assert rank == (2 if det else 1)
    assert R[0][piv[0]] == 1


def test_nullspace_and_solve_random():
    rng = random.Random(3)
    for _ in range(50):
        F = rng.choice([F2, F3, F4])
        k, n = rng.randint(1, 4), rng.randint(1, 5)
        A = [[rng.randrange(F.q) for _ in range(n)] for _ in range(k)]
        K = nullspace(F, A, n)
        assert len(K) == n - rank_of(F, A, n)
        for x in K:
            assert all(sum_dot(F, row, x) == 0 for row in A)
        c = [rng.randrange(F.q) for _ in range(k)]
        b = Mat.of(F, [c]) @ Mat.of(F, A)
        sol = solve(F, A, [b.rows[0]])
        assert sol is not None
        assert (Mat.of(F, [sol[0]]) @ Mat.of(F, A)) == b


def sum_dot(F, a, b):
    s = 0
    for x, y in zip(a, b):
        s = F.add(s, F.mul(x, y))
    return s


def test_solve_infeasible():
    assert solve(F2, [[1, 0]], [[0, 1]]) is None
    assert solve(F2, [], [[0, 0]]) == [()]


def test_mat_ops():
    A = Mat.of(F3, [[1, 2], [0, 1]])
    assert A @ inverse(A) == Mat.identity(F3, 2)
    assert A.T.rows == ((1, 0), (2, 1))
    assert (A + A - A) == A
    assert A.scale(2).rows == ((2, 1), (0, 2))
    assert Mat.unflatten(F3, A.flatten(), 2, 2) == A
    with pytest.raises(ValueError):
        Mat.of(F3, [[1, 2], [0]])
    with pytest.raises(ValueError):
        Mat.of(F3, [[3]])


def test_subspace_from_rows_examples(ex1):
    p2 = subspace_from_rows(Mat.of(F2, [[0, 1, 1, 0]]))
    assert p2 == ex1["p2"] and p2.dim == 1
    assert Subspace.span(F2, [[0, 0, 0, 0]], 4).dim == 0
    P = subspace_from_rows(Mat.of(F2, [[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]))
    assert P == ex1["P"] and P.dim == 3


def test_sum_intersect_contains(ex1):
    V = span_sum(ex1["p1"], ex1["p2"])
    assert V.dim == 2
    assert V == span(F2, [0, 1, 0, 0], [0, 0, 1, 0])
    assert intersect(V, V) == V
    assert ex1["P"].contains(ex1["p1"])
    assert not ex1["p1"].contains(ex1["P"])


def test_orthocomplement_examples(ex1):
    E = Subspace.full(F2, 4)
    assert orthocomplement(E) == Subspace.zero(F2, 4)
    assert orthocomplement(span(F2, [1, 0, 0, 0])) == ex1["P"]
    W = orthocomplement(ex1["P0"])
    assert W.dim == 3
    assert W.has_vector((1, 0, 0, 1))  # isotropic in characteristic 2
    assert all(sum_dot(F2, r, (1, 0, 0, 1)) == 0 for r in W.rows)


def test_quotient_chart_examples(ex1):
    Q = quotient_setup(4, Subspace.zero(F2, 4))
    assert Q.complement == Subspace.full(F2, 4)
    assert Q.forward(ex1["P"]) == ex1["P"]
    assert quotient_setup(4, span(F2, [1, 0, 0, 0])).complement == ex1["P"]
    assert quotient_setup(4, ex1["P0"]).complement == ex1["P"]


def test_canonical_round_trip_over_lattice():
    for V in enumerate_subspaces(F2, 4):
        assert subspace_from_rows(V.basis) == V
        assert Subspace.span(F2, reversed(V.rows), 4) == V


@pytest.mark.parametrize("F,n", [(F2, 1), (F2, 2), (F2, 3), (F2, 4), (F3, 2), (F3, 3), (F4, 2)])
def test_enumeration_matches_brute_force_and_counts(F, n):
    spaces = enumerate_subspaces(F, n)
    assert len(set(spaces)) == len(spaces) == lattice_size(n, F.q)
    assert {V.points for V in spaces} == brute_subspaces(F, n)
    for k in range(n + 1):
        assert len(enumerate_subspaces(F, n, k)) == gaussian_binomial(n, k, F.q)


def test_enumeration_counts():
    assert len(enumerate_subspaces(F2, 3, 1)) == 7
    assert len(enumerate_subspaces(F2, 2)) == 5
    assert len(enumerate_subspaces(F2, 4, 2)) == 35
    assert len(enumerate_subspaces(F3, 4, 2)) == 130
    with pytest.raises(EnumerationLimitError):
        enumerate_subspaces(F3, 5, limit=100)


def test_enumeration_order():
    spaces = enumerate_subspaces(F2, 3)
    keys = [V.sort_key() for V in spaces]
    assert keys == sorted(keys)


def test_gaussian_binomial_values():
    assert gaussian_binomial(4, 0, 2) == 1
    assert gaussian_binomial(4, 1, 2) == 15
    assert gaussian_binomial(4, 2, 3) == 130
    assert gaussian_binomial(4, 5, 2) == 0


def test_gl_enumeration():
    assert len(list(enumerate_gl(F2, 1))) == gl_order(1, 2) == 1
    assert len(list(enumerate_gl(F2, 2))) == gl_order(2, 2) == 6
    mats = list(enumerate_gl(F2, 3))
    assert len(mats) == gl_order(3, 2) == 168
    assert len(set(mats)) == 168
    assert all(M.rank() == 3 for M in mats)
    # brute-force oracle: every 3x3 matrix, keep the invertible ones
    count = sum(Mat.of(F2, [r[0:3], r[3:6], r[6:9]]).rank() == 3 for r in itertools.product(range(2), repeat=9))
    assert count == 168
    with pytest.raises(EnumerationLimitError):
        next(enumerate_gl(F3, 4, limit=1000))


@st.composite
def subspace_pairs(draw):
    F = draw(st.sampled_from([F2, F3]))
    n = draw(st.integers(1, 5))
    vec = st.lists(st.integers(0, F.q - 1), min_size=n, max_size=n)
    A = draw(st.lists(vec, max_size=n))
    B = draw(st.lists(vec, max_size=n))
    return Subspace.span(F, A, n), Subspace.span(F, B, n)


@settings(max_examples=1000, deadline=None)
@given(subspace_pairs())
def test_modular_law_of_dimensions(pair):
    V, W = pair
    assert span_sum(V, W).dim + intersect(V, W).dim == V.dim + W.dim
    assert span_sum(V, W).contains(V) and V.contains(intersect(V, W))


@pytest.mark.parametrize("F,n", [(F2, 4), (F3, 3)])
def test_duality_involution(F, n):
    for V in enumerate_subspaces(F, n):
        P = orthocomplement(V)
        assert P.dim == n - V.dim
        assert orthocomplement(P) == V


def test_quotient_consistency_exhaustive():
    spaces = enumerate_subspaces(F2, 4)
    for Z in spaces:
        Q = quotient_setup(4, Z)
        assert Q.dim == 4 - Z.dim
        assert intersect(Q.complement, Z).dim == 0
        above = [V for V in spaces if V.contains(Z)]
        images = [Q.forward(V) for V in above]
        assert len(set(images)) == len(above) == lattice_size(Q.dim, 2)
        for V, fV in zip(above, images):
            assert fV.dim == V.dim - Z.dim
            assert Q.backward(fV) == V
        for (V, fV), (W, fW) in itertools.combinations(zip(above, images), 2):
            assert V.contains(W) == fV.contains(fW)


def test_embed_and_coordinates_are_inverse():
    U = span(F3, [1, 2, 0, 1], [0, 1, 1, 0])
    for V in subspaces_of(U):
        assert U.contains(V)
        assert embed(coordinates_in(V, U), U) == V
    with pytest.raises(DimensionMismatch):
        coordinates_in(Subspace.full(F3, 4), U)


def test_adapted_form_splits_degenerate_space():
    # <1100> is isotropic for the dot product over F_2
    Z = span(F2, [1, 1, 0, 0])
    assert not is_nondegenerate_on(Z)
    E = Subspace.full(F2, 4)
    G = adapted_form(E, Z)
    assert G == G.T
    assert is_nondegenerate_on(Z, G)
    Zp = orthocomplement(Z, G)
    assert intersect(Z, Zp).dim == 0 and Zp.dim == 3


def test_lattice_meet_join_agree_with_direct():
    L = lattice(F2, 3)
    for i, j in itertools.product(range(len(L)), repeat=2):
        V, W = L.spaces[i], L.spaces[j]
        assert L.spaces[L.meet(i, j)] == intersect(V, W)
        assert L.spaces[L.join(i, j)] == span_sum(V, W)
        assert L.leq(i, j) == W.contains(V)


def test_image_indices_match_image():
    L = lattice(F3, 2)
    for phi in list(enumerate_gl(F3, 2))[:10]:
        idx = L.image_indices(phi)
        assert [L.spaces[k] for k in idx] == [image(V, phi) for V in L.spaces]
