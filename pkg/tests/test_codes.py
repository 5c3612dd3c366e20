import itertools
import random
from fractions import Fraction

import pytest

from rankshare.codes import (
    CodeError,
    code_from_basis,
    dual_code,
    full_code,
    gabidulin,
    image_dim,
    induced_rank,
    min_rank_distance,
    shorten,
    singleton_bound,
    singleton_check,
    zero_code,
)
from rankshare.field import field_make
from rankshare.linalg import EnumerationLimitError, Mat, Subspace, enumerate_subspaces, orthocomplement, span_sum
from rankshare.serialize import code_from_json
from rankshare.verify import random_code

from conftest import span

F2 = field_make(2)
F3 = field_make(3)


def colspace_inside(X, V):
    """Oracle: every column of X lies in V."""
    return all(V.has_vector(col) for col in zip(*X.rows))


def test_example_codes(ex1, ex3):
    assert (ex1["C"].n, ex1["C"].m, ex1["C"].dim) == (4, 6, 6)
    assert (ex3["C"].n, ex3["C"].m, ex3["C"].dim) == (4, 2, 4)


def test_duplicate_generators_are_dropped():
    M = Mat.of(F2, [[1, 0], [0, 1]])
    assert code_from_basis([M, M]).dim == 1


def test_code_errors():
    with pytest.raises(CodeError):
        code_from_basis([])
    with pytest.raises(CodeError):
        code_from_basis([Mat.of(F2, [[1, 0]]), Mat.of(F2, [[1], [0]])])
    with pytest.raises(CodeError):
        zero_code(F2, 0, 3)


def test_code_equality_is_canonical():
    A, B = Mat.of(F2, [[1, 0], [0, 0]]), Mat.of(F2, [[0, 1], [0, 0]])
    assert code_from_basis([A, B]) == code_from_basis([A + B, B])
    assert hash(code_from_basis([A, B])) == hash(code_from_basis([B, A]))


def test_membership_and_codewords(ex1):
    C = ex1["C"]
    words = list(C.codewords())
    assert len(set(words)) == 64
    assert ex1["X"] in C
    assert all(w in C for w in words)
    assert Mat.of(F2, [[1, 1, 1, 1, 1, 1]] * 4) not in C
    with pytest.raises(EnumerationLimitError):
        list(C.codewords(limit=10))


def test_dual_examples(ex1):
    assert dual_code(zero_code(F2, 2, 3)) == full_code(F2, 2, 3)
    D = dual_code(ex1["C"])
    assert D.dim == 18
    for X in ex1["C"].basis:
        for Y in D.basis:
            assert (X @ Y.T).rows and trace(X @ Y.T) == 0


def trace(M):
    F = M.field
    t = 0
    for i in range(M.nrows):
        t = F.add(t, M.rows[i][i])
    return t


def test_dual_involution_random():
    rng = random.Random(11)
    for _ in range(20):
        F = rng.choice([F2, F3])
        n, m = rng.randint(1, 4), rng.randint(1, 4)
        C = random_code(rng, F, n, m, rng.randint(1, n * m))
        assert dual_code(dual_code(C)) == C
        assert C.dim + dual_code(C).dim == n * m


def test_shorten_examples(ex1):
    C = ex1["C"]
    assert shorten(C, Subspace.full(F2, 4)) == C
    assert shorten(C, orthocomplement(ex1["p1"])).dim == 1
    assert shorten(C, orthocomplement(ex1["P0"])) != C


def test_shorten_matches_scan_oracle(ex1, ex3):
    for C in (ex1["C"], ex3["C"]):
        words = list(C.codewords())
        for V in enumerate_subspaces(F2, 4):
            S = shorten(C, V)
            expect = {X for X in words if colspace_inside(X, V)}
            assert set(S.codewords()) == expect


def test_shortening_is_monotone(ex1):
    spaces = enumerate_subspaces(F2, 4)
    short = {V: shorten(ex1["C"], V) for V in spaces}
    for V, W in itertools.product(spaces, repeat=2):
        if W.contains(V):
            assert all(X in short[W] for X in short[V].basis)


def test_min_rank_distance_examples(ex1):
    assert min_rank_distance(code_from_basis([Mat.of(F2, [[1, 0], [0, 0]])])) == 1
    assert min_rank_distance(full_code(F2, 2, 2)) == 1
    d = min_rank_distance(ex1["C"])
    # scan oracle
    assert d == min(X.rank() for X in ex1["C"].codewords() if not X.is_zero()) == 2
    with pytest.raises(CodeError):
        min_rank_distance(zero_code(F2, 2, 2))


def test_singleton():
    assert singleton_bound(4, 4, 3) == 8
    bound, mrd = singleton_check(code_from_basis([Mat.of(F2, [[1, 0], [0, 0]])]))
    assert (bound, mrd) == (4, False)


def test_example1_is_not_mrd(ex1):
    bound, mrd = singleton_check(ex1["C"])
    assert bound == 18 and not mrd and ex1["C"].dim <= bound


def test_gabidulin_codes():
    G = gabidulin(4, 2, F2)
    assert G.dim == 8
    assert min_rank_distance(G) == 3
    assert min(X.rank() for X in G.codewords() if not X.is_zero()) == 3
    assert singleton_check(G) == (8, True)
    G4 = gabidulin(4, 4, F2)
    assert G4.dim == 16 and min_rank_distance(G4) == 1
    G3 = gabidulin(3, 1, F2)
    assert G3.dim == 3 and min_rank_distance(G3) == 3
    with pytest.raises(CodeError):
        gabidulin(4, 5, F2)


def test_gabidulin_over_f3_is_mrd():
    G = gabidulin(3, 2, F3)
    assert G.dim == 6
    assert singleton_check(G) == (6, True)


def test_mrd_dual():
    G = gabidulin(4, 2, F2)
    D = dual_code(G)
    d, dd = min_rank_distance(G), min_rank_distance(D)
    assert dd == min(G.m, G.n) - d + 2 == 3
    assert singleton_check(D)[1]


def test_induced_rank_examples(ex1):
    C = ex1["C"]
    assert induced_rank(C, ex1["p1"]) == Fraction(5, 6)
    assert induced_rank(C, ex1["p2"]) == Fraction(2, 3)
    assert induced_rank(C, Subspace.zero(F2, 4)) == 0
    assert induced_rank(C, span_sum(ex1["p1"], ex1["P0"])) == 1
    assert induced_rank(C, span_sum(ex1["p2"], ex1["P0"])) == 1
    assert induced_rank(C, ex1["P0"]) == Fraction(5, 6)
    assert 2 ** image_dim(C, ex1["P0"]) == 32


def test_induced_rank_matches_shortening_formula(ex1, ex3):
    for C in (ex1["C"], ex3["C"]):
        for V in enumerate_subspaces(F2, 4):
            expect = Fraction(C.dim - shorten(C, orthocomplement(V)).dim, C.m)
            assert induced_rank(C, V) == expect


def test_mrd_rank_formula():
    G = gabidulin(4, 2, F2)
    for V in enumerate_subspaces(F2, 4):
        assert induced_rank(G, V) == min(V.dim, 2)


def test_zero_code_rank():
    Z = zero_code(F2, 3, 2)
    assert all(induced_rank(Z, V) == 0 for V in enumerate_subspaces(F2, 3))


def test_json_round_trip():
    F4 = field_make(2, 2)
    C = code_from_basis([Mat.of(F4, [[1, 2], [3, 0]]), Mat.of(F4, [[0, 1], [1, 1]])])
    assert code_from_json(C.to_json()) == C
    assert C.to_json()["modulus"] == [1, 1, 1]


def test_codeword_coefficients(ex3):
    C = ex3["C"]
    for c in itertools.product(range(2), repeat=4):
        assert C.coefficients(C.codeword(c)) == c
    assert span(F2, [1, 0, 0, 0]).dim == 1
