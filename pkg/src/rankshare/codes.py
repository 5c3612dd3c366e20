"""F_q-linear rank-metric codes C <= F_q^{n x m}.

Codewords are handled through their row-major flattening, so the code is
just a subspace of F_q^{nm}; the trace form tr(X Y^T) is the dot product of
flattenings.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .field import FiniteField, least_irreducible, poly_mod, poly_mul
from .linalg import (
    DimensionMismatch,
    EnumerationLimitError,
    Mat,
    Subspace,
    combine,
    nullspace,
    orthocomplement,
    rank_of,
    row_basis,
    solve,
)

DEFAULT_MAX_CODEWORDS = 2**24


class CodeError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class RankMetricCode:
    field: FiniteField
    n: int
    m: int
    basis: tuple[Mat, ...]
    canonical: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def k(self) -> int:
        return len(self.basis)

    @property
    def q(self) -> int:
        return self.field.q

    def __eq__(self, other) -> bool:
        if not isinstance(other, RankMetricCode):
            return NotImplemented
        return (self.field, self.n, self.m, self.canonical) == (other.field, other.n, other.m, other.canonical)

    def __hash__(self) -> int:
        return hash((self.field, self.n, self.m, self.canonical))

    def __repr__(self) -> str:
        return f"RankMetricCode(F_{self.q}^({self.n}x{self.m}), dim={self.dim})"

    def flat_basis(self) -> tuple[tuple[int, ...], ...]:
        return tuple(M.flatten() for M in self.basis)

    def codeword(self, coeffs: Sequence[int]) -> Mat:
        """The codeword sum_i coeffs[i] * basis[i]."""
        v = combine(self.field, coeffs, self.flat_basis(), self.n * self.m)
        return Mat.unflatten(self.field, v, self.n, self.m)

    def coefficients(self, X: Mat) -> tuple[int, ...] | None:
        """Coefficients of X in the basis, or None when X is not a codeword."""
        if X.shape != (self.n, self.m):
            return None
        if self.dim == 0:
            return () if X.is_zero() else None
        sol = solve(self.field, self.flat_basis(), [X.flatten()])
        return None if sol is None else sol[0]

    def __contains__(self, X: Mat) -> bool:
        return X.shape == (self.n, self.m) and self.coefficients(X) is not None

    def codewords(self, limit: int = DEFAULT_MAX_CODEWORDS) -> Iterator[Mat]:
        """All q^k codewords, in lexicographic order of their coefficients."""
        _guard(self, limit)
        for c in itertools.product(range(self.q), repeat=self.dim):
            yield self.codeword(c)

    def to_json(self) -> dict:
        F = self.field
        out = {"q": F.q, "p": F.p, "e": F.e, "n": self.n, "m": self.m, "basis": [M.tolist() for M in self.basis]}
        if F.e > 1:
            out["modulus"] = list(F.modulus)
        return out


def _guard(C: RankMetricCode, limit: int):
    if C.q**C.dim > limit:
        raise EnumerationLimitError(f"{C.q}^{C.dim} codewords exceed the scan limit {limit}")


def code_from_basis(mats: Sequence[Mat], *, field: FiniteField | None = None, shape: tuple[int, int] | None = None):
    """Span of the given matrices; dependent generators are dropped greedily.

    ``field``/``shape`` are needed only when ``mats`` is empty.
    """
    mats = list(mats)
    if mats:
        field = field or mats[0].field
        shape = shape or mats[0].shape
    if field is None or shape is None:
        raise CodeError("field and shape are required for an empty generator list")
    n, m = shape
    if n == 0 or m == 0:
        raise CodeError("empty ambient space")
    kept, rank = [], 0
    for M in mats:
        if M.field != field or M.shape != (n, m):
            raise CodeError(f"generator of shape {M.shape} over {M.field}, expected {shape} over {field}")
        r = rank_of(field, [X.flatten() for X in kept] + [M.flatten()], n * m)
        if r > rank:
            kept.append(M)
            rank = r
    canonical = row_basis(field, [M.flatten() for M in kept], n * m)
    return RankMetricCode(field, n, m, tuple(kept), canonical)


def code_from_flat(F: FiniteField, n: int, m: int, vectors) -> RankMetricCode:
    return code_from_basis([Mat.unflatten(F, v, n, m) for v in vectors], field=F, shape=(n, m))


def zero_code(F: FiniteField, n: int, m: int) -> RankMetricCode:
    return code_from_basis([], field=F, shape=(n, m))


def full_code(F: FiniteField, n: int, m: int) -> RankMetricCode:
    nm = n * m
    return code_from_flat(F, n, m, [tuple(int(i == j) for j in range(nm)) for i in range(nm)])


def dual_code(C: RankMetricCode) -> RankMetricCode:
    """C^⊥ under the trace form tr(X Y^T)."""
    nm = C.n * C.m
    if C.dim == 0:
        return full_code(C.field, C.n, C.m)
    return code_from_flat(C.field, C.n, C.m, nullspace(C.field, C.canonical, nm))


def _check_ambient(C: RankMetricCode, V: Subspace):
    if V.n != C.n or V.field != C.field:
        raise DimensionMismatch(f"subspace of F^{V.n} used with a code of {C.n} rows")


def _generator_map_rows(C: RankMetricCode, G: Sequence[Sequence[int]]):
    """Rows flatten(G M_i), i.e. the matrix of the map c -> G (sum c_i M_i)."""
    F = C.field
    out = []
    for M in C.basis:
        GM = combine_rows(F, G, M)
        out.append(tuple(x for r in GM for x in r))
    return out


def combine_rows(F: FiniteField, G: Sequence[Sequence[int]], M: Mat):
    return tuple(combine(F, g, M.rows, M.ncols) for g in G)


def shorten(C: RankMetricCode, V: Subspace) -> RankMetricCode:
    """C(V): codewords whose column space lies inside V."""
    _check_ambient(C, V)
    if C.dim == 0:
        return C
    H = orthocomplement(V).rows
    if not H:
        return C
    rows = _generator_map_rows(C, H)
    kernel = nullspace(C.field, list(zip(*rows)), C.dim)
    return code_from_basis([C.codeword(c) for c in kernel], field=C.field, shape=(C.n, C.m))


def image_dim(C: RankMetricCode, V: Subspace) -> int:
    """dim G_V C, which equals dim C - dim C(V^⊥)."""
    _check_ambient(C, V)
    if C.dim == 0 or V.dim == 0:
        return 0
    return rank_of(C.field, _generator_map_rows(C, V.rows), V.dim * C.m)


def induced_rank(C: RankMetricCode, V: Subspace) -> Fraction:
    """rho_C(V) = (dim C - dim C(V^⊥)) / m."""
    return Fraction(image_dim(C, V), C.m)


def min_rank_distance(C: RankMetricCode, limit: int = DEFAULT_MAX_CODEWORDS) -> int:
    """Smallest rank of a nonzero codeword, by exhaustive scan."""
    if C.dim == 0:
        raise CodeError("the zero code has no minimum distance")
    _guard(C, limit)
    best = min(C.n, C.m)
    flat = C.flat_basis()
    F = C.field
    for coeffs in itertools.product(range(C.q), repeat=C.dim):
        if not any(coeffs):
            continue
        # normalise: the rank is invariant under scaling, so only scan monic coefficient vectors
        if next(x for x in coeffs if x) != 1:
            continue
        v = combine(F, coeffs, flat, C.n * C.m)
        r = rank_of(F, [v[i * C.m : (i + 1) * C.m] for i in range(C.n)], C.m)
        if r < best:
            best = r
            if best == 1:
                break
    return best


def singleton_bound(n: int, m: int, d: int) -> int:
    return max(m, n) * (min(m, n) - d + 1)


def singleton_check(C: RankMetricCode, limit: int = DEFAULT_MAX_CODEWORDS) -> tuple[int, bool]:
    """(Singleton bound for the code's distance, whether the code meets it)."""
    d = min_rank_distance(C, limit)
    bound = singleton_bound(C.n, C.m, d)
    return bound, C.dim == bound


# --- Gabidulin codes ---------------------------------------------------------


class _Extension:
    """F_{q^m} as F_q[x] modulo the least irreducible monic polynomial of degree m.

    Elements are coefficient tuples of length m over F_q; the coefficient
    vector of an element is its expansion in the basis 1, a, ..., a^{m-1}.
    """

    def __init__(self, F: FiniteField, m: int):
        self.base = F
        self.m = m
        self.ops = F.ops()
        self.modulus = least_irreducible(self.ops, m) if m > 1 else (0, 1)

    def pad(self, a) -> tuple[int, ...]:
        a = tuple(a)
        return a + (0,) * (self.m - len(a))

    def mul(self, a, b):
        if self.m == 1:
            return (self.base.mul(a[0], b[0]),)
        return self.pad(poly_mod(self.ops, poly_mul(self.ops, _strip(a), _strip(b)), self.modulus))

    def power(self, a, k: int):
        out = self.pad((1,))
        while k:
            if k & 1:
                out = self.mul(out, a)
            a = self.mul(a, a)
            k >>= 1
        return out

    def basis_element(self, j: int):
        return tuple(int(i == j) for i in range(self.m))


def _strip(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def gabidulin(n: int, k: int, F: FiniteField, m: int | None = None) -> RankMetricCode:
    """Gabidulin code: evaluations of q-linearized polynomials of q-degree < k.

    Evaluation points are 1, a, ..., a^{n-1} in F_{q^m}; each evaluation is
    expanded over the basis 1, a, ..., a^{m-1}, giving an n x m matrix.
    """
    m = n if m is None else m
    if not (1 <= k <= n <= m):
        raise CodeError(f"gabidulin needs 1 <= k <= n <= m, got k={k}, n={n}, m={m}")
    ext = _Extension(F, m)
    q = F.q
    points = [ext.basis_element(r) for r in range(n)]
    mats = []
    for i in range(k):
        frob = [ext.power(g, q**i) for g in points]
        for j in range(m):
            beta = ext.basis_element(j)
            mats.append(Mat(F, tuple(ext.mul(beta, g) for g in frob), m))
    return code_from_basis(mats)


def induced_qpolymatroid(C: RankMetricCode):
    """The q-polymatroid on F_q^n with rank function rho_C."""
    from .polymatroid import QPolymatroid

    return QPolymatroid(C.field, C.n, lambda V: induced_rank(C, V), name=f"M_C[{C.n}x{C.m}, k={C.dim}]")
