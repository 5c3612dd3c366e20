"""Dense linear algebra over F_q and the subspace lattice L(F_q^n).

Vectors are tuples of field elements; matrices are tuples of row tuples.
A :class:`Subspace` is stored through its unique reduced row-echelon basis,
so equality and hashing of subspaces is equality of canonical bases.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .field import FiniteField

DEFAULT_MAX_ENUM = 10**6
DEFAULT_MAX_GL = 10**7

Vector = tuple[int, ...]
Rows = tuple[Vector, ...]


class EnumerationLimitError(RuntimeError):
    """An exhaustive enumeration would exceed its configured guard."""


class DimensionMismatch(ValueError):
    pass


# --- raw row operations ------------------------------------------------------


def rref(F: FiniteField, rows: Iterable[Sequence[int]], ncols: int | None = None):
    """Reduced row-echelon form.

    Returns ``(R, pivots, rank)`` where R has the same shape as the input with
    zero rows collected at the bottom.
    """
    M = [list(r) for r in rows]
    if ncols is None:
        ncols = len(M[0]) if M else 0
    add, mul, neg, inv = F.add_table, F.mul_table, F.neg_table, F.inv_table
    pivots = []
    r = 0
    for c in range(ncols):
        if r == len(M):
            break
        pr = next((i for i in range(r, len(M)) if M[i][c]), None)
        if pr is None:
            continue
        M[r], M[pr] = M[pr], M[r]
        row = M[r]
        s = inv[row[c]]
        if s != 1:
            row = M[r] = [mul[s][x] for x in row]
        for i in range(len(M)):
            if i != r:
                f = M[i][c]
                if f:
                    nf = neg[f]
                    mrow = mul[nf]
                    M[i] = [add[x][mrow[y]] for x, y in zip(M[i], row)]
        pivots.append(c)
        r += 1
    return tuple(tuple(x) for x in M), tuple(pivots), r


def row_basis(F: FiniteField, rows: Iterable[Sequence[int]], ncols: int) -> Rows:
    R, _, k = rref(F, rows, ncols)
    return R[:k]


def rank_of(F: FiniteField, rows: Iterable[Sequence[int]], ncols: int | None = None) -> int:
    return rref(F, rows, ncols)[2]


def nullspace(F: FiniteField, rows: Iterable[Sequence[int]], ncols: int) -> Rows:
    """Basis of the right kernel {x : A x = 0}, one vector per free column."""
    R, pivots, k = rref(F, rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    out = []
    for f in free:
        x = [0] * ncols
        x[f] = 1
        for i, pc in enumerate(pivots):
            x[pc] = F.neg(R[i][f])
        out.append(tuple(x))
    return tuple(out)


def solve(F: FiniteField, rows: Sequence[Sequence[int]], rhs: Sequence[Sequence[int]]):
    """Solve ``c A = B`` for c, row by row, where A has the given rows.

    ``rhs`` is a sequence of target vectors; returns one coefficient vector
    per target (the one with zero free coordinates), or None if some target
    is outside the row space of A.
    """
    k = len(rows)
    if k == 0:
        return None if any(any(b) for b in rhs) else [() for _ in rhs]
    ncols = len(rows[0])
    # Row-reduce [A | I] so that each RREF row records its combination of A's rows.
    aug = [tuple(r) + tuple(int(i == j) for j in range(k)) for i, r in enumerate(rows)]
    R, pivots, rank = rref(F, aug, ncols + k)
    piv = [p for p in pivots if p < ncols]
    out = []
    for b in rhs:
        b = list(b)
        c = [0] * k
        for i, pc in enumerate(piv):
            f = b[pc]
            if f:
                b = [F.sub(x, F.mul(f, y)) for x, y in zip(b, R[i][:ncols])]
                c = [F.add(x, F.mul(f, y)) for x, y in zip(c, R[i][ncols:])]
        if any(b):
            return None
        out.append(tuple(c))
    return out


def vec_add(F, a, b):
    add = F.add_table
    return tuple(add[x][y] for x, y in zip(a, b))


def vec_scale(F, s, a):
    m = F.mul_table[s]
    return tuple(m[x] for x in a)


def combine(F: FiniteField, coeffs: Sequence[int], rows: Sequence[Sequence[int]], ncols: int) -> Vector:
    out = [0] * ncols
    add, mul = F.add_table, F.mul_table
    for c, r in zip(coeffs, rows):
        if c:
            mc = mul[c]
            out = [add[x][mc[y]] for x, y in zip(out, r)]
    return tuple(out)


def matmul(F: FiniteField, A: Sequence[Sequence[int]], B: Sequence[Sequence[int]], ncols: int) -> Rows:
    return tuple(combine(F, row, B, ncols) for row in A)


def dot(F: FiniteField, a: Sequence[int], b: Sequence[int]) -> int:
    s = 0
    add, mul = F.add_table, F.mul_table
    for x, y in zip(a, b):
        s = add[s][mul[x][y]]
    return s


def all_vectors(F: FiniteField, n: int) -> Iterator[Vector]:
    return itertools.product(range(F.q), repeat=n)


# --- matrices ----------------------------------------------------------------


@dataclass(frozen=True)
class Mat:
    """A matrix over F_q (row-major, entries are field integers)."""

    field: FiniteField
    rows: Rows
    ncols: int

    def __post_init__(self):
        for r in self.rows:
            if len(r) != self.ncols:
                raise DimensionMismatch("ragged matrix")

    @classmethod
    def of(cls, F: FiniteField, rows: Iterable[Sequence[int]], ncols: int | None = None) -> Mat:
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if ncols is None:
            if not rows:
                raise DimensionMismatch("column count needed for an empty matrix")
            ncols = len(rows[0])
        for r in rows:
            for x in r:
                if not 0 <= x < F.q:
                    raise ValueError(f"entry {x} is not an element of {F}")
        return cls(F, rows, ncols)

    @classmethod
    def zeros(cls, F, nrows, ncols) -> Mat:
        return cls(F, tuple((0,) * ncols for _ in range(nrows)), ncols)

    @classmethod
    def identity(cls, F, n) -> Mat:
        return cls(F, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), n)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), self.ncols)

    @property
    def T(self) -> Mat:
        if not self.rows:
            return Mat(self.field, tuple(() for _ in range(self.ncols)), 0)
        return Mat(self.field, tuple(zip(*self.rows)), self.nrows)

    def __matmul__(self, other: Mat) -> Mat:
        if self.ncols != other.nrows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        return Mat(self.field, matmul(self.field, self.rows, other.rows, other.ncols), other.ncols)

    def __add__(self, other: Mat) -> Mat:
        if self.shape != other.shape:
            raise DimensionMismatch("shape mismatch")
        F = self.field
        return Mat(F, tuple(vec_add(F, a, b) for a, b in zip(self.rows, other.rows)), self.ncols)

    def __sub__(self, other: Mat) -> Mat:
        return self + other.scale(self.field.neg(1))

    def scale(self, s: int) -> Mat:
        return Mat(self.field, tuple(vec_scale(self.field, s, r) for r in self.rows), self.ncols)

    def flatten(self) -> Vector:
        return tuple(x for r in self.rows for x in r)

    @classmethod
    def unflatten(cls, F, vec: Sequence[int], nrows: int, ncols: int) -> Mat:
        return cls(F, tuple(tuple(vec[i * ncols : (i + 1) * ncols]) for i in range(nrows)), ncols)

    def rank(self) -> int:
        return rank_of(self.field, self.rows, self.ncols)

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.rows)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def __repr__(self) -> str:
        return f"Mat({self.tolist()})"


# --- subspaces ---------------------------------------------------------------


@dataclass(frozen=True)
class Subspace:
    """A subspace of F_q^n held by its canonical RREF basis (no zero rows)."""

    field: FiniteField
    n: int
    rows: Rows

    @classmethod
    def span(cls, F: FiniteField, rows: Iterable[Sequence[int]], n: int) -> Subspace:
        rows = [tuple(r) for r in rows]
        for r in rows:
            if len(r) != n:
                raise DimensionMismatch(f"vector of length {len(r)} in F_q^{n}")
        return cls(F, n, row_basis(F, rows, n))

    @classmethod
    def zero(cls, F, n) -> Subspace:
        return cls(F, n, ())

    @classmethod
    def full(cls, F, n) -> Subspace:
        return cls(F, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def basis(self) -> Mat:
        return Mat(self.field, self.rows, self.n)

    @cached_property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(i for i, x in enumerate(r) if x) for r in self.rows)

    @cached_property
    def points(self) -> frozenset[Vector]:
        return frozenset(combine(self.field, c, self.rows, self.n) for c in all_vectors(self.field, self.dim))

    def sort_key(self):
        return (self.dim, self.rows)

    def __lt__(self, other: Subspace) -> bool:
        return self.sort_key() < other.sort_key()

    def has_vector(self, v: Sequence[int]) -> bool:
        v = tuple(v)
        if self.dim <= 6 or self.field.q ** self.dim <= 4096:
            return v in self.points
        return rank_of(self.field, self.rows + (v,), self.n) == self.dim

    def contains(self, other: Subspace) -> bool:
        """True iff other <= self."""
        _check(self, other)
        if other.dim > self.dim:
            return False
        return all(self.has_vector(r) for r in other.rows)

    def coordinates(self, v: Sequence[int]) -> Vector:
        """Coordinates of v (which must lie in self) in the canonical basis."""
        return tuple(v[p] for p in self.pivots)

    def __repr__(self) -> str:
        return f"<{', '.join(''.join(map(str, r)) for r in self.rows) or '0'}>"

    def to_json(self) -> dict:
        return matrix_json(self.field, self.rows)


def _check(V: Subspace, W: Subspace):
    if V.n != W.n or V.field != W.field:
        raise DimensionMismatch(f"subspaces of different ambients: F^{V.n} vs F^{W.n}")


def subspace_from_rows(M: Mat) -> Subspace:
    return Subspace.span(M.field, M.rows, M.ncols)


def span_sum(V: Subspace, W: Subspace) -> Subspace:
    _check(V, W)
    return Subspace(V.field, V.n, row_basis(V.field, V.rows + W.rows, V.n))


def intersect(V: Subspace, W: Subspace) -> Subspace:
    """V ∩ W from the left kernel of the stacked bases."""
    _check(V, W)
    F = V.field
    if V.dim == 0 or W.dim == 0:
        return Subspace.zero(F, V.n)
    stacked = V.rows + W.rows
    # (a, b) with a V + b W = 0 give the vectors a V of the intersection.
    cols = tuple(zip(*stacked))
    kern = nullspace(F, cols, len(stacked))
    vecs = [combine(F, k[: V.dim], V.rows, V.n) for k in kern]
    return Subspace.span(F, vecs, V.n)


def contains(V: Subspace, W: Subspace) -> bool:
    """True iff W <= V."""
    return V.contains(W)


def orthocomplement(V: Subspace, gram: Mat | None = None) -> Subspace:
    """V^⊥ in F_q^n with respect to the symmetric form x G y^T (dot product by default)."""
    F = V.field
    rows = V.rows if gram is None else matmul(F, V.rows, gram.rows, V.n)
    return Subspace(F, V.n, row_basis(F, nullspace(F, rows, V.n), V.n))


def perp_within(V: Subspace, U: Subspace, gram: Mat | None = None) -> Subspace:
    """Orthocomplement of V inside U (V <= U) for the form restricted to U."""
    return intersect(orthocomplement(V, gram), U)


def is_nondegenerate_on(U: Subspace, gram: Mat | None = None) -> bool:
    """Whether the form (dot product by default) is non-degenerate on U."""
    F = U.field
    B = U.rows if gram is None else matmul(F, U.rows, gram.rows, U.n)
    G = [[dot(F, a, b) for b in U.rows] for a in B]
    return rank_of(F, G, U.dim) == U.dim


def adapted_form(U: Subspace, Z: Subspace) -> Mat:
    """Gram matrix of a symmetric non-degenerate form on F_q^n under which
    Z is non-degenerate and Z^⊥ ∩ U is a complement of Z in U (Z <= U).

    The basis [Z | complement of Z in U | complement of U] is declared
    orthonormal, so G = M^-1 M^-T.
    """
    if not U.contains(Z):
        raise DimensionMismatch(f"{Z} is not inside {U}")
    F, n = U.field, U.n
    chart = quotient_setup(n, Z)
    inside = Subspace.span(F, [chart.reduce(r) for r in U.rows], n)
    outside = quotient_setup(n, U).complement
    M = Mat(F, Z.rows + inside.rows + outside.rows, n)
    Minv = inverse(M)
    return Minv @ Minv.T


def inverse(M: Mat) -> Mat:
    F, n = M.field, M.ncols
    if M.nrows != n:
        raise DimensionMismatch("inverse of a non-square matrix")
    aug = [r + tuple(int(i == j) for j in range(n)) for i, r in enumerate(M.rows)]
    R, pivots, rank = rref(F, aug, 2 * n)
    if rank < n or pivots[n - 1] >= n:
        raise ValueError("matrix is singular")
    return Mat(F, tuple(r[n:] for r in R), n)


def embed(V: Subspace, U: Subspace) -> Subspace:
    """Map V <= F_q^{dim U} (coordinates w.r.t. U's canonical basis) into U."""
    if V.n != U.dim:
        raise DimensionMismatch(f"coordinates of length {V.n} for a {U.dim}-dim space")
    F = U.field
    return Subspace.span(F, matmul(F, V.rows, U.rows, U.n), U.n) if V.dim else Subspace.zero(F, U.n)


def coordinates_in(V: Subspace, U: Subspace) -> Subspace:
    """Inverse of :func:`embed`: V <= U re-expressed in U's canonical coordinates."""
    if not U.contains(V):
        raise DimensionMismatch(f"{V} is not inside {U}")
    return Subspace.span(U.field, [U.coordinates(r) for r in V.rows], U.dim)


def image(V: Subspace, A: Mat) -> Subspace:
    """Image of V under the row-vector map x -> x A."""
    F = V.field
    return Subspace.span(F, matmul(F, V.rows, A.rows, A.ncols), A.ncols)


# --- quotients ---------------------------------------------------------------


class QuotientMap:
    """Concrete chart of E/Z for E = F_q^n.

    The complement W of Z is spanned by the standard basis vectors at the
    non-pivot columns of Z's canonical basis; E/Z is identified with
    F_q^{n - dim Z} through the coordinates of W.
    """

    def __init__(self, n: int, Z: Subspace):
        if Z.n != n:
            raise DimensionMismatch("kernel not inside the ambient space")
        F = Z.field
        self.field = F
        self.n = n
        self.kernel = Z
        self.ambient = Subspace.full(F, n)
        self.free = tuple(c for c in range(n) if c not in Z.pivots)
        self.complement = Subspace(F, n, tuple(tuple(int(j == c) for j in range(n)) for c in self.free))
        self.dim = len(self.free)

    def reduce(self, v: Sequence[int]) -> Vector:
        """Projection of v onto the complement along Z."""
        F = self.field
        v = tuple(v)
        for r, p in zip(self.kernel.rows, self.kernel.pivots):
            f = v[p]
            if f:
                v = vec_add(F, v, vec_scale(F, F.neg(f), r))
        return v

    def forward_vector(self, v: Sequence[int]) -> Vector:
        w = self.reduce(v)
        return tuple(w[c] for c in self.free)

    def lift_vector(self, u: Sequence[int]) -> Vector:
        v = [0] * self.n
        for c, x in zip(self.free, u):
            v[c] = x
        return tuple(v)

    def forward(self, V: Subspace) -> Subspace:
        _check(V, self.kernel)
        return Subspace.span(self.field, [self.forward_vector(r) for r in V.rows], self.dim)

    def backward(self, V: Subspace) -> Subspace:
        if V.n != self.dim:
            raise DimensionMismatch("subspace is not in the quotient chart")
        return Subspace.span(self.field, self.kernel.rows + tuple(self.lift_vector(r) for r in V.rows), self.n)

    def __repr__(self) -> str:
        return f"QuotientMap(F^{self.n} / {self.kernel})"


def quotient_setup(n: int, Z: Subspace) -> QuotientMap:
    return QuotientMap(n, Z)


# --- counting and enumeration ------------------------------------------------


def gaussian_binomial(n: int, k: int, q: int) -> int:
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (k - i) - 1
    return num // den


def lattice_size(n: int, q: int) -> int:
    return sum(gaussian_binomial(n, k, q) for k in range(n + 1))


def _rref_with_pivots(F: FiniteField, n: int, pivots: tuple[int, ...]) -> Iterator[Rows]:
    slots = [(i, c) for i, p in enumerate(pivots) for c in range(p + 1, n) if c not in pivots]
    for vals in itertools.product(range(F.q), repeat=len(slots)):
        M = [[int(c == p) for c in range(n)] for p in pivots]
        for (i, c), x in zip(slots, vals):
            M[i][c] = x
        yield tuple(tuple(r) for r in M)


@functools.lru_cache(maxsize=64)
def _enumerate(F: FiniteField, n: int, k: int) -> tuple[Subspace, ...]:
    out = []
    for piv in itertools.combinations(range(n), k):
        out.extend(Subspace(F, n, rows) for rows in _rref_with_pivots(F, n, piv))
    out.sort(key=Subspace.sort_key)
    return tuple(out)


def enumerate_subspaces(
    F: FiniteField, n: int, k: int | None = None, limit: int = DEFAULT_MAX_ENUM
) -> tuple[Subspace, ...]:
    """Every subspace of F_q^n (of dimension k, if given) exactly once.

    Ordered by dimension, then lexicographically by canonical basis.
    """
    total = gaussian_binomial(n, k, F.q) if k is not None else lattice_size(n, F.q)
    if total > limit:
        raise EnumerationLimitError(f"{total} subspaces exceed the enumeration limit {limit}")
    dims = [k] if k is not None else range(n + 1)
    return tuple(V for d in dims for V in _enumerate(F, n, d))


def subspaces_of(U: Subspace, k: int | None = None, limit: int = DEFAULT_MAX_ENUM) -> tuple[Subspace, ...]:
    """L(U) in ambient coordinates, canonically ordered."""
    if U.dim == U.n:
        return enumerate_subspaces(U.field, U.n, k, limit)
    out = [embed(V, U) for V in enumerate_subspaces(U.field, U.dim, k, limit)]
    out.sort(key=Subspace.sort_key)
    return tuple(out)


def gl_order(n: int, q: int) -> int:
    out = 1
    for i in range(n):
        out *= q**n - q**i
    return out


def enumerate_gl(F: FiniteField, n: int, limit: int = DEFAULT_MAX_GL) -> Iterator[Mat]:
    """All invertible n x n matrices, rows chosen in lexicographic order."""
    total = gl_order(n, F.q)
    if total > limit:
        raise EnumerationLimitError(f"|GL({n},{F.q})| = {total} exceeds the limit {limit}")
    vectors = list(all_vectors(F, n))

    def extend(rows, span_points):
        if len(rows) == n:
            yield Mat(F, tuple(rows), n)
            return
        for v in vectors:
            if v in span_points:
                continue
            new_points = {vec_add(F, p, vec_scale(F, a, v)) for p in span_points for a in range(F.q)}
            yield from extend(rows + [v], new_points)

    yield from extend([], {(0,) * n})


# --- the lattice as an indexed table -----------------------------------------


class Lattice:
    """L(F_q^n) with subspaces indexed in canonical order.

    Meets and joins are answered from point-set bitmasks, which keeps
    exhaustive pair scans cheap.
    """

    def __init__(self, F: FiniteField, n: int, limit: int = DEFAULT_MAX_ENUM):
        self.field = F
        self.n = n
        self.spaces = enumerate_subspaces(F, n, limit=limit)
        self.index = {V: i for i, V in enumerate(self.spaces)}
        q = F.q
        weights = [q**i for i in range(n)]

        def code(v):
            return sum(x * w for x, w in zip(v, weights))

        self.masks = []
        for V in self.spaces:
            m = 0
            for v in V.points:
                m |= 1 << code(v)
            self.masks.append(m)
        self._by_mask = {m: i for i, m in enumerate(self.masks)}
        self.dims = [V.dim for V in self.spaces]
        self.perp = [self.index[orthocomplement(V)] for V in self.spaces]

    def __len__(self) -> int:
        return len(self.spaces)

    def __iter__(self):
        return iter(self.spaces)

    def meet(self, i: int, j: int) -> int:
        return self._by_mask[self.masks[i] & self.masks[j]]

    def join(self, i: int, j: int) -> int:
        p = self.perp
        return p[self._by_mask[self.masks[p[i]] & self.masks[p[j]]]]

    def leq(self, i: int, j: int) -> bool:
        return self.masks[i] & ~self.masks[j] == 0

    def of(self, V: Subspace) -> int:
        return self.index[V]

    def image_indices(self, phi: Mat) -> list[int]:
        """Index of phi(V) for every V, phi acting on row vectors."""
        F, n, q = self.field, self.n, self.field.q
        weights = [q**i for i in range(n)]
        perm = []
        for v in all_vectors(F, n):
            w = combine(F, v, phi.rows, n)
            perm.append((sum(x * c for x, c in zip(v, weights)), sum(x * c for x, c in zip(w, weights))))
        perm = dict(perm)
        out = []
        for m in self.masks:
            new, b = 0, 0
            while m:
                if m & 1:
                    new |= 1 << perm[b]
                m >>= 1
                b += 1
            out.append(self._by_mask[new])
        return out


@functools.lru_cache(maxsize=32)
def lattice(F: FiniteField, n: int) -> Lattice:
    return Lattice(F, n)


# --- serialization -----------------------------------------------------------


def matrix_json(F: FiniteField, rows: Iterable[Sequence[int]]) -> dict:
    return {"q": F.q, "p": F.p, "e": F.e, "rows": [list(r) for r in rows]}
