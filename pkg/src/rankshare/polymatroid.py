"""q-polymatroids on L(F_q^n) given by an exact rank oracle."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping

from .field import FiniteField
from .linalg import (
    DEFAULT_MAX_ENUM,
    DEFAULT_MAX_GL,
    DimensionMismatch,
    EnumerationLimitError,
    Lattice,
    Mat,
    QuotientMap,
    Subspace,
    embed,
    enumerate_gl,
    lattice,
    lattice_size,
    orthocomplement,
    quotient_setup,
    span_sum,
)

RankFn = Callable[[Subspace], Fraction]


class NotAQMatroid(ValueError):
    pass


class QPolymatroid:
    """Ambient F_q^n plus a rank oracle.

    Values are memoised per subspace; the cache only ever receives the value
    the oracle returns, so concurrent fills are harmless.
    """

    def __init__(self, field: FiniteField, n: int, rank: RankFn, name: str = "M"):
        self.field = field
        self.n = n
        self._rank = rank
        self._cache: dict[Subspace, Fraction] = {}
        self.name = name

    def __repr__(self) -> str:
        return f"QPolymatroid({self.name}, F_{self.field.q}^{self.n})"

    @classmethod
    def from_table(cls, field: FiniteField, n: int, table: Mapping[Subspace, Fraction], name: str = "M"):
        table = {V: Fraction(r) for V, r in table.items()}
        return cls(field, n, table.__getitem__, name=name)

    @classmethod
    def free(cls, field: FiniteField, n: int) -> QPolymatroid:
        return cls(field, n, lambda V: Fraction(V.dim), name="free")

    @classmethod
    def zero(cls, field: FiniteField, n: int) -> QPolymatroid:
        return cls(field, n, lambda V: Fraction(0), name="zero")

    @property
    def ground(self) -> Subspace:
        return Subspace.full(self.field, self.n)

    def rank(self, V: Subspace) -> Fraction:
        if V.n != self.n or V.field != self.field:
            raise DimensionMismatch(f"{V} is not a subspace of F_{self.field.q}^{self.n}")
        r = self._cache.get(V)
        if r is None:
            r = self._cache[V] = Fraction(self._rank(V))
        return r

    __call__ = rank

    def lattice(self, limit: int = DEFAULT_MAX_ENUM) -> Lattice:
        size = lattice_size(self.n, self.field.q)
        if size > limit:
            raise EnumerationLimitError(f"L(F_{self.field.q}^{self.n}) has {size} elements, limit {limit}")
        return lattice(self.field, self.n)

    def table(self, limit: int = DEFAULT_MAX_ENUM) -> list[Fraction]:
        """Rank of every subspace, in canonical lattice order."""
        return [self.rank(V) for V in self.lattice(limit)]

    def to_json(self, limit: int = DEFAULT_MAX_ENUM) -> list[dict]:
        return [
            {"subspace": [list(r) for r in V.rows], "rank": {"num": r.numerator, "den": r.denominator}}
            for V, r in zip(self.lattice(limit), self.table(limit))
        ]


@dataclass
class AxiomReport:
    R1: bool
    R2: bool
    R3: bool
    counterexample: tuple | None = None

    @property
    def ok(self) -> bool:
        return self.R1 and self.R2 and self.R3


def check_axioms(M: QPolymatroid, limit: int = DEFAULT_MAX_ENUM) -> AxiomReport:
    """Exhaustively check boundedness, monotonicity and submodularity.

    The counterexample is the first failure in canonical order, as
    ``(axiom, V)`` or ``(axiom, V, W)``.
    """
    L = M.lattice(limit)
    rho = M.table(limit)
    N = len(L)
    report = AxiomReport(True, True, True)
    for i, V in enumerate(L.spaces):
        if not 0 <= rho[i] <= V.dim:
            report.R1 = False
            report.counterexample = report.counterexample or ("R1", V)
    for i in range(N):
        for j in range(N):
            if report.R2 and i != j and L.leq(i, j) and rho[i] > rho[j]:
                report.R2 = False
                report.counterexample = report.counterexample or ("R2", L.spaces[i], L.spaces[j])
            if j >= i and rho[L.join(i, j)] + rho[L.meet(i, j)] > rho[i] + rho[j]:
                if report.R3:
                    report.R3 = False
                    report.counterexample = report.counterexample or ("R3", L.spaces[i], L.spaces[j])
    return report


def conditional_rank(M: QPolymatroid, V: Subspace, W: Subspace) -> Fraction:
    """rho(V | W) = rho(V + W) - rho(W): what V adds once W is known."""
    return M.rank(span_sum(V, W)) - M.rank(W)


def dual(M: QPolymatroid) -> QPolymatroid:
    """rho*(V) = dim V - rho(E) + rho(V^⊥), dot-product duality."""
    top = M.ground

    def rank(V):
        return V.dim - M.rank(top) + M.rank(orthocomplement(V))

    return QPolymatroid(M.field, M.n, rank, name=f"{M.name}*")


def restrict(M: QPolymatroid, Z: Subspace) -> QPolymatroid:
    """M|_Z, with Z identified with F_q^{dim Z} through its canonical basis."""
    _inside(M, Z)
    return QPolymatroid(M.field, Z.dim, lambda V: M.rank(embed(V, Z)), name=f"{M.name}|{Z}")


def contract(M: QPolymatroid, Z: Subspace, chart: QuotientMap | None = None) -> QPolymatroid:
    """M/Z on the quotient chart of E/Z: rho(V) = rho(pi^-1 V) - rho(Z)."""
    _inside(M, Z)
    chart = chart or quotient_setup(M.n, Z)
    rz = M.rank(Z)
    out = QPolymatroid(M.field, chart.dim, lambda V: M.rank(chart.backward(V)) - rz, name=f"{M.name}/{Z}")
    out.chart = chart
    return out


def _inside(M: QPolymatroid, Z: Subspace):
    if Z.n != M.n or Z.field != M.field:
        raise DimensionMismatch(f"{Z} is not a subspace of the ground space")


def is_qmatroid(M: QPolymatroid, limit: int = DEFAULT_MAX_ENUM) -> bool:
    return all(r.denominator == 1 and r >= 0 for r in M.table(limit))


def _require_qmatroid(M, limit):
    if not is_qmatroid(M, limit):
        raise NotAQMatroid(f"{M} has non-integral ranks")


def is_independent(M: QPolymatroid, V: Subspace) -> bool:
    return M.rank(V) == V.dim


def independent_spaces(M: QPolymatroid, limit: int = DEFAULT_MAX_ENUM) -> list[Subspace]:
    _require_qmatroid(M, limit)
    return [V for V, r in zip(M.lattice(limit), M.table(limit)) if r == V.dim]


def circuits(M: QPolymatroid, limit: int = DEFAULT_MAX_ENUM) -> list[Subspace]:
    """Dependent spaces all of whose proper subspaces are independent.

    The whole down-set is scanned, not just hyperplanes, so the answer does
    not rely on the axioms holding.
    """
    _require_qmatroid(M, limit)
    L = M.lattice(limit)
    rho = M.table(limit)
    indep = [rho[i] == L.dims[i] for i in range(len(L))]
    out = []
    for i, V in enumerate(L.spaces):
        if indep[i]:
            continue
        if all(indep[j] for j in range(len(L)) if j != i and L.leq(j, i)):
            out.append(V)
    return out


def bases(M: QPolymatroid, limit: int = DEFAULT_MAX_ENUM) -> list[Subspace]:
    """Independent spaces not properly contained in another independent space."""
    _require_qmatroid(M, limit)
    L = M.lattice(limit)
    rho = M.table(limit)
    indep = [i for i in range(len(L)) if rho[i] == L.dims[i]]
    return [L.spaces[i] for i in indep if not any(j != i and L.leq(i, j) for j in indep)]


# --- equivalence -------------------------------------------------------------


def _profile(M: QPolymatroid, L: Lattice) -> list:
    return sorted(zip(L.dims, M.table()))


def equivalent(
    M1: QPolymatroid, M2: QPolymatroid, limit: int = DEFAULT_MAX_GL, enum_limit: int = DEFAULT_MAX_ENUM
) -> Mat | None:
    """An invertible phi with rho2(phi(V)) = rho1(V) for all V, or None.

    The identity is tried first, then GL(n, q) in its enumeration order.
    Only F_q-linear maps are searched.
    """
    if M1.n != M2.n or M1.field != M2.field:
        return None
    L = M1.lattice(enum_limit)
    r1, r2 = M1.table(enum_limit), M2.table(enum_limit)
    if _profile(M1, L) != _profile(M2, L):
        return None
    ident = Mat.identity(M1.field, M1.n)
    if r1 == r2:
        return ident
    # points first: most candidates fail there
    order = sorted(range(len(L)), key=lambda i: (L.dims[i] != 1, i))
    for phi in enumerate_gl(M1.field, M1.n, limit):
        img = L.image_indices(phi)
        if all(r2[img[i]] == r1[i] for i in order):
            return phi
    return None


def apply_map(M: QPolymatroid, phi: Mat) -> QPolymatroid:
    """The q-polymatroid M' with rho'(phi(V)) = rho(V)."""
    from .linalg import image, inverse

    inv = inverse(phi)
    return QPolymatroid(M.field, M.n, lambda V: M.rank(image(V, inv)), name=f"phi({M.name})")
