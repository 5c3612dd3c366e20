"""Monotone families and access structures on subspace lattices.

Families keep their members in the coordinates of the ambient F_q^N and
record the space U whose lattice L(U) they live in.  Duality inside U uses
the dot product when it is non-degenerate on U and otherwise the form that
makes U's canonical basis orthonormal; an explicit Gram matrix can always be
passed instead.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Iterable

from .linalg import (
    DEFAULT_MAX_ENUM,
    DEFAULT_MAX_GL,
    DimensionMismatch,
    Mat,
    QuotientMap,
    Subspace,
    adapted_form,
    coordinates_in,
    embed,
    enumerate_gl,
    intersect,
    is_nondegenerate_on,
    lattice,
    orthocomplement,
    quotient_setup,
    span_sum,
    subspaces_of,
)

MONOTONE = "monotone"
ANTIMONOTONE = "antimonotone"
PLAIN = "plain"
_FLIP = {MONOTONE: ANTIMONOTONE, ANTIMONOTONE: MONOTONE, PLAIN: PLAIN}


class AccessError(ValueError):
    pass


@functools.lru_cache(maxsize=256)
def _lattice_of(U: Subspace) -> tuple[Subspace, ...]:
    return subspaces_of(U)


def lattice_of(U: Subspace, limit: int = DEFAULT_MAX_ENUM) -> tuple[Subspace, ...]:
    return subspaces_of(U, limit=limit) if limit != DEFAULT_MAX_ENUM else _lattice_of(U)


def _sorted(members: Iterable[Subspace]) -> tuple[Subspace, ...]:
    return tuple(sorted(members, key=Subspace.sort_key))


@dataclass(frozen=True)
class SubspaceFamily:
    space: Subspace
    members: frozenset = field(default_factory=frozenset)
    kind: str = PLAIN

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))
        for V in self.members:
            if not self.space.contains(V):
                raise DimensionMismatch(f"{V} is not inside {self.space}")

    def __contains__(self, V: Subspace) -> bool:
        return V in self.members

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.ordered())

    def ordered(self) -> tuple[Subspace, ...]:
        return _sorted(self.members)

    def __repr__(self) -> str:
        return f"SubspaceFamily({self.kind}, {list(self.ordered())})"


def is_monotone(members: Iterable[Subspace], space: Subspace, limit: int = DEFAULT_MAX_ENUM) -> bool:
    members = frozenset(members)
    lat = lattice_of(space, limit)
    return all(W in members for V in members for W in lat if W.contains(V))


def is_antimonotone(members: Iterable[Subspace], space: Subspace, limit: int = DEFAULT_MAX_ENUM) -> bool:
    members = frozenset(members)
    lat = lattice_of(space, limit)
    return all(W in members for V in members for W in lat if V.contains(W))


def family_check(H: SubspaceFamily, limit: int = DEFAULT_MAX_ENUM) -> bool:
    if H.kind == MONOTONE:
        return is_monotone(H.members, H.space, limit)
    if H.kind == ANTIMONOTONE:
        return is_antimonotone(H.members, H.space, limit)
    return True


def upward_closure(gens: Iterable[Subspace], space: Subspace) -> SubspaceFamily:
    gens = list(gens)
    return SubspaceFamily(space, {W for W in lattice_of(space) if any(W.contains(V) for V in gens)}, MONOTONE)


def downward_closure(gens: Iterable[Subspace], space: Subspace) -> SubspaceFamily:
    gens = list(gens)
    return SubspaceFamily(space, {W for W in lattice_of(space) if any(V.contains(W) for V in gens)}, ANTIMONOTONE)


def threshold_family(space: Subspace, k: int) -> SubspaceFamily:
    return SubspaceFamily(space, {V for V in lattice_of(space) if V.dim >= k}, MONOTONE)


# --- forms and orthocomplements inside a space -------------------------------


@functools.lru_cache(maxsize=256)
def default_form(U: Subspace) -> Mat | None:
    """None (the dot product) if it is non-degenerate on U, else U's chart form."""
    if is_nondegenerate_on(U):
        return None
    return adapted_form(U, Subspace.zero(U.field, U.n))


def perp_in(V: Subspace, U: Subspace, gram: Mat | None) -> Subspace:
    W = orthocomplement(V, gram)
    return W if U.dim == U.n else intersect(W, U)


# --- family operations -------------------------------------------------------


def family_complement(H: SubspaceFamily, limit: int = DEFAULT_MAX_ENUM) -> SubspaceFamily:
    return SubspaceFamily(H.space, {V for V in lattice_of(H.space, limit) if V not in H.members}, _FLIP[H.kind])


def family_dual(H: SubspaceFamily, gram: Mat | None = None, limit: int = DEFAULT_MAX_ENUM) -> SubspaceFamily:
    """H* = {V : V^⊥ in H}, orthocomplements taken inside H.space."""
    gram = gram if gram is not None else default_form(H.space)
    members = {V for V in lattice_of(H.space, limit) if perp_in(V, H.space, gram) in H.members}
    return SubspaceFamily(H.space, members, _FLIP[H.kind])


def family_restrict(H: SubspaceFamily, Z: Subspace) -> SubspaceFamily:
    """H|_Z = H ∩ L(Z)."""
    if not H.space.contains(Z):
        raise DimensionMismatch(f"{Z} is not inside {H.space}")
    return SubspaceFamily(Z, {V for V in H.members if Z.contains(V)}, H.kind)


def family_contract(H: SubspaceFamily, Z: Subspace, chart: QuotientMap | None = None) -> SubspaceFamily:
    """H/Z = {V <= U/Z : pi^-1(V) in H}, on the quotient chart of F^N / Z.

    The contracted family lives in L(pi(U)); when U is the whole ambient,
    pi(U) is the whole chart space.
    """
    if not H.space.contains(Z):
        raise DimensionMismatch(f"{Z} is not inside {H.space}")
    chart = chart or quotient_setup(Z.n, Z)
    space = chart.forward(H.space)
    return SubspaceFamily(space, {chart.forward(V) for V in H.members if V.contains(Z)}, H.kind)


def family_map(H: SubspaceFamily, f, space: Subspace, kind: str | None = None) -> SubspaceFamily:
    return SubspaceFamily(space, {f(V) for V in H.members}, kind or H.kind)


# --- access structures -------------------------------------------------------


@dataclass(frozen=True)
class AccessStructure:
    """(Gamma, A): a monotone reconstructing family and an anti-monotone
    privacy family, disjoint, over the same player space."""

    space: Subspace
    gamma: SubspaceFamily
    alpha: SubspaceFamily

    @property
    def player_space(self) -> Subspace:
        return self.space

    @property
    def degenerate(self) -> bool:
        return not self.gamma.members or not self.alpha.members

    def lattice(self) -> tuple[Subspace, ...]:
        return lattice_of(self.space)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AccessStructure):
            return NotImplemented
        return (self.space, self.gamma.members, self.alpha.members) == (
            other.space,
            other.gamma.members,
            other.alpha.members,
        )

    def __hash__(self) -> int:
        return hash((self.space, self.gamma.members, self.alpha.members))

    def to_json(self, expand: bool = False) -> dict:
        gap = min_gap(self)
        out = {
            "player_space": [list(r) for r in self.space.rows],
            "gamma_min": [[list(r) for r in V.rows] for V in gamma_min(self)],
            "alpha_max": [[list(r) for r in V.rows] for V in alpha_max(self)],
            "perfect": is_perfect(self),
            "gap": gap,
        }
        if expand:
            out["gamma"] = [[list(r) for r in V.rows] for V in self.gamma]
            out["alpha"] = [[list(r) for r in V.rows] for V in self.alpha]
        return out


def make_access(gamma, alpha, space: Subspace | None = None, validate: bool = True) -> AccessStructure:
    """Build and validate an access structure.

    ``gamma``/``alpha`` are families or plain iterables of subspaces; in the
    latter case ``space`` names the player space.
    """
    if isinstance(gamma, SubspaceFamily):
        space = space or gamma.space
    if isinstance(alpha, SubspaceFamily):
        space = space or alpha.space
    if space is None:
        raise AccessError("player space required")
    g = SubspaceFamily(space, gamma.members if isinstance(gamma, SubspaceFamily) else gamma, MONOTONE)
    a = SubspaceFamily(space, alpha.members if isinstance(alpha, SubspaceFamily) else alpha, ANTIMONOTONE)
    if validate:
        clash = g.members & a.members
        if clash:
            raise AccessError(f"Gamma and A overlap in {_sorted(clash)[0]}")
        if not family_check(g):
            raise AccessError("Gamma is not monotone")
        if not family_check(a):
            raise AccessError("A is not anti-monotone")
    return AccessStructure(space, g, a)


def _minimal(members: frozenset, below) -> tuple[Subspace, ...]:
    return _sorted(V for V in members if not any(W != V and below(W, V) for W in members))


def gamma_min(S: AccessStructure) -> tuple[Subspace, ...]:
    """Members of Gamma with no proper subspace in Gamma."""
    return _minimal(S.gamma.members, lambda W, V: V.contains(W))


def alpha_max(S: AccessStructure) -> tuple[Subspace, ...]:
    """Members of A not properly contained in another member."""
    return _minimal(S.alpha.members, lambda W, V: W.contains(V))


def is_perfect(S: AccessStructure) -> bool:
    return len(S.gamma) + len(S.alpha) == len(S.lattice())


def min_gap(S: AccessStructure) -> int | None:
    """min dim(V/W) over V in Gamma, W in A, W <= V; None when no such pair exists."""
    best = None
    for V in S.gamma.members:
        for W in S.alpha.members:
            if V.contains(W):
                g = V.dim - W.dim
                if best is None or g < best:
                    best = g
    return best


def is_threshold(S: AccessStructure) -> int | None:
    """k with Gamma = {V : dim V >= k}, or None."""
    for k in range(S.space.dim + 1):
        if S.gamma.members == threshold_family(S.space, k).members:
            return k
    return None


def access_dual(S: AccessStructure, gram: Mat | None = None) -> AccessStructure:
    """S* = (A*, Gamma*), both families dualised with the same form."""
    return AccessStructure(S.space, _as(family_dual(S.alpha, gram), MONOTONE), _as(family_dual(S.gamma, gram), ANTIMONOTONE))


def _as(H: SubspaceFamily, kind: str) -> SubspaceFamily:
    return SubspaceFamily(H.space, H.members, kind)


def access_restrict(S: AccessStructure, Z: Subspace) -> AccessStructure:
    return AccessStructure(Z, family_restrict(S.gamma, Z), family_restrict(S.alpha, Z))


def access_contract(S: AccessStructure, Z: Subspace, chart: QuotientMap | None = None) -> AccessStructure:
    chart = chart or quotient_setup(Z.n, Z)
    g = family_contract(S.gamma, Z, chart)
    a = family_contract(S.alpha, Z, chart)
    return AccessStructure(g.space, g, a)


def recoordinatize(S: AccessStructure) -> AccessStructure:
    """The same structure on F_q^{dim U}, via U's canonical coordinates."""
    U = S.space
    if U.dim == U.n:
        return S
    full = Subspace.full(U.field, U.dim)

    def f(V):
        return coordinates_in(V, U)

    return AccessStructure(full, family_map(S.gamma, f, full), family_map(S.alpha, f, full))


def structure_map(S: AccessStructure, f, space: Subspace) -> AccessStructure:
    return AccessStructure(space, family_map(S.gamma, f, space), family_map(S.alpha, f, space))


# --- equivalence -------------------------------------------------------------


def access_equivalent(S1: AccessStructure, S2: AccessStructure, limit: int = DEFAULT_MAX_GL) -> Mat | None:
    """An invertible f on the player space with f(Gamma1) = Gamma2 and
    f(A1) = A2 (in the canonical coordinates of each player space), or None.

    The identity is tried first, then GL(d, q) in enumeration order.
    """
    T1, T2 = recoordinatize(S1), recoordinatize(S2)
    if T1.space.n != T2.space.n or T1.space.field != T2.space.field:
        return None
    if (len(T1.gamma), len(T1.alpha)) != (len(T2.gamma), len(T2.alpha)):
        return None
    if sorted(V.dim for V in T1.gamma.members) != sorted(V.dim for V in T2.gamma.members):
        return None
    if sorted(V.dim for V in T1.alpha.members) != sorted(V.dim for V in T2.alpha.members):
        return None
    F, d = T1.space.field, T1.space.n
    L = lattice(F, d)
    g1 = [L.of(V) for V in T1.gamma.members]
    a1 = [L.of(V) for V in T1.alpha.members]
    g2 = {L.of(V) for V in T2.gamma.members}
    a2 = {L.of(V) for V in T2.alpha.members}
    ident = Mat.identity(F, d)
    if set(g1) == g2 and set(a1) == a2:
        return ident
    for f in enumerate_gl(F, d, limit):
        img = L.image_indices(f)
        if all(img[i] in g2 for i in g1) and all(img[i] in a2 for i in a1):
            return f
    return None


# --- mutual duality of restriction and contraction ---------------------------


@dataclass
class MinorDualityReport:
    """Outcome of checking (S/Z)* ≃ S*|_{Z^⊥} and (S|_{Z^⊥})* ≃ S*/Z.

    Everything is expressed on F_q^d, d = dim of the player space, in its
    canonical coordinates.  ``gram`` is the form used on F_q^d (None for the
    dot product); the quotient chart of F_q^d / Z carries the dot product.
    ``sigma`` lists V -> sigma(V) for every V in L(E/Z).
    """

    Z: Subspace
    Z_perp: Subspace
    gram: Mat | None
    sigma: list
    checks: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def _order_iso(f, src, dst) -> dict:
    imgs = [f(V) for V in src]
    inside = set(imgs) <= set(dst)
    bij = inside and len(set(imgs)) == len(dst) == len(src)
    mono = all(
        V.contains(W) == fV.contains(fW) for V, fV in zip(src, imgs) for W, fW in zip(src, imgs)
    )
    return {"into": inside, "bijective": bij, "monotone_both_ways": mono}


def minors_duality_check(S: AccessStructure, Z: Subspace) -> MinorDualityReport:
    """Verify both minor/duality equivalences for S and Z <= player space,
    with the explicit witness maps

        sigma: L(E/Z) -> L(Z^⊥),  V -> pi^-1(V^⊥)^⊥
        tau:   L(Z^⊥) -> L(E/Z),  W -> pi((W + Z)^⊥)^⊥
        phi:   L(E/Z) -> L(Z^⊥),  V -> pi^-1(V) ∩ Z^⊥

    sigma/tau carry (S/Z)* onto S*|_{Z^⊥}; phi carries S*/Z onto
    (S|_{Z^⊥})*.  When the dot product is degenerate on Z the adapted form
    (Z and its standard complement orthonormal) is used throughout.
    """
    if not S.space.contains(Z):
        raise DimensionMismatch(f"{Z} is not inside the player space")
    T = recoordinatize(S)
    Zc = coordinates_in(Z, S.space) if S.space.dim != S.space.n else Z
    F, d = Zc.field, Zc.n
    E = Subspace.full(F, d)
    gram = None if is_nondegenerate_on(Zc) else adapted_form(E, Zc)
    Zp = orthocomplement(Zc, gram)
    chart = quotient_setup(d, Zc)
    quotient_lattice = lattice_of(Subspace.full(F, chart.dim))
    zp_lattice = lattice_of(Zp)

    def perp(V):
        return orthocomplement(V, gram)

    def perp_q(V):
        return orthocomplement(V)

    def sigma(V):
        return perp(chart.backward(perp_q(V)))

    def tau(W):
        return perp_q(chart.forward(perp(span_sum(W, Zc))))

    def phi(V):
        return intersect(chart.backward(V), Zp)

    checks = {}
    checks["Z_direct_sum"] = intersect(Zc, Zp).dim == 0 and Zc.dim + Zp.dim == d

    # first identity: (S/Z)* ≃ S*|_{Z^⊥}
    left = access_dual(access_contract(T, Zc, chart))
    right = access_restrict(access_dual(T, gram), Zp)
    iso = _order_iso(sigma, quotient_lattice, zp_lattice)
    checks.update({f"sigma_{k}": v for k, v in iso.items()})
    checks["tau_sigma_identity"] = all(tau(sigma(V)) == V for V in quotient_lattice)
    checks["sigma_tau_identity"] = all(sigma(tau(W)) == W for W in zp_lattice)
    checks["sigma_carries_gamma"] = {sigma(V) for V in left.gamma.members} == right.gamma.members
    checks["sigma_carries_alpha"] = {sigma(V) for V in left.alpha.members} == right.alpha.members

    # second identity: (S|_{Z^⊥})* ≃ S*/Z
    left2 = access_dual(access_restrict(T, Zp), gram)
    right2 = access_contract(access_dual(T, gram), Zc, chart)
    iso2 = _order_iso(phi, quotient_lattice, zp_lattice)
    checks.update({f"phi_{k}": v for k, v in iso2.items()})
    checks["phi_inverse"] = all(chart.forward(phi(V)) == V for V in quotient_lattice)
    checks["phi_carries_gamma"] = {phi(V) for V in right2.gamma.members} == left2.gamma.members
    checks["phi_carries_alpha"] = {phi(V) for V in right2.alpha.members} == left2.alpha.members

    table = [(V, sigma(V)) for V in quotient_lattice]
    Zp_amb = embed(Zp, S.space) if S.space.dim != S.space.n else Zp
    return MinorDualityReport(Z, Zp_amb, gram, table, checks)
