"""Generalised q-polymatroid ports S_{P0,P}(M) and their structural checks."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .access import (
    AccessError,
    AccessStructure,
    access_contract,
    access_dual,
    access_equivalent,
    access_restrict,
    alpha_max,
    default_form,
    gamma_min,
    is_perfect,
    is_threshold,
    lattice_of,
    make_access,
    min_gap,
    perp_in,
    structure_map,
)
from .codes import RankMetricCode, induced_qpolymatroid, singleton_check
from .linalg import (
    DEFAULT_MAX_ENUM,
    Mat,
    Subspace,
    coordinates_in,
    embed,
    image,
    intersect,
    orthocomplement,
    quotient_setup,
    span_sum,
)
from .polymatroid import (
    QPolymatroid,
    apply_map,
    circuits,
    conditional_rank,
    contract,
    dual,
    is_qmatroid,
    restrict,
)
from .serialize import fraction_json

GENERALIZED_QPOLYMATROID = "generalized_qpolymatroid"
GENERALIZED_QMATROID = "generalized_qmatroid"
QPOLYMATROID = "qpolymatroid"
QMATROID = "qmatroid"


class PortError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Port:
    polymatroid: QPolymatroid
    dealer: Subspace
    players: Subspace
    structure: AccessStructure

    @property
    def gamma(self):
        return self.structure.gamma

    @property
    def alpha(self):
        return self.structure.alpha

    @property
    def dealer_rank(self) -> Fraction:
        return self.polymatroid.rank(self.dealer)

    def __repr__(self) -> str:
        return f"Port({self.polymatroid.name}, P0={self.dealer}, P={self.players})"


def check_complementary(P0: Subspace, P: Subspace) -> None:
    if P0.n != P.n or P0.field != P.field:
        raise PortError("dealer and player spaces live in different ambients")
    if intersect(P0, P).dim != 0 or P0.dim + P.dim != P0.n:
        raise PortError(f"P0 = {P0} and P = {P} are not complementary")


def build_port(M: QPolymatroid, P0: Subspace, P: Subspace, limit: int = DEFAULT_MAX_ENUM) -> Port:
    """Gamma = {V <= P : rho(P0|V) = 0}, A = {W <= P : rho(P0|W) = rho(P0)}."""
    check_complementary(P0, P)
    if P0.n != M.n or P0.field != M.field:
        raise PortError("dealer/player spaces do not match the polymatroid's ambient")
    r0 = M.rank(P0)
    if r0 <= 0:
        raise PortError(f"rho(P0) = {r0}; the dealer space carries no information")
    gamma, alpha = set(), set()
    for V in lattice_of(P, limit):
        c = conditional_rank(M, P0, V)
        if c == 0:
            gamma.add(V)
        if c == r0:
            alpha.add(V)
    try:
        S = make_access(gamma, alpha, P)
    except AccessError as exc:
        raise PortError(f"derived families do not form an access structure: {exc}") from None
    return Port(M, P0, P, S)


def classify(port: Port) -> str:
    qm = is_qmatroid(port.polymatroid)
    if port.dealer.dim == 1:
        return QMATROID if qm else QPOLYMATROID
    return GENERALIZED_QMATROID if qm else GENERALIZED_QPOLYMATROID


def players(P: Subspace) -> tuple[Subspace, ...]:
    """The 1-dim subspaces of P."""
    return tuple(V for V in lattice_of(P) if V.dim == 1)


def information_ratio(port: Port) -> Fraction:
    M = port.polymatroid
    pts = players(port.players)
    if not pts:
        return Fraction(0)
    return max(M.rank(p) for p in pts) / port.dealer_rank


def ratio_gap_bound_check(port: Port) -> bool | None:
    """sigma(S) >= 1/g(S); None when the gap is undefined."""
    g = min_gap(port.structure)
    if g is None:
        return None
    return information_ratio(port) * g >= 1


def reconstruction_criterion_check(port: Port) -> bool:
    """V in Gamma iff rho(V) = rho(V + P0)."""
    M, P0 = port.polymatroid, port.dealer
    return all((M.rank(V) == M.rank(span_sum(V, P0))) == (V in port.gamma) for V in lattice_of(port.players))


def port_restriction_check(port: Port, Z: Subspace) -> bool:
    """S|_Z equals the port of M|_{P0+Z} at (P0, Z), carried back into E."""
    if not port.players.contains(Z):
        raise PortError(f"{Z} is not inside the player space")
    left = access_restrict(port.structure, Z)
    U = span_sum(port.dealer, Z)
    inner = build_port(restrict(port.polymatroid, U), coordinates_in(port.dealer, U), coordinates_in(Z, U))
    right = structure_map(inner.structure, lambda V: embed(V, U), Z)
    return left == right


@dataclass
class ContractionReport:
    """S/Z against the port of M/Z, family by family.

    The reconstructing families always agree.  The privacy families agree
    exactly when Z is itself in A: the contracted port always has 0 in its
    privacy family, while 0 lies in A/Z only if Z lies in A.
    """

    gamma_equal: bool
    alpha_equal: bool
    Z_in_alpha: bool

    @property
    def ok(self) -> bool:
        return self.gamma_equal and self.alpha_equal


def port_contraction_check(port: Port, Z: Subspace) -> ContractionReport:
    """S/Z against the port of M/Z at (pi P0, pi P), both on one quotient chart."""
    if not port.players.contains(Z):
        raise PortError(f"{Z} is not inside the player space")
    if Z in port.gamma:
        raise PortError(f"{Z} reconstructs the secret; contraction needs Z outside Gamma")
    chart = quotient_setup(port.polymatroid.n, Z)
    left = access_contract(port.structure, Z, chart)
    right = build_port(contract(port.polymatroid, Z, chart), chart.forward(port.dealer), chart.forward(port.players))
    return ContractionReport(
        left.gamma.members == right.gamma.members,
        left.alpha.members == right.alpha.members,
        Z in port.alpha,
    )


@dataclass
class DualityReport:
    dual_port: Port
    lattice_map_ok: bool
    witness: Mat | None

    @property
    def ok(self) -> bool:
        return self.lattice_map_ok and self.witness is not None


def port_duality_check(port: Port) -> DualityReport:
    """S* against the port of M* at (P^⊥, P0^⊥).

    The lattice map W -> (W^{⊥P})^⊥ ∩ P0^⊥ must carry A* onto Gamma' and
    Gamma* onto A'; a linear witness is also searched for.
    """
    M, P0, P = port.polymatroid, port.dealer, port.players
    if port.structure.degenerate:
        raise PortError("the port is degenerate")
    if M.rank(P0) != P0.dim:
        raise PortError(f"rho(P0) = {M.rank(P0)} differs from dim P0 = {P0.dim}")
    form = default_form(P)
    S_star = access_dual(port.structure, form)
    other = build_port(dual(M), orthocomplement(P), orthocomplement(P0))
    P0p = orthocomplement(P0)

    def f(W):
        return intersect(orthocomplement(perp_in(W, P, form)), P0p)

    mapped = structure_map(S_star, f, P0p)
    return DualityReport(other, mapped == other.structure, access_equivalent(S_star, other.structure))


def port_equivalence_check(port: Port, phi: Mat) -> bool:
    """The port of phi(M) at (phi P0, phi P) is the phi-image of the port."""
    M2 = apply_map(port.polymatroid, phi)
    other = build_port(M2, image(port.dealer, phi), image(port.players, phi))
    mapped = structure_map(port.structure, lambda V: image(V, phi), image(port.players, phi))
    return mapped == other.structure


@dataclass
class GammaMinReport:
    perfect: bool
    characterization: bool
    circuit_sufficiency: bool
    non_circuit_minimal: list

    @property
    def ok(self) -> bool:
        return self.perfect and self.characterization and self.circuit_sufficiency


def qmatroid_gamma_min_check(port: Port) -> GammaMinReport:
    """Perfectness plus the basis/independence description of Gamma_min.

    ``non_circuit_minimal`` lists the V in Gamma_min for which V + P0 is
    not a circuit, showing that circuits do not exhaust Gamma_min.
    """
    M, P0 = port.polymatroid, port.dealer
    if not is_qmatroid(M):
        raise PortError("not a q-matroid port")
    LP = lattice_of(port.players)

    def independent(V):
        return M.rank(V) == V.dim

    def described(V):
        is_basis = independent(V) and M.rank(V) == M.rank(span_sum(V, P0))
        return is_basis and all(independent(span_sum(W, P0)) for W in LP if W != V and V.contains(W))

    gmin = set(gamma_min(port.structure))
    char = gmin == {V for V in LP if described(V)}
    circ = set(circuits(M))
    over = [V for V in LP if span_sum(V, P0) in circ]
    return GammaMinReport(
        is_perfect(port.structure),
        char,
        all(V in gmin for V in over),
        sorted((V for V in gmin if span_sum(V, P0) not in circ), key=Subspace.sort_key),
    )


@dataclass
class ThresholdReport:
    ratio: Fraction
    cutoff: int
    rank_formula: bool
    gamma_matches: bool
    threshold: int | None

    @property
    def ok(self) -> bool:
        return self.rank_formula and self.gamma_matches


def mrd_threshold_check(C: RankMetricCode, P0: Subspace, P: Subspace) -> ThresholdReport:
    """For an MRD code: rho(V) = min{dim V, k/m} and Gamma follows from it."""
    _, mrd = singleton_check(C)
    if not mrd:
        raise PortError("the code is not MRD")
    M = induced_qpolymatroid(C)
    r = Fraction(C.dim, C.m)

    def predicted(V):
        return min(Fraction(V.dim), r)

    formula = all(M.rank(V) == predicted(V) for V in M.lattice())
    port = build_port(M, P0, P)
    expected = {V for V in lattice_of(P) if predicted(span_sum(V, P0)) == predicted(V)}
    return ThresholdReport(r, math.ceil(r), formula, expected == port.gamma.members, is_threshold(port.structure))


def port_to_json(port: Port, checks: dict | None = None, expand: bool = False) -> dict:
    out = port.structure.to_json(expand)
    out["dealer"] = [list(r) for r in port.dealer.rows]
    out["classification"] = classify(port)
    out["information_ratio"] = fraction_json(information_ratio(port))
    out["checks"] = dict(checks or {})
    return out


__all__ = [
    "Port",
    "PortError",
    "build_port",
    "classify",
    "information_ratio",
    "ratio_gap_bound_check",
    "reconstruction_criterion_check",
    "port_restriction_check",
    "port_contraction_check",
    "ContractionReport",
    "port_duality_check",
    "port_equivalence_check",
    "qmatroid_gamma_min_check",
    "mrd_threshold_check",
    "port_to_json",
    "alpha_max",
    "gamma_min",
]
