"""Golden and randomized verification suites, shared by the CLI and tests."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .access import family_check, gamma_min, is_perfect, lattice_of, minors_duality_check
from .codes import RankMetricCode, code_from_basis, gabidulin, induced_qpolymatroid, min_rank_distance, singleton_check
from .field import FiniteField, field_make
from .linalg import Mat, Subspace, enumerate_subspaces, intersect, lattice, span_sum
from .polymatroid import QPolymatroid, check_axioms, dual, is_qmatroid
from .port import (
    Port,
    build_port,
    mrd_threshold_check,
    port_contraction_check,
    port_duality_check,
    port_equivalence_check,
    port_restriction_check,
    qmatroid_gamma_min_check,
    ratio_gap_bound_check,
    reconstruction_criterion_check,
)
from .scheme import ProjectionTable, apply_generator, omega, omega_scan, predicted_entropy
from .serialize import fixture_code, fixture_subspace

ENTROPY_TOL = 1e-9


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}" + (f": {self.detail}" if self.detail else "")


@dataclass
class SuiteReport:
    results: list = field(default_factory=list)

    def add(self, name: str, passed: bool, detail: str = "") -> bool:
        self.results.append(CheckResult(name, bool(passed), detail))
        return bool(passed)

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results)

    def first_failure(self) -> CheckResult | None:
        return next((r for r in self.results if not r.passed), None)


# --- fixtures and random instances -------------------------------------------


def example(name: str) -> tuple[RankMetricCode, Subspace, Subspace]:
    """(code, P0, P) for the bundled example 'example1' or 'example3'."""
    return fixture_code(f"{name}.json"), fixture_subspace(f"{name}_p0.json"), fixture_subspace(f"{name}_p.json")


def example_port(name: str) -> Port:
    C, P0, P = example(name)
    return build_port(induced_qpolymatroid(C), P0, P)


def random_code(rng: random.Random, F: FiniteField, n: int, m: int, k: int | None = None) -> RankMetricCode:
    k = rng.randint(1, n * m) if k is None else k
    mats = [Mat.of(F, [[rng.randrange(F.q) for _ in range(m)] for _ in range(n)]) for _ in range(k)]
    return code_from_basis(mats)


def random_complement(rng: random.Random, F: FiniteField, n: int, d0: int) -> tuple[Subspace, Subspace]:
    """A random pair (P0, P) with P0 ⊕ P = F^n and dim P0 = d0."""
    spaces = list(enumerate_subspaces(F, n))
    P0 = rng.choice([V for V in spaces if V.dim == d0])
    P = rng.choice([V for V in spaces if V.dim == n - d0 and intersect(V, P0).dim == 0])
    return P0, P


def random_port(rng: random.Random, F: FiniteField, n: int, m: int, d0: int = 1, qmatroid: bool = False) -> Port:
    """A random port; with ``qmatroid`` the code has m = 1, so its ranks are integers."""
    if qmatroid:
        m = 1
    while True:
        C = random_code(rng, F, n, m)
        M = induced_qpolymatroid(C)
        P0, P = random_complement(rng, F, n, d0)
        if M.rank(P0) > 0:
            return build_port(M, P0, P)


def random_gl(rng: random.Random, F: FiniteField, n: int) -> Mat:
    while True:
        A = Mat.of(F, [[rng.randrange(F.q) for _ in range(n)] for _ in range(n)])
        if A.rank() == n:
            return A


def _cx(*spaces) -> str:
    return " ".join(repr(V) for V in spaces)


# --- suites ------------------------------------------------------------------


def axioms_report(M: QPolymatroid, name: str, report: SuiteReport) -> bool:
    ax = check_axioms(M)
    detail = "" if ax.ok else f"{ax.counterexample[0]} at {_cx(*ax.counterexample[1:])}"
    return report.add(name, ax.ok, detail)


def double_dual_ok(M: QPolymatroid) -> bool:
    return M.table() == dual(dual(M)).table()


def suite_axioms(trials: int = 20, seed: int = 0) -> SuiteReport:
    rep = SuiteReport()
    for name in ("example1", "example3"):
        M = induced_qpolymatroid(example(name)[0])
        axioms_report(M, f"axioms {name}", rep)
        axioms_report(dual(M), f"axioms dual {name}", rep)
        rep.add(f"double dual {name}", double_dual_ok(M))
    rng = random.Random(seed)
    for t in range(trials):
        F = field_make(rng.choice((2, 3)))
        n = rng.randint(1, 4 if F.q == 2 else 3)
        m = rng.randint(1, 3)
        M = induced_qpolymatroid(random_code(rng, F, n, m))
        axioms_report(M, f"axioms random #{t} (q={F.q}, n={n}, m={m})", rep)
        axioms_report(dual(M), f"axioms dual random #{t}", rep)
        rep.add(f"double dual random #{t}", double_dual_ok(M))
    return rep


def port_checks(port: Port, label: str, rep: SuiteReport, linear_witness: bool = True) -> None:
    """Every port proposition that applies to ``port``."""
    S = port.structure
    rep.add(f"{label} monotone/antimonotone", family_check(S.gamma) and family_check(S.alpha))
    rep.add(f"{label} reconstruction criterion", reconstruction_criterion_check(port))
    rg = ratio_gap_bound_check(port)
    if rg is not None:
        rep.add(f"{label} ratio-gap bound", rg)
    LP = lattice_of(port.players)
    bad = [Z for Z in LP if not port_restriction_check(port, Z)]
    rep.add(f"{label} restriction identity", not bad, _cx(*bad[:1]))
    gamma_bad, alpha_bad = [], []
    for Z in LP:
        if Z in port.gamma:
            continue
        r = port_contraction_check(port, Z)
        if not r.gamma_equal:
            gamma_bad.append(Z)
        # the privacy families agree exactly when Z itself is private
        if r.alpha_equal != r.Z_in_alpha:
            alpha_bad.append(Z)
    rep.add(f"{label} contraction identity (Gamma)", not gamma_bad, _cx(*gamma_bad[:1]))
    rep.add(f"{label} contraction identity (A, iff Z in A)", not alpha_bad, _cx(*alpha_bad[:1]))
    if not S.degenerate and port.dealer_rank == port.dealer.dim:
        d = port_duality_check(port)
        rep.add(f"{label} duality equivalence", d.lattice_map_ok and (d.witness is not None or not linear_witness))
    if port.dealer.dim == 1 and is_qmatroid(port.polymatroid):
        g = qmatroid_gamma_min_check(port)
        rep.add(f"{label} q-matroid port perfect", g.perfect)
        rep.add(f"{label} Gamma_min characterization", g.characterization)
        rep.add(f"{label} circuit sufficiency", g.circuit_sufficiency)
    bad = [Z for Z in LP if not minors_duality_check(S, Z).ok]
    rep.add(f"{label} minors/duality witnesses", not bad, _cx(*bad[:1]))


def suite_ports(trials: int = 10, seed: int = 0) -> SuiteReport:
    rep = SuiteReport()
    ex2 = example_port("example1")
    F2 = ex2.polymatroid.field

    def sp(*rows):
        return Subspace.span(F2, rows, 4)

    rep.add("example2 A = {0}", ex2.alpha.members == {Subspace.zero(F2, 4)})
    want = {
        sp([0, 1, 0, 0], [0, 0, 1, 0]),
        sp([0, 1, 0, 1], [0, 0, 1, 1]),
        sp([0, 1, 0, 1], [0, 0, 1, 0]),
        sp([0, 1, 0, 0], [0, 0, 1, 1]),
        sp([0, 0, 0, 1]),
    }
    rep.add("example2 Gamma_min", set(gamma_min(ex2.structure)) == want)
    gap = {sp(r) for r in ([0, 0, 1, 0], [0, 1, 0, 1], [0, 0, 1, 1], [0, 1, 0, 0], [0, 1, 1, 0], [0, 1, 1, 1])}
    outside = {V for V in lattice_of(ex2.players) if V not in ex2.gamma and V not in ex2.alpha}
    rep.add("example2 complement of Gamma minus A", outside == gap)
    port_checks(ex2, "example2", rep)

    ex3 = example_port("example3")
    rep.add("example3 perfect", is_perfect(ex3.structure))
    rep.add(
        "example3 Gamma_min",
        set(gamma_min(ex3.structure)) == {sp([0, 1, 0, 1]), sp([0, 1, 1, 0]), sp([0, 0, 1, 1])},
    )
    g = qmatroid_gamma_min_check(ex3)
    rep.add("example3 non-circuit minimal witness", sp([0, 0, 1, 1]) in g.non_circuit_minimal)
    port_checks(ex3, "example3", rep)

    G = gabidulin(4, 2, F2)
    P0, P = sp([1, 0, 0, 0]), sp([0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1])
    bound, mrd = singleton_check(G)
    rep.add("gabidulin(4,2) MRD", mrd and G.dim == 8 and bound == 8 and min_rank_distance(G) == 3)
    th = mrd_threshold_check(G, P0, P)
    rep.add("gabidulin(4,2) threshold port", th.ok and th.threshold == 2 and th.ratio == 2)

    rng = random.Random(seed)
    for t in range(trials):
        n = rng.randint(2, 4)
        port = random_port(rng, F2, n, 1, d0=1, qmatroid=True)
        port_checks(port, f"random q-matroid port #{t} (n={n})", rep)
        phi = random_gl(rng, F2, n)
        rep.add(f"random q-matroid port #{t} equivalence under phi", port_equivalence_check(port, phi))
    for t in range(trials):
        F = field_make(rng.choice((2, 3)))
        n = rng.randint(2, 4 if F.q == 2 else 3)
        port = random_port(rng, F, n, rng.randint(1, 3), d0=rng.randint(1, n - 1))
        port_checks(port, f"random port #{t} (q={F.q}, n={n})", rep)
    return rep


def entropy_checks(C: RankMetricCode, rep: SuiteReport, label: str, tol: float = ENTROPY_TOL) -> None:
    T = ProjectionTable(C)
    L = lattice(C.field, C.n)
    spaces = L.spaces
    N = len(spaces)
    H = [T.entropy(V) for V in spaces]
    bad = [V for V, h in zip(spaces, H) if abs(h - predicted_entropy(C, V)) > tol]
    rep.add(f"{label} H(Z_V) = m log2(q) rho(V)", not bad, _cx(*bad[:1]))
    H2 = {}
    bad = []
    for i in range(N):
        for j in range(i, N):
            H2[i, j] = h = T.entropy(spaces[i], spaces[j])
            if abs(h - H[L.join(i, j)]) > tol:
                bad.append((spaces[i], spaces[j]))
    rep.add(f"{label} joint entropy collapse, pairs", not bad, _cx(*bad[0]) if bad else "")
    bad = []
    for i in range(N):
        for j in range(i, N):
            ij = L.join(i, j)
            for k in range(j, N):
                if abs(T.entropy(spaces[i], spaces[j], spaces[k]) - H[L.join(ij, k)]) > tol:
                    bad.append((spaces[i], spaces[j], spaces[k]))
    rep.add(f"{label} joint entropy collapse, triples", not bad, _cx(*bad[0]) if bad else "")
    M = induced_qpolymatroid(C)
    scale = C.m * math.log2(C.q)
    bad = []
    for v in range(N):
        for w in range(N):
            cond = H2[min(v, w), max(v, w)] - H[v]
            want = scale * float(M.rank(spaces[L.join(v, w)]) - M.rank(spaces[v]))
            if abs(cond - want) > tol:
                bad.append((spaces[w], spaces[v]))
    rep.add(f"{label} H(Z_W | Z_V) = m log2(q) rho(W|V)", not bad, _cx(*bad[0]) if bad else "")


def omega_cross_check(C: RankMetricCode, P0: Subspace, P: Subspace) -> list:
    """Coalitions V <= P and codewords X where solving and scanning disagree."""
    bad = []
    for V in lattice_of(P):
        for X in C.codewords():
            val = apply_generator(V, X)
            if omega(C, P0, V, val).secrets() != omega_scan(C, P0, V, val):
                bad.append((V, X))
    return bad


def omega_size_law(C: RankMetricCode, P0: Subspace, P: Subspace) -> list:
    M = induced_qpolymatroid(C)
    bad = []
    for V in lattice_of(P):
        expect = C.q ** (C.m * (M.rank(span_sum(P0, V)) - M.rank(V)))
        for X in C.codewords():
            if Fraction(omega(C, P0, V, apply_generator(V, X)).size) != expect:
                bad.append((V, X))
    return bad


def suite_entropy(trials: int = 0, seed: int = 0) -> SuiteReport:
    rep = SuiteReport()
    C, P0, P = example("example1")
    entropy_checks(C, rep, "example1")
    for name in ("example1", "example3"):
        C, P0, P = example(name)
        bad = omega_cross_check(C, P0, P)
        rep.add(f"{name} omega by solving = omega by scanning", not bad, _cx(bad[0][0]) if bad else "")
        bad = omega_size_law(C, P0, P)
        rep.add(f"{name} |omega| = q^(m rho(P0|V))", not bad, _cx(bad[0][0]) if bad else "")
    return rep


SUITES: dict[str, Callable[..., SuiteReport]] = {
    "axioms": suite_axioms,
    "ports": suite_ports,
    "entropy": suite_entropy,
}


def run_suite(name: str, trials: int | None = None, seed: int = 0) -> SuiteReport:
    names = list(SUITES) if name == "all" else [name]
    rep = SuiteReport()
    defaults = {"axioms": 20, "ports": 10, "entropy": 0}
    for n in names:
        rep.results.extend(SUITES[n](trials if trials is not None else defaults[n], seed).results)
    return rep


def verify_rank_table(M: QPolymatroid) -> SuiteReport:
    rep = SuiteReport()
    axioms_report(M, "axioms supplied table", rep)
    return rep
