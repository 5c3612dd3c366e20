"""The coset secret-sharing protocol on a rank-metric code.

The dealer picks X in C with G_{P0} X = S; a coalition V <= P holds G_V X.
Generators G_V are the canonical RREF bases, so they are public and need no
transmission.  Randomness enters only through ``deal``'s seed, mixed with
splitmix64 and reduced modulo the size of the solution coset.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .codes import DEFAULT_MAX_CODEWORDS, RankMetricCode, _generator_map_rows, _guard, image_dim, induced_rank
from .linalg import DimensionMismatch, Mat, Subspace, combine, nullspace, row_basis, solve, span_sum

MASK64 = (1 << 64) - 1


class SchemeError(ValueError):
    pass


def splitmix64(seed: int) -> int:
    """One step of the splitmix64 generator: state += golden gamma, then mix."""
    z = (seed + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def _check_holder(C: RankMetricCode, V: Subspace):
    if V.n != C.n or V.field != C.field:
        raise DimensionMismatch(f"{V} is not a subspace of F_{C.q}^{C.n}")


def _map(C: RankMetricCode, V: Subspace):
    """Rows of the map c -> flatten(G_V X_c), one row per basis codeword."""
    return _generator_map_rows(C, V.rows)


def _left_kernel(F, rows, k: int):
    """Basis of {c : c A = 0} for A with k rows."""
    if not rows or not rows[0]:
        return tuple(tuple(int(i == j) for j in range(k)) for i in range(k))
    return nullspace(F, list(zip(*rows)), k)


def apply_generator(V: Subspace, X: Mat) -> Mat:
    """G_V X, with G_V the canonical basis of V."""
    F = X.field
    return Mat(F, tuple(combine(F, g, X.rows, X.ncols) for g in V.rows), X.ncols)


@dataclass(frozen=True)
class Share:
    holder: Subspace
    value: Mat

    def to_json(self) -> dict:
        return {"holder": [list(r) for r in self.holder.rows], "value": self.value.tolist()}


@dataclass(frozen=True)
class SchemeInstance:
    code: RankMetricCode
    dealer: Subspace
    players: Subspace
    X: Mat
    secret: Mat
    seed: int = 0

    def to_json(self) -> dict:
        return {"X": self.X.tolist(), "secret": self.secret.tolist(), "seed": self.seed}


def secret_space_dim(C: RankMetricCode, P0: Subspace) -> int:
    """dim G_{P0} C over F_q."""
    return image_dim(C, P0)


def _solve_for(C: RankMetricCode, V: Subspace, value: Mat):
    """A particular coefficient vector c with G_V X_c = value, or None."""
    if value.shape != (V.dim, C.m):
        raise SchemeError(f"value of shape {value.shape}, expected {(V.dim, C.m)}")
    if V.dim == 0 or C.dim == 0:
        return (0,) * C.dim if value.is_zero() else None
    sol = solve(C.field, _map(C, V), [value.flatten()])
    return None if sol is None else sol[0]


def _validate_dealer(C: RankMetricCode, P0: Subspace, P: Subspace):
    from .port import PortError, check_complementary

    try:
        check_complementary(P0, P)
    except PortError as exc:
        raise SchemeError(str(exc)) from None
    _check_holder(C, P0)
    if secret_space_dim(C, P0) == 0:
        raise SchemeError("degenerate dealer: every codeword vanishes on P0")


def solution_coset(C: RankMetricCode, P0: Subspace, S: Mat):
    """(particular coefficients, kernel basis) for {X in C : G_{P0} X = S}."""
    c0 = _solve_for(C, P0, S)
    if c0 is None:
        raise SchemeError("secret is not in G_{P0} C")
    return c0, _left_kernel(C.field, _map(C, P0), C.dim)


def deal_index(C: RankMetricCode, P0: Subspace, P: Subspace, S: Mat, index: int, seed: int = 0) -> SchemeInstance:
    """The index-th element (base-q digits over the kernel basis) of the solution coset."""
    _validate_dealer(C, P0, P)
    c0, K = solution_coset(C, P0, S)
    F = C.field
    digits = []
    for _ in K:
        index, d = divmod(index, F.q)
        digits.append(d)
    shift = combine(F, digits, K, C.dim) if K else (0,) * C.dim
    coeffs = tuple(F.add(a, b) for a, b in zip(c0, shift))
    return SchemeInstance(C, P0, P, C.codeword(coeffs), S, seed)


def coset_size(C: RankMetricCode, P0: Subspace) -> int:
    return C.q ** (C.dim - secret_space_dim(C, P0))


def deal(C: RankMetricCode, P0: Subspace, P: Subspace, S: Mat, seed: int = 0) -> SchemeInstance:
    """Uniformly seeded X in C with G_{P0} X = S.

    X = particular solution + the element of {Z in C : G_{P0} Z = 0} indexed
    by splitmix64(seed) mod q^t, t the kernel dimension.
    """
    _validate_dealer(C, P0, P)
    return deal_index(C, P0, P, S, splitmix64(seed) % coset_size(C, P0), seed)


def share(inst: SchemeInstance, V: Subspace) -> Share:
    if not inst.players.contains(V):
        raise SchemeError(f"{V} is not inside the player space")
    return Share(V, apply_generator(V, inst.X))


def player_shares(inst: SchemeInstance) -> list[Share]:
    return [share(inst, p) for p in player_points(inst.players)]


def player_points(P: Subspace) -> tuple[Subspace, ...]:
    from .access import lattice_of

    return tuple(V for V in lattice_of(P) if V.dim == 1)


def player_count(P: Subspace | int, q: int | None = None) -> int:
    """(q^{dim P} - 1)/(q - 1) one-dimensional subspaces."""
    if isinstance(P, Subspace):
        d, q = P.dim, P.field.q if q is None else q
    else:
        d = P
    return (q**d - 1) // (q - 1)


@dataclass(frozen=True)
class OmegaSet:
    """The candidate secrets base + span(directions), as dim P0 x m matrices."""

    base: Mat
    directions: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return self.base.field.q ** len(self.directions)

    def __len__(self) -> int:
        return self.size

    def __iter__(self) -> Iterator[Mat]:
        F, (r, m) = self.base.field, self.base.shape
        flat = self.base.flatten()
        for c in itertools.product(range(F.q), repeat=len(self.directions)):
            v = combine(F, c, self.directions, r * m) if self.directions else (0,) * (r * m)
            yield Mat.unflatten(F, tuple(F.add(a, b) for a, b in zip(flat, v)), r, m)

    def __contains__(self, S: Mat) -> bool:
        if S.shape != self.base.shape:
            return False
        F = S.field
        diff = tuple(F.sub(a, b) for a, b in zip(S.flatten(), self.base.flatten()))
        if not any(diff):
            return True
        return bool(self.directions) and solve(F, self.directions, [diff]) is not None

    def secrets(self) -> frozenset[Mat]:
        return frozenset(self)


def omega(C: RankMetricCode, P0: Subspace, V: Subspace, value: Mat) -> OmegaSet:
    """{G_{P0} Y : Y in C, G_V Y = value}, by linear solving."""
    _check_holder(C, V)
    _check_holder(C, P0)
    c = _solve_for(C, V, value)
    if c is None:
        raise SchemeError("inconsistent share: no codeword matches it")
    F = C.field
    base = apply_generator(P0, C.codeword(c))
    K = _left_kernel(F, _map(C, V), C.dim) if C.dim else ()
    A0 = _map(C, P0)
    width = P0.dim * C.m
    dirs = row_basis(F, [combine(F, k, A0, width) for k in K], width) if K and width else ()
    return OmegaSet(base, dirs)


def omega_scan(C: RankMetricCode, P0: Subspace, V: Subspace, value: Mat, limit: int = DEFAULT_MAX_CODEWORDS):
    """The same set by scanning every codeword."""
    out = {apply_generator(P0, Y) for Y in C.codewords(limit) if apply_generator(V, Y) == value}
    if not out:
        raise SchemeError("inconsistent share: no codeword matches it")
    return frozenset(out)


def pool_rows(F, n: int, m: int, rows, vals) -> tuple[Subspace, Mat]:
    """(V, G_V X) from known products x X (vals) for vectors x (rows).

    V is the span of ``rows``; contradictory values raise SchemeError.
    """
    rows = [tuple(r) for r in rows]
    V = Subspace.span(F, rows, n) if rows else Subspace.zero(F, n)
    if V.dim == 0:
        return V, Mat(F, (), m)
    basis_rows, basis_vals = [], []
    for r, v in zip(rows, vals):
        sol = solve(F, basis_rows, [r]) if basis_rows else None
        if sol is None:
            basis_rows.append(r)
            basis_vals.append(tuple(v))
        elif combine(F, sol[0], basis_vals, m) != tuple(v):
            raise SchemeError("inconsistent shares")
    coeffs = solve(F, basis_rows, list(V.rows))
    return V, Mat(F, tuple(combine(F, c, basis_vals, m) for c in coeffs), m)


def coalition_value(shares: Sequence[Share], F, n: int, m: int) -> tuple[Subspace, Mat]:
    """Pool shares into (V, G_V X) for V the sum of the holders."""
    rows = [r for s in shares for r in s.holder.rows]
    vals = [r for s in shares for r in s.value.rows]
    return pool_rows(F, n, m, rows, vals)


def reconstruct(C: RankMetricCode, P0: Subspace, V: Subspace, value: Mat) -> tuple[Mat | None, int]:
    """(secret, 1) when the coalition pins it down, else (None, candidate count)."""
    om = omega(C, P0, V, value)
    return (om.base if om.size == 1 else None), om.size


def dealer_conditional_dim(C: RankMetricCode, P0: Subspace, V: Subspace) -> int:
    """m * rho(P0 | V) = dim G_{P0+V} C - dim G_V C."""
    return image_dim(C, span_sum(P0, V)) - image_dim(C, V)


def guess_probability(C: RankMetricCode, P0: Subspace, V: Subspace) -> Fraction:
    """q^{-m rho(P0|V)}."""
    return Fraction(1, C.q ** dealer_conditional_dim(C, P0, V))


# --- entropies ---------------------------------------------------------------


@dataclass(frozen=True)
class CosetVariable:
    """Z_V: a uniform codeword seen through X -> G_V X, i.e. on C / C(V^⊥)."""

    code: RankMetricCode
    conditioning: Subspace
    distribution: dict

    @property
    def support_size(self) -> int:
        return len(self.distribution)


def _entropy(probs: Iterable[Fraction]) -> float:
    return -sum(float(p) * math.log2(p) for p in probs if p)


def coset_variable(C: RankMetricCode, V: Subspace, limit: int = DEFAULT_MAX_CODEWORDS) -> CosetVariable:
    _check_holder(C, V)
    _guard(C, limit)
    counts = Counter(apply_generator(V, X).flatten() for X in C.codewords(limit))
    total = C.q**C.dim
    return CosetVariable(C, V, {k: Fraction(c, total) for k, c in sorted(counts.items())})


def entropy(Z: CosetVariable) -> float:
    """Shannon entropy in bits, from the exact table."""
    return _entropy(Z.distribution.values())


def joint_entropy(C: RankMetricCode, spaces: Sequence[Subspace], limit: int = DEFAULT_MAX_CODEWORDS) -> float:
    for V in spaces:
        _check_holder(C, V)
    _guard(C, limit)
    counts = Counter(tuple(apply_generator(V, X).flatten() for V in spaces) for X in C.codewords(limit))
    total = C.q**C.dim
    return _entropy(Fraction(c, total) for c in counts.values())


def conditional_entropy(C: RankMetricCode, W: Subspace, V: Subspace, limit: int = DEFAULT_MAX_CODEWORDS) -> float:
    """H(Z_W | Z_V) = H(Z_W, Z_V) - H(Z_V)."""
    return joint_entropy(C, [W, V], limit) - joint_entropy(C, [V], limit)


def predicted_entropy(C: RankMetricCode, V: Subspace) -> float:
    """m log2(q) rho_C(V)."""
    return C.m * math.log2(C.q) * float(induced_rank(C, V))


class ProjectionTable:
    """Per-subspace outcome labels of every codeword, for bulk entropy checks."""

    def __init__(self, C: RankMetricCode, limit: int = DEFAULT_MAX_CODEWORDS):
        _guard(C, limit)
        self.code = C
        self.words = list(C.codewords(limit))
        self._labels: dict[Subspace, tuple[int, ...]] = {}

    def labels(self, V: Subspace) -> tuple[int, ...]:
        lab = self._labels.get(V)
        if lab is None:
            ids: dict = {}
            lab = tuple(ids.setdefault(apply_generator(V, X).flatten(), len(ids)) for X in self.words)
            self._labels[V] = lab
        return lab

    def entropy(self, *spaces: Subspace) -> float:
        total = len(self.words)
        counts = Counter(zip(*(self.labels(V) for V in spaces))) if spaces else Counter({(): total})
        return _entropy(Fraction(c, total) for c in counts.values())


def entropy_str(x: float) -> str:
    """Fixed 12-digit decimal rendering used in reports."""
    s = f"{x:.12f}"
    return "0.000000000000" if s == "-0.000000000000" else s
