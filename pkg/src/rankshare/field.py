"""Finite fields F_q with q = p^e <= 256.

Elements are plain integers in ``range(q)``.  For e > 1 an element packs the
coefficients of a polynomial over F_p in base p, little-endian: the integer
``c_0 + c_1 p + ... + c_{e-1} p^{e-1}`` stands for ``c_0 + c_1 x + ...``.
All arithmetic goes through lookup tables built once per field.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import Callable, Sequence

MAX_ORDER = 256


class FieldError(ValueError):
    """Invalid field parameters."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n**0.5) + 1))


# --- polynomials over an abstract base field ---------------------------------
# A polynomial is a tuple of base-field elements, lowest degree first, with no
# trailing zeros (the zero polynomial is ``()``).


@dataclass(frozen=True)
class _Ops:
    add: Callable[[int, int], int]
    sub: Callable[[int, int], int]
    mul: Callable[[int, int], int]
    inv: Callable[[int], int]
    order: int


def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def poly_mul(ops: _Ops, a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] = ops.add(out[i + j], ops.mul(x, y))
    return _trim(out)


def poly_mod(ops: _Ops, a, m):
    """Remainder of a modulo m (m nonzero)."""
    a = list(_trim(a))
    lead_inv = ops.inv(m[-1])
    dm = len(m) - 1
    while len(a) - 1 >= dm and a:
        c = ops.mul(a[-1], lead_inv)
        shift = len(a) - 1 - dm
        for i, y in enumerate(m):
            a[shift + i] = ops.sub(a[shift + i], ops.mul(c, y))
        a = list(_trim(a))
    return tuple(a)


def monic_polynomials(ops: _Ops, degree: int):
    """All monic polynomials of the given degree, in lexicographic order of
    their packed value (lower coefficients vary fastest)."""
    for tail in itertools.product(range(ops.order), repeat=degree):
        yield tuple(reversed(tail)) + (1,)


def is_irreducible(ops: _Ops, f) -> bool:
    """Brute-force factor search: f is irreducible iff no monic polynomial of
    degree 1..deg(f)//2 divides it."""
    f = _trim(f)
    deg = len(f) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for g in monic_polynomials(ops, d):
            if not poly_mod(ops, f, g):
                return False
    return True


def least_irreducible(ops: _Ops, degree: int):
    for f in monic_polynomials(ops, degree):
        if is_irreducible(ops, f):
            return f
    raise FieldError(f"no irreducible polynomial of degree {degree}")  # pragma: no cover


def _prime_ops(p: int) -> _Ops:
    return _Ops(
        add=lambda a, b: (a + b) % p,
        sub=lambda a, b: (a - b) % p,
        mul=lambda a, b: (a * b) % p,
        inv=lambda a: pow(a, p - 2, p),
        order=p,
    )


# --- the field type ----------------------------------------------------------


@dataclass(frozen=True)
class FiniteField:
    """F_q with q = p^e.  Build instances with :func:`field_make`."""

    p: int
    e: int
    modulus: tuple[int, ...]
    add_table: list = field(compare=False, repr=False, default=None)
    mul_table: list = field(compare=False, repr=False, default=None)
    neg_table: list = field(compare=False, repr=False, default=None)
    inv_table: list = field(compare=False, repr=False, default=None)

    @property
    def q(self) -> int:
        return self.p**self.e

    def __repr__(self) -> str:
        if self.e == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.e}, modulus={list(self.modulus)})"

    def elements(self) -> range:
        return range(self.q)

    def add(self, a: int, b: int) -> int:
        return self.add_table[a][b]

    def sub(self, a: int, b: int) -> int:
        return self.add_table[a][self.neg_table[b]]

    def neg(self, a: int) -> int:
        return self.neg_table[a]

    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        return self.inv_table[a]

    def div(self, a: int, b: int) -> int:
        return self.mul_table[a][self.inv(b)]

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        out = 1
        while k:
            if k & 1:
                out = self.mul_table[out][a]
            a = self.mul_table[a][a]
            k >>= 1
        return out

    def to_coeffs(self, a: int) -> tuple[int, ...]:
        """Coefficients of a over F_p, lowest degree first (length e)."""
        out = []
        for _ in range(self.e):
            a, r = divmod(a, self.p)
            out.append(r)
        return tuple(out)

    def from_coeffs(self, coeffs: Sequence[int]) -> int:
        return sum((c % self.p) * self.p**i for i, c in enumerate(coeffs))

    def ops(self) -> _Ops:
        """Arithmetic bundle for polynomial routines over this field."""
        return _Ops(self.add, self.sub, self.mul, self.inv, self.q)


@functools.lru_cache(maxsize=None)
def _build(p: int, e: int, modulus: tuple[int, ...]) -> FiniteField:
    q = p**e
    if e == 1:
        add = [[(a + b) % p for b in range(q)] for a in range(q)]
        mul = [[(a * b) % p for b in range(q)] for a in range(q)]
    else:
        base = _prime_ops(p)

        def unpack(a):
            return tuple((a // p**i) % p for i in range(e))

        def pack(c):
            return sum(x * p**i for i, x in enumerate(c))

        add = [[pack((x + y) % p for x, y in zip(unpack(a), unpack(b))) for b in range(q)] for a in range(q)]
        mul = [[0] * q for _ in range(q)]
        for a in range(q):
            for b in range(a, q):
                r = pack(poly_mod(base, poly_mul(base, _trim(unpack(a)), _trim(unpack(b))), modulus))
                mul[a][b] = mul[b][a] = r
    neg = [next(b for b in range(q) if add[a][b] == 0) for a in range(q)]
    inv = [0] + [next(b for b in range(1, q) if mul[a][b] == 1) for a in range(1, q)]
    return FiniteField(p, e, modulus, add, mul, neg, inv)


def field_make(p: int, e: int = 1, modulus: Sequence[int] | None = None) -> FiniteField:
    """Return F_{p^e}.

    ``modulus`` lists the coefficients of a monic irreducible polynomial of
    degree e over F_p, lowest degree first.  When omitted (and e > 1) the
    least irreducible monic polynomial is used, "least" meaning smallest
    packed integer value.
    """
    if not is_prime(p):
        raise FieldError(f"characteristic {p} is not prime")
    if e < 1:
        raise FieldError(f"extension degree must be >= 1, got {e}")
    if p**e > MAX_ORDER:
        raise FieldError(f"field order {p}^{e} exceeds {MAX_ORDER}")
    base = _prime_ops(p)
    if e == 1:
        return _build(p, 1, (0, 1))
    if modulus is None:
        mod = least_irreducible(base, e)
    else:
        mod = _trim(int(c) % p for c in modulus)
        if len(mod) != e + 1:
            raise FieldError(f"modulus must have degree {e}")
        if mod[-1] != 1:
            inv = base.inv(mod[-1])
            mod = tuple(base.mul(c, inv) for c in mod)
        if not is_irreducible(base, mod):
            raise FieldError(f"modulus {list(mod)} is reducible over F_{p}")
    return _build(p, e, tuple(mod))


def field_of_order(q: int) -> FiniteField:
    """F_q from its order alone (default modulus)."""
    for p in range(2, q + 1):
        if is_prime(p):
            e, r = 0, q
            while r % p == 0:
                r //= p
                e += 1
            if r == 1 and e >= 1:
                return field_make(p, e)
            if q % p == 0:
                break
    raise FieldError(f"{q} is not a prime power")
