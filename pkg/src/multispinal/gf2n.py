"""Exact arithmetic in GF(2^n) presented by a primitive polynomial.

Field elements are plain ints: bit i holds the coordinate of alpha^i, so
0 is the zero element, 1 is the multiplicative identity and 2 (= 0b10) is
alpha itself.  Addition is XOR, multiplication by alpha is one feedback
shift register step, and general products are shift-and-add.  The trace
map Tr(x) = x + x^2 + ... + x^(2^(n-1)) is an additive surjection onto
{0, 1}.

A word-sized bitmask supports degrees up to 63; table-backed contexts
(power table, discrete log) are capped at degree 20.

Default primitive polynomials, one per degree (bit k = coefficient of x^k):

    n=2  : x^2 + x + 1                 0x7
    n=3  : x^3 + x + 1                 0xB
    n=4  : x^4 + x + 1                 0x13
    n=5  : x^5 + x^2 + 1               0x25
    n=6  : x^6 + x + 1                 0x43
    n=7  : x^7 + x^3 + 1               0x89
    n=8  : x^8 + x^4 + x^3 + x^2 + 1   0x11D
    n=9  : x^9 + x^4 + 1               0x211
    n=10 : x^10 + x^3 + 1              0x409
    n=11 : x^11 + x^2 + 1              0x805
    n=12 : x^12 + x^6 + x^4 + x + 1    0x1053
    n=13 : x^13 + x^4 + x^3 + x + 1    0x201B
    n=14 : x^14 + x^10 + x^6 + x + 1   0x4443
    n=15 : x^15 + x + 1                0x8003
    n=16 : x^16 + x^12 + x^3 + x + 1   0x1100B
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property

DEFAULT_POLYS: dict[int, int] = {
    2: 0x7,
    3: 0xB,
    4: 0x13,
    5: 0x25,
    6: 0x43,
    7: 0x89,
    8: 0x11D,
    9: 0x211,
    10: 0x409,
    11: 0x805,
    12: 0x1053,
    13: 0x201B,
    14: 0x4443,
    15: 0x8003,
    16: 0x1100B,
}

# Table-backed contexts keep 2^n - 1 powers plus a full trace table in
# memory; beyond this degree use the raw polynomial helpers instead.
MAX_CONTEXT_DEGREE = 20

_TERM_RE = re.compile(r"^(?:1|x|x\^(\d+))$")


@dataclass(frozen=True)
class PrimitivePolynomial:
    """Monic polynomial over GF(2), encoded as a bitmask (bit k = coeff of x^k).

    The class itself only guarantees monic and degree >= 1; primitivity is
    checked by :func:`is_primitive` and enforced by :class:`FieldContext`.
    """

    mask: int

    def __post_init__(self) -> None:
        if self.mask < 2:
            raise ValueError(f"polynomial mask {self.mask:#x} has degree < 1")

    @property
    def degree(self) -> int:
        return self.mask.bit_length() - 1

    @property
    def text(self) -> str:
        terms = []
        for k in range(self.degree, -1, -1):
            if (self.mask >> k) & 1:
                terms.append("1" if k == 0 else ("x" if k == 1 else f"x^{k}"))
        return " + ".join(terms)

    @classmethod
    def parse(cls, spec: str) -> "PrimitivePolynomial":
        """Parse 'x^3+x+1' style text, or a 0x/0b bitmask, or a decimal mask."""
        s = spec.strip().replace(" ", "")
        if not s:
            raise ValueError("empty polynomial")
        if s.lower().startswith("0x"):
            return cls(int(s, 16))
        if s.lower().startswith("0b"):
            return cls(int(s, 2))
        if s.isdigit():
            return cls(int(s, 10))
        mask = 0
        for term in s.lower().split("+"):
            m = _TERM_RE.match(term)
            if not m:
                raise ValueError(f"bad polynomial term {term!r} in {spec!r}")
            if term == "1":
                k = 0
            elif term == "x":
                k = 1
            else:
                k = int(m.group(1))
            mask ^= 1 << k  # repeated terms cancel over GF(2)
        if mask == 0:
            raise ValueError(f"polynomial {spec!r} is zero over GF(2)")
        return cls(mask)


def default_poly(n: int) -> PrimitivePolynomial:
    """Stock primitive polynomial of degree n (n = 2..16)."""
    if n not in DEFAULT_POLYS:
        raise ValueError(f"no default primitive polynomial for degree {n}")
    return PrimitivePolynomial(DEFAULT_POLYS[n])


# -- polynomial arithmetic over GF(2)[x], ints as coefficient masks --


def _pmul(a: int, b: int) -> int:
    """Carry-less product of two GF(2)[x] polynomials."""
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def _pmod(a: int, m: int) -> int:
    """Remainder of a modulo m in GF(2)[x]."""
    dm = m.bit_length()
    while a.bit_length() >= dm:
        a ^= m << (a.bit_length() - dm)
    return a


def _pmulmod(a: int, b: int, m: int) -> int:
    return _pmod(_pmul(a, b), m)


def _ppowmod(a: int, e: int, m: int) -> int:
    r = 1
    a = _pmod(a, m)
    while e:
        if e & 1:
            r = _pmulmod(r, a, m)
        a = _pmulmod(a, a, m)
        e >>= 1
    return r


def _factor(m: int) -> list[int]:
    """Distinct prime factors by trial division."""
    primes = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            primes.append(d)
            while m % d == 0:
                m //= d
        d += 1 if d == 2 else 2
    if m > 1:
        primes.append(m)
    return primes


def _is_irreducible(mask: int) -> bool:
    """Trial reduction by every monic polynomial of degree 1..n//2."""
    n = mask.bit_length() - 1
    if mask & 1 == 0:  # x divides
        return False
    for d in range(1, n // 2 + 1):
        for cand in range(1 << d, 1 << (d + 1)):
            if _pmod(mask, cand) == 0:
                return False
    return True


def is_primitive(poly: PrimitivePolynomial) -> bool:
    """True iff poly is irreducible and its root generates GF(2^n)^*.

    The order check verifies x^((2^n-1)/p) != 1 mod poly for every prime
    p dividing 2^n - 1 (factored by trial division; fine up to n ~ 30).
    Degrees below 2 are rejected outright: the group construction needs
    n >= 2.
    """
    n = poly.degree
    if n < 2:
        raise ValueError(f"degree {n} < 2: primitivity check requires n >= 2")
    if not _is_irreducible(poly.mask):
        return False
    order = (1 << n) - 1
    if _ppowmod(2, order, poly.mask) != 1:
        return False
    for p in _factor(order):
        if _ppowmod(2, order // p, poly.mask) == 1:
            return False
    return True


class FieldContext:
    """GF(2^n) with a fixed primitive polynomial.

    Carries the full power table alpha^0 .. alpha^(2^n - 2), its inverse
    (discrete log) and a lazily built trace table.  Immutable after
    construction; every operation is a pure function of its arguments, so
    a context may be shared freely across threads.

    Raises ValueError if the polynomial is not primitive: every
    downstream construction in this package needs primitivity, so a
    non-primitive input is never silently accepted.
    """

    def __init__(self, poly: PrimitivePolynomial | int | str):
        if isinstance(poly, int):
            poly = PrimitivePolynomial(poly)
        elif isinstance(poly, str):
            poly = PrimitivePolynomial.parse(poly)
        n = poly.degree
        if n < 2:
            raise ValueError(f"field degree {n} < 2 is not supported")
        if n > MAX_CONTEXT_DEGREE:
            raise ValueError(
                f"degree {n} exceeds table cap {MAX_CONTEXT_DEGREE}; "
                "use the polynomial helpers directly"
            )
        if not is_primitive(poly):
            raise ValueError(f"{poly.text} (mask {poly.mask:#x}) is not primitive")
        self.poly = poly
        self.n = n
        self.size = 1 << n
        self.k = self.size - 1       # order of the multiplicative group
        self.q = 1 << (n - 1)        # hyperplane size, half the field
        self._mask = poly.mask
        self._top = 1 << n

        power_table = [1]
        x = 1
        for _ in range(self.k - 1):
            x = self.mul_alpha(x)
            power_table.append(x)
        self.power_table: tuple[int, ...] = tuple(power_table)
        self.discrete_log: dict[int, int] = {v: i for i, v in enumerate(power_table)}
        if len(self.discrete_log) != self.k:
            raise AssertionError("power table entries are not distinct")
        if self.mul_alpha(power_table[-1]) != 1:
            raise AssertionError("alpha^(2^n - 1) != 1")

    # -- element operations -------------------------------------------

    def _check(self, x: int) -> None:
        if not 0 <= x < self.size:
            raise ValueError(f"{x} is not an element of GF(2^{self.n})")

    def add(self, x: int, y: int) -> int:
        """Characteristic-2 sum: coordinate-wise XOR."""
        self._check(x)
        self._check(y)
        return x ^ y

    def mul_alpha(self, x: int) -> int:
        """One feedback-shift-register step: x -> alpha * x."""
        x <<= 1
        if x & self._top:
            x ^= self._mask
        return x

    def mul(self, x: int, y: int) -> int:
        """Field product by shift-and-add; agrees with iterated mul_alpha."""
        self._check(x)
        self._check(y)
        acc = 0
        while y:
            if y & 1:
                acc ^= x
            x = self.mul_alpha(x)
            y >>= 1
        return acc

    def pow_alpha(self, j: int) -> int:
        """alpha^j for any integer j (reduced mod 2^n - 1)."""
        return self.power_table[j % self.k]

    def log(self, x: int) -> int:
        """Discrete log base alpha of a nonzero element."""
        if x == 0:
            raise ValueError("0 has no discrete log")
        return self.discrete_log[x]

    def trace(self, x: int) -> int:
        """Tr(x) = x + x^2 + ... + x^(2^(n-1)), a value in {0, 1}."""
        self._check(x)
        return self.trace_table[x]

    @cached_property
    def trace_table(self) -> tuple[int, ...]:
        table = []
        for x in range(self.size):
            acc = x
            t = x
            for _ in range(self.n - 1):
                t = self.mul(t, t)
                acc ^= t
            if acc not in (0, 1):
                raise AssertionError(f"trace of {x} fell outside the prime field")
            table.append(acc)
        return tuple(table)

    @cached_property
    def trace_of_power(self) -> tuple[int, ...]:
        """Tr(alpha^t) for t = 0 .. 2^n - 2."""
        return tuple(self.trace_table[v] for v in self.power_table)

    # -- whole-field views --------------------------------------------

    def elements(self) -> range:
        return range(self.size)

    def nonzero_elements(self) -> range:
        return range(1, self.size)

    def canonical_elements(self) -> tuple[int, ...]:
        """Row/column element order shared by the inclusion matrix and the
        groupoid membership matrix: [0, alpha^1, ..., alpha^(2^n - 1) = 1].
        """
        return (0,) + tuple(self.power_table[i % self.k] for i in range(1, self.k + 1))

    def joint_kernel_is_trivial(self) -> bool:
        """Exhaustively confirm that only 0 lies in every ker(Tr o phi^j)."""
        tp = self.trace_of_power
        for x in self.nonzero_elements():
            lx = self.discrete_log[x]
            if not any(tp[(lx + j) % self.k] for j in range(self.k)):
                return False
        return True

    def __repr__(self) -> str:
        return f"FieldContext(n={self.n}, poly={self.poly.text!r})"


def field_context(n: int, poly: PrimitivePolynomial | int | str | None = None) -> FieldContext:
    """Context for degree n, using the stock polynomial when none is given."""
    if poly is None:
        return FieldContext(default_poly(n))
    ctx = FieldContext(poly)
    if ctx.n != n:
        raise ValueError(f"polynomial degree {ctx.n} does not match requested n={n}")
    return ctx
