"""Finite fields GF(2^w) and Z/p with elements stored as plain ints.

Hot loops work on ints through a :class:`Field` instance; :class:`FieldElem`
is a thin operator-overloading wrapper for interactive use and tests, and
refuses to mix elements of different fields.
"""

from __future__ import annotations

from functools import cached_property

import gmpy2
import numpy as np

from . import _kernels as K
from .errors import CapacityError, ParseError, UnsupportedOperation, UsageError


def _gf2_polymod(a: int, m: int) -> int:
    dm = m.bit_length() - 1
    while a and a.bit_length() - 1 >= dm:
        a ^= m << (a.bit_length() - 1 - dm)
    return a


def _gf2_polymulmod(a: int, b: int, m: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a = _gf2_polymod(a << 1, m)
    return r


def _gf2_polygcd(a: int, b: int) -> int:
    while b:
        a, b = b, _gf2_polymod(a, b)
    return a


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible_gf2(modulus: int) -> bool:
    """Rabin's irreducibility test for a polynomial over GF(2) given as bits."""
    n = modulus.bit_length() - 1
    if n < 1:
        return False

    def x_pow_2k(k: int) -> int:
        t = 2  # the polynomial x
        for _ in range(k):
            t = _gf2_polymulmod(t, t, modulus)
        return t

    if x_pow_2k(n) != _gf2_polymod(2, modulus):
        return False
    for q in _prime_factors(n):
        h = x_pow_2k(n // q) ^ 2
        if _gf2_polygcd(modulus, _gf2_polymod(h, modulus)) != 1:
            return False
    return True


class Field:
    """Common interface; use :class:`GF2Field` or :class:`PrimeField`."""

    kind: str
    order: int
    characteristic: int
    fs: tuple
    zero = 0
    one = 1

    def mul(self, a: int, b: int) -> int:
        return K.mul(self.fs, a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return K.inv(self.fs, a)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        r = 1
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def prod(self, values) -> int:
        r = 1
        for v in values:
            r = self.mul(r, v)
        return r

    def sum(self, values) -> int:
        r = 0
        for v in values:
            r = self.add(r, v)
        return r

    def enumerate_points(self, n: int) -> list[int]:
        """The first n elements in canonical order 0, 1, 2, ..."""
        if n > self.order:
            raise CapacityError(f"requested {n} distinct points from a field of order {self.order}")
        return list(range(n))

    def random_nonzero(self, gen: np.random.Generator) -> int:
        while True:
            v = self.random(gen)
            if v:
                return v

    def check(self, a: int) -> int:
        if not isinstance(a, (int, np.integer)) or not 0 <= a < self.order:
            raise UsageError(f"{a!r} is not an element of {self}")
        return int(a)

    def to_hex(self, a: int) -> str:
        return format(a, "x")

    def from_hex(self, s: str) -> int:
        try:
            v = int(s, 16)
        except ValueError:
            raise ParseError(f"bad field element {s!r}") from None
        if not 0 <= v < self.order:
            raise ParseError(f"field element {s!r} out of range")
        return v

    def elem(self, v: int) -> "FieldElem":
        return FieldElem(self, self.check(v))

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and self.fs == other.fs

    def __hash__(self) -> int:
        return hash(self.fs)


class GF2Field(Field):
    """GF(2^w) modulo an irreducible polynomial given with its leading bit."""

    kind = "gf2"
    characteristic = 2

    def __init__(self, w: int, modulus: int, check: bool = True):
        if not 1 <= w <= 64 or modulus.bit_length() - 1 != w:
            raise UsageError(f"modulus {modulus:#x} does not have degree {w} (1 <= w <= 64)")
        if check and not is_irreducible_gf2(modulus):
            raise UsageError(f"modulus {modulus:#x} is reducible")
        self.w = w
        self.modulus = modulus
        self.order = 1 << w
        self.fs = (0, w, modulus ^ (1 << w), 0)

    def add(self, a: int, b: int) -> int:
        return a ^ b

    sub = add

    def neg(self, a: int) -> int:
        return a

    def sqrt(self, a: int) -> int:
        return K.sqrt2(self.fs, a)

    def random(self, gen: np.random.Generator) -> int:
        return int(gen.bit_generator.random_raw()) & (self.order - 1)

    def random_vector(self, gen: np.random.Generator, n: int) -> list[int]:
        raw = gen.bit_generator.random_raw(n) & np.uint64(self.order - 1)
        return [int(v) for v in raw]

    def header(self) -> str:
        return f"field gf2 {self.w} {self.modulus:x}"

    @cached_property
    def label(self) -> str:
        return f"GF(2^{self.w})"

    def __repr__(self) -> str:
        return f"GF2Field({self.w}, {self.modulus:#x})"


class PrimeField(Field):
    """Z/p for a prime p < 2^63."""

    kind = "prime"

    def __init__(self, p: int):
        if not 2 < p < (1 << 63) or not gmpy2.is_prime(p):
            raise UsageError(f"{p} is not an odd prime below 2^63")
        self.p = p
        self.order = p
        self.characteristic = p
        self.fs = (1, 0, 0, p)

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def neg(self, a: int) -> int:
        return -a % self.p

    def mul(self, a: int, b: int) -> int:
        return a * b % self.p

    def inv(self, a: int) -> int:
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def sqrt(self, a: int) -> int:
        raise UnsupportedOperation("square roots are only provided in characteristic 2")

    def random(self, gen: np.random.Generator) -> int:
        return int(gen.integers(0, self.p))

    def random_vector(self, gen: np.random.Generator, n: int) -> list[int]:
        return [int(v) for v in gen.integers(0, self.p, size=n)]

    def header(self) -> str:
        return f"field prime {self.p}"

    @cached_property
    def label(self) -> str:
        return f"GF({self.p})"

    def __repr__(self) -> str:
        return f"PrimeField({self.p})"


class FieldElem:
    """An element bound to its field, with arithmetic operators."""

    __slots__ = ("field", "value")

    def __init__(self, field: Field, value: int):
        self.field = field
        self.value = value

    def _other(self, other) -> int:
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise UsageError(f"cannot combine elements of {self.field} and {other.field}")
            return other.value
        raise UsageError(f"cannot combine a field element with {type(other).__name__}")

    def __add__(self, other):
        return FieldElem(self.field, self.field.add(self.value, self._other(other)))

    def __sub__(self, other):
        return FieldElem(self.field, self.field.sub(self.value, self._other(other)))

    def __mul__(self, other):
        return FieldElem(self.field, self.field.mul(self.value, self._other(other)))

    def __truediv__(self, other):
        return FieldElem(self.field, self.field.div(self.value, self._other(other)))

    def __neg__(self):
        return FieldElem(self.field, self.field.neg(self.value))

    def __pow__(self, e: int):
        return FieldElem(self.field, self.field.pow(self.value, e))

    def inv(self) -> "FieldElem":
        return FieldElem(self.field, self.field.inv(self.value))

    def sqrt(self) -> "FieldElem":
        return FieldElem(self.field, self.field.sqrt(self.value))

    def __bool__(self) -> bool:
        return self.value != 0

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldElem) and other.field == self.field and other.value == self.value

    def __hash__(self) -> int:
        return hash((self.field.fs, self.value))

    def __repr__(self) -> str:
        return f"{self.field.label}({self.field.to_hex(self.value)})"


GF2_4 = GF2Field(4, 0x13)
GF2_8 = GF2Field(8, 0x11B)
GF2_16 = GF2Field(16, 0x1002B)
GF2_32 = GF2Field(32, 0x10000008D)
GF2_64 = GF2Field(64, (1 << 64) | 0x1B)
P31 = PrimeField((1 << 31) - 1)

DEFAULT_FIELD = GF2_64


def gf2(w: int) -> GF2Field:
    """One of the shipped binary fields."""
    table = {4: GF2_4, 8: GF2_8, 16: GF2_16, 32: GF2_32, 64: GF2_64}
    if w not in table:
        raise UsageError(f"no shipped modulus for GF(2^{w}); construct GF2Field directly")
    return table[w]


def parse_field_header(line: str, lineno: int | None = None) -> Field:
    """Parse ``field gf2 <w> <modulus-hex>`` or ``field prime <p>``."""
    parts = line.split()
    try:
        if len(parts) == 4 and parts[:2] == ["field", "gf2"]:
            return GF2Field(int(parts[2]), int(parts[3], 16))
        if len(parts) == 3 and parts[:2] == ["field", "prime"]:
            return PrimeField(int(parts[2]))
    except (ValueError, UsageError) as exc:
        raise ParseError(f"bad field header: {exc}", lineno) from None
    raise ParseError(f"expected a field header, got {line.strip()!r}", lineno)


def parse_field_name(name: str) -> Field:
    """CLI shorthand: ``gf2:64``, ``gf2:8``, ``prime`` or ``prime:<p>``."""
    kind, _, arg = name.partition(":")
    if kind == "gf2":
        return gf2(int(arg or 64))
    if kind == "prime":
        return PrimeField(int(arg)) if arg else P31
    raise UsageError(f"unknown field {name!r}")
