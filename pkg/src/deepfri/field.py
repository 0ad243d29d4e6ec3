"""Arithmetic in GF(2^n), 1 <= n <= 32.

Elements are bit-packed integers: bit ``j`` is the coefficient of ``X^j``
in the polynomial representative modulo the field's fixed irreducible
modulus. Bulk code works on these raw ints through a :class:`GF` instance;
:class:`FieldElement` wraps an int together with its field for the public,
operator-friendly API.

The modulus table is a convention of this package: one primitive polynomial
per degree (low-weight where possible), fixed so that transcripts are
reproducible across builds.
"""
from __future__ import annotations

import functools
import random
from dataclasses import dataclass

import numpy as np

from .errors import FieldMismatch, InversionOfZero

# One primitive (hence irreducible) polynomial per degree, as bit masks.
MODULI = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0x13,
    5: 0x25,
    6: 0x43,
    7: 0x83,
    8: 0x11D,
    9: 0x211,
    10: 0x409,
    11: 0x805,
    12: 0x1053,
    13: 0x201B,
    14: 0x4443,
    15: 0x8003,
    16: 0x1100B,
    17: 0x20009,
    18: 0x40081,
    19: 0x80027,
    20: 0x100009,
    21: 0x200005,
    22: 0x400003,
    23: 0x800021,
    24: 0x1000087,
    25: 0x2000009,
    26: 0x4000047,
    27: 0x8000027,
    28: 0x10000009,
    29: 0x20000005,
    30: 0x40800007,
    31: 0x80000009,
    32: 0x100400007,
}

MAX_N = 32
# Log/exp tables are built for fields up to this size.
TABLE_MAX_N = 16


def clmul(a: int, b: int) -> int:
    """Carryless product of two bit-packed GF(2)[X] polynomials."""
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def poly_mod2(a: int, m: int) -> int:
    """Remainder of ``a`` modulo ``m`` in GF(2)[X]."""
    dm = m.bit_length()
    while a.bit_length() >= dm:
        a ^= m << (a.bit_length() - dm)
    return a


def _gcd2(a: int, b: int) -> int:
    while b:
        a, b = b, poly_mod2(a, b)
    return a


def _prime_factors(k: int) -> list[int]:
    out, p = [], 2
    while p * p <= k:
        if k % p == 0:
            out.append(p)
            while k % p == 0:
                k //= p
        p += 1
    if k > 1:
        out.append(k)
    return out


def is_irreducible(m: int) -> bool:
    """Rabin's irreducibility test for a GF(2)[X] polynomial of degree n."""
    n = m.bit_length() - 1
    if n < 1:
        return False

    x_mod = poly_mod2(0b10, m)

    def frob(times):
        x = x_mod
        for _ in range(times):
            x = poly_mod2(clmul(x, x), m)
        return x

    if frob(n) != x_mod:
        return False
    for p in _prime_factors(n):
        if _gcd2(m, frob(n // p) ^ x_mod) != 1:
            return False
    return True


class GF:
    """The field GF(2^n) with the built-in modulus for ``n``.

    Use :func:`field` to obtain the shared instance for a given ``n``.
    """

    def __init__(self, n: int, modulus: int | None = None):
        if not 1 <= n <= MAX_N:
            raise ValueError(f"extension degree n={n} outside 1..{MAX_N}")
        modulus = MODULI[n] if modulus is None else modulus
        if modulus.bit_length() - 1 != n or not is_irreducible(modulus):
            raise ValueError(f"modulus {modulus:#x} is not irreducible of degree {n}")
        self.n = n
        self.modulus = modulus
        self.order = 1 << n
        self.mask = self.order - 1
        self.hex_digits = (n + 3) // 4
        self._exp = None
        self._log = None
        if n <= TABLE_MAX_N:
            self._build_tables()

    def _build_tables(self):
        q1 = self.order - 1
        exp = [0] * (2 * q1 + 1)
        log = [0] * self.order
        g = self._find_generator()
        x = 1
        for i in range(q1):
            exp[i] = x
            log[x] = i
            x = self._slow_mul(x, g)
        for i in range(q1, 2 * q1 + 1):
            exp[i] = exp[i - q1]
        self._exp = exp
        self._log = log
        self._exp_np = np.array(exp, dtype=np.int64)
        self._log_np = np.array(log, dtype=np.int64)

    def _find_generator(self) -> int:
        q1 = self.order - 1
        if q1 == 1:
            return 1
        factors = _prime_factors(q1)
        for g in range(2, self.order):
            if all(self._slow_pow(g, q1 // p) != 1 for p in factors):
                return g
        raise AssertionError("no generator")  # unreachable for a field

    def _slow_mul(self, a: int, b: int) -> int:
        return poly_mod2(clmul(a, b), self.modulus)

    def _slow_pow(self, a: int, k: int) -> int:
        r = 1
        while k:
            if k & 1:
                r = self._slow_mul(r, a)
            a = self._slow_mul(a, a)
            k >>= 1
        return r

    # -- scalar arithmetic on raw ints -------------------------------------

    @staticmethod
    def add(a: int, b: int) -> int:
        return a ^ b

    sub = add

    def mul(self, a: int, b: int) -> int:
        if not a or not b:
            return 0
        if self._log is not None:
            return self._exp[self._log[a] + self._log[b]]
        return self._slow_mul(a, b)

    def sqr(self, a: int) -> int:
        return self.mul(a, a)

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            return self.pow(self.inv(a), -k)
        if a == 0:
            return 1 if k == 0 else 0
        if self._log is not None:
            return self._exp[(self._log[a] * k) % (self.order - 1)]
        r = 1
        while k:
            if k & 1:
                r = self._slow_mul(r, a)
            a = self._slow_mul(a, a)
            k >>= 1
        return r

    def inv(self, a: int) -> int:
        if a == 0:
            raise InversionOfZero("inverse of zero in GF(2^%d)" % self.n)
        if self._log is not None:
            return self._exp[(self.order - 1) - self._log[a]]
        return self.pow(a, self.order - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def trace(self, a: int) -> int:
        """Absolute trace sum_{i<n} a^(2^i); always 0 or 1."""
        t, x = 0, a
        for _ in range(self.n):
            t ^= x
            x = self.mul(x, x)
        return t

    def generator(self) -> int:
        """A fixed generator of the multiplicative group."""
        if self._exp is not None:
            return self._exp[1]
        return self._find_generator()

    # -- vectorised helpers -------------------------------------------------

    def mul_vec(self, a, b):
        """Elementwise product of int arrays (broadcasting)."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self._log is not None:
            out = self._exp_np[self._log_np[a] + self._log_np[b]]
            return np.where((a == 0) | (b == 0), 0, out)
        fn = np.frompyfunc(self.mul, 2, 1)
        return fn(a, b).astype(np.int64)

    # -- misc ---------------------------------------------------------------

    def __call__(self, bits: int) -> "FieldElement":
        return FieldElement(self, bits)

    def random(self, rng: random.Random) -> int:
        return rng.getrandbits(self.n)

    def random_nonzero(self, rng: random.Random) -> int:
        while True:
            a = rng.getrandbits(self.n)
            if a:
                return a

    def to_hex(self, a: int) -> str:
        return format(a, f"0{self.hex_digits}x")

    def from_hex(self, s: str) -> int:
        v = int(s, 16)
        if v >> self.n:
            raise ValueError(f"{s!r} is not an element of GF(2^{self.n})")
        return v

    def __eq__(self, other):
        return isinstance(other, GF) and (self.n, self.modulus) == (other.n, other.modulus)

    def __hash__(self):
        return hash((self.n, self.modulus))

    def __repr__(self):
        return f"GF(2^{self.n}, modulus={self.modulus:#x})"


@functools.lru_cache(maxsize=None)
def field(n: int) -> GF:
    """Shared :class:`GF` instance with the built-in modulus for ``n``."""
    return GF(n)


@dataclass(frozen=True)
class FieldElement:
    field: GF
    bits: int

    def __post_init__(self):
        if not 0 <= self.bits < self.field.order:
            raise ValueError(f"{self.bits:#x} out of range for {self.field}")

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other.bits
        if isinstance(other, int) and other in (0, 1):
            return other
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.bits ^ b)

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __neg__(self):
        return self

    def __mul__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.mul(self.bits, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.div(self.bits, b))

    def __pow__(self, k: int):
        return FieldElement(self.field, self.field.pow(self.bits, k))

    def inv(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.bits))

    def trace(self) -> "FieldElement":
        return FieldElement(self.field, self.field.trace(self.bits))

    def __bool__(self):
        return self.bits != 0

    def __int__(self):
        return self.bits

    def hex(self) -> str:
        return self.field.to_hex(self.bits)

    def __repr__(self):
        return f"0x{self.hex()}"


def field_arith(a: FieldElement, b: FieldElement | None, op: str, k: int | None = None) -> FieldElement:
    """Dispatch ``op`` in {"add", "mul", "inv", "pow"} on field elements."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inv()
    if op == "pow":
        return a ** k
    raise ValueError(f"unknown op {op!r}")
