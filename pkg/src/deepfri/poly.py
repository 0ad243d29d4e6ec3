"""Dense polynomials over GF(2^n), evaluation vectors on subspaces, and the
quotient maps used to pin a function to claimed out-of-domain values."""
from __future__ import annotations

import functools
import math

from .domains import Subspace
from .errors import (
    DomainMismatch,
    DuplicatePoint,
    EmptyDomain,
    FieldMismatch,
    NonDivisible,
    QuotientPointInDomain,
)
from .field import GF, FieldElement

# degree of the zero polynomial
NEG_INF = -math.inf


def _trim(coeffs) -> tuple:
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


class Polynomial:
    """Ascending coefficients (raw field ints), trailing zeros trimmed."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: GF, coeffs=()):
        self.field = field
        self.coeffs = _trim(int(c) for c in coeffs)

    @classmethod
    def zero(cls, field):
        return cls(field)

    @classmethod
    def constant(cls, field, c):
        return cls(field, [c])

    @classmethod
    def x(cls, field):
        return cls(field, [0, 1])

    @classmethod
    def monomial(cls, field, k, c=1):
        return cls(field, [0] * k + [c])

    @classmethod
    def from_roots(cls, field, roots):
        """prod (X - r)."""
        out = [1]
        for r in roots:
            nxt = [0] * (len(out) + 1)
            for i, c in enumerate(out):
                nxt[i + 1] ^= c
                nxt[i] ^= field.mul(c, r)
            out = nxt
        return cls(field, out)

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self):
        return not self.coeffs

    def lead(self):
        return self.coeffs[-1] if self.coeffs else 0

    def __call__(self, x):
        if isinstance(x, FieldElement):
            return FieldElement(self.field, self.evaluate(x.bits))
        return self.evaluate(x)

    def evaluate(self, x: int) -> int:
        mul = self.field.mul
        acc = 0
        for c in reversed(self.coeffs):
            acc = mul(acc, x) ^ c
        return acc

    def _check(self, other):
        if isinstance(other, int):
            return Polynomial.constant(self.field, other)
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")
        return other

    def __add__(self, other):
        other = self._check(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] ^= c
        return Polynomial(self.field, out)

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __neg__(self):
        return self

    def scale(self, c: int) -> "Polynomial":
        mul = self.field.mul
        return Polynomial(self.field, [mul(c, a) for a in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        other = self._check(other)
        if self.is_zero() or other.is_zero():
            return Polynomial(self.field)
        mul = self.field.mul
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] ^= mul(a, b)
        return Polynomial(self.field, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Polynomial.constant(self.field, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __divmod__(self, other):
        other = self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        f = self.field
        rem = list(self.coeffs)
        dd = len(other.coeffs) - 1
        inv_lead = f.inv(other.lead())
        if len(rem) - 1 < dd:
            return Polynomial(f), self
        quo = [0] * (len(rem) - dd)
        for k in range(len(rem) - 1, dd - 1, -1):
            c = rem[k]
            if c:
                t = f.mul(c, inv_lead)
                quo[k - dd] = t
                for j, b in enumerate(other.coeffs):
                    rem[k - dd + j] ^= f.mul(t, b)
        return Polynomial(f, quo), Polynomial(f, rem[:dd])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> "Polynomial":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise NonDivisible("nonzero remainder in polynomial division")
        return q

    def monic(self):
        if self.is_zero():
            return self
        return self.scale(self.field.inv(self.lead()))

    def compose(self, other: "Polynomial") -> "Polynomial":
        acc = Polynomial(self.field)
        for c in reversed(self.coeffs):
            acc = acc * other + c
        return acc

    def scale_input(self, m: int) -> "Polynomial":
        """X -> m X."""
        f = self.field
        out, p = [], 1
        for c in self.coeffs:
            out.append(f.mul(c, p))
            p = f.mul(p, m)
        return Polynomial(f, out)

    def elements(self) -> list[FieldElement]:
        return [FieldElement(self.field, c) for c in self.coeffs]

    def to_hex(self) -> list[str]:
        return [self.field.to_hex(c) for c in self.coeffs]

    @classmethod
    def from_hex(cls, field, items):
        return cls(field, [field.from_hex(h) for h in items])

    def __eq__(self, other):
        if isinstance(other, int):
            other = Polynomial.constant(self.field, other)
        return isinstance(other, Polynomial) and self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __repr__(self):
        if not self.coeffs:
            return "Polynomial(0)"
        terms = [f"{c:#x}*X^{i}" for i, c in enumerate(self.coeffs) if c]
        return "Polynomial(" + " + ".join(terms) + ")"


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_lcm(a: Polynomial, b: Polynomial) -> Polynomial:
    if a.is_zero() or b.is_zero():
        return Polynomial(a.field)
    return (a * b).exact_div(poly_gcd(a, b)).monic()


class Evaluations:
    """Values of a function on ``domain``, aligned with its enumeration."""

    __slots__ = ("domain", "values")

    def __init__(self, domain: Subspace, values):
        values = [int(v) for v in values]
        if len(values) != domain.size:
            raise DomainMismatch(f"{len(values)} values for a domain of size {domain.size}")
        self.domain = domain
        self.values = values

    @property
    def field(self) -> GF:
        return self.domain.field

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def __iter__(self):
        return iter(self.values)

    def at(self, x: int) -> int:
        return self.values[self.domain.index_of(x)]

    def items(self):
        return zip(self.domain.elements, self.values)

    def _same(self, other):
        if self.domain != other.domain:
            raise DomainMismatch("evaluations live on different domains")

    def __add__(self, other):
        self._same(other)
        return Evaluations(self.domain, [a ^ b for a, b in zip(self.values, other.values)])

    __sub__ = __add__

    def scale(self, c: int) -> "Evaluations":
        mul = self.field.mul
        return Evaluations(self.domain, [mul(c, v) for v in self.values])

    def replace(self, index: int, value: int) -> "Evaluations":
        vals = list(self.values)
        vals[index] = value
        return Evaluations(self.domain, vals)

    def to_json(self) -> dict:
        fld = self.field
        return {"field_n": fld.n, "domain": self.domain.to_json(), "values": [fld.to_hex(v) for v in self.values]}

    @classmethod
    def from_json(cls, obj: dict) -> "Evaluations":
        from .field import field as get_field

        fld = get_field(int(obj["field_n"]))
        return cls(Subspace.from_json(fld, obj["domain"]), [fld.from_hex(v) for v in obj["values"]])

    def __eq__(self, other):
        return isinstance(other, Evaluations) and self.domain == other.domain and self.values == other.values

    def __hash__(self):
        return hash((self.domain, tuple(self.values)))

    def __repr__(self):
        return f"Evaluations({self.domain!r}, {[hex(v) for v in self.values]})"


@functools.lru_cache(maxsize=64)
def _bary_weights(points: tuple, field: GF) -> tuple:
    """w_i = 1 / prod_{j != i} (x_i - x_j)."""
    mul = field.mul
    out = []
    for i, xi in enumerate(points):
        d = 1
        for j, xj in enumerate(points):
            if j != i:
                d = mul(d, xi ^ xj)
        out.append(field.inv(d))
    return tuple(out)


def _check_distinct(points):
    if len(set(points)) != len(points):
        raise DuplicatePoint("interpolation points must be distinct")


def lagrange(field: GF, points, values) -> Polynomial:
    """Interpolant through (points[i], values[i]) in O(n^2)."""
    points = tuple(int(p) for p in points)
    if not points:
        raise EmptyDomain("no points to interpolate")
    _check_distinct(points)
    mul = field.mul
    m = Polynomial.from_roots(field, points).coeffs
    w = _bary_weights(points, field)
    n = len(points)
    out = [0] * n
    for xi, vi, wi in zip(points, values, w):
        c = mul(int(vi), wi)
        if not c:
            continue
        # synthetic division of m by (X - xi)
        carry = 0
        quo = [0] * n
        for k in range(n, 0, -1):
            carry = m[k] ^ mul(carry, xi) if k < n else m[k]
            quo[k - 1] = carry
        for k in range(n):
            out[k] ^= mul(c, quo[k])
    return Polynomial(field, out)


def interpolate(e: Evaluations) -> Polynomial:
    return lagrange(e.field, e.domain.elements, e.values)


def encode(p: Polynomial, domain: Subspace) -> Evaluations:
    if p.field != domain.field:
        raise FieldMismatch(f"{p.field} vs {domain.field}")
    return Evaluations(domain, [p.evaluate(x) for x in domain.elements])


def barycentric(field: GF, points, values, z: int) -> int:
    """Interpolant of (points, values) evaluated at z in O(n) given cached weights."""
    points = tuple(points)
    mul = field.mul
    for xi, vi in zip(points, values):
        if xi == z:
            return int(vi)
    w = _bary_weights(points, field)
    # L(z) = prod (z - x_j), then f(z) = L(z) * sum w_i v_i / (z - x_i)
    lz = 1
    acc = 0
    for xi, vi, wi in zip(points, values, w):
        d = z ^ xi
        lz = mul(lz, d)
        if vi:
            acc ^= mul(mul(wi, int(vi)), field.inv(d))
    return mul(lz, acc)


def out_of_domain_eval(e: Evaluations, z) -> int:
    z = int(z)
    return barycentric(e.field, e.domain.elements, e.values, z)


def quotient_single(f: Evaluations, z, b) -> Evaluations:
    """(f(y) - b) / (y - z) over f's domain."""
    z, b = int(z), int(b)
    if z in f.domain:
        raise QuotientPointInDomain(f"{z:#x} lies in the domain")
    fld = f.field
    return Evaluations(
        f.domain,
        [fld.mul(v ^ b, fld.inv(y ^ z)) for y, v in zip(f.domain.elements, f.values)],
    )


def quotient_multi(f: Evaluations, answers: dict) -> Evaluations:
    """(f(y) - U(y)) / Z(y) with U the interpolant of ``answers`` and
    Z = prod (y - z_j)."""
    pts = [int(p) for p in answers]
    vals = [int(answers[p]) for p in answers]
    if not pts:
        return f
    _check_distinct(pts)
    for p in pts:
        if p in f.domain:
            raise QuotientPointInDomain(f"{p:#x} lies in the domain")
    fld = f.field
    mul = fld.mul
    out = []
    for y, v in zip(f.domain.elements, f.values):
        z_y = 1
        for p in pts:
            z_y = mul(z_y, y ^ p)
        out.append(mul(v ^ barycentric(fld, pts, vals, y), fld.inv(z_y)))
    return Evaluations(f.domain, out)
