"""Reed-Solomon and general linear codes: distances, exhaustive list
decoding, the Johnson bound, weighted agreement and sigma-robustness.

Every search here is exhaustive and exact. Two enumerations are used and
picked by size:

* the codebook: all ``q^k`` coefficient vectors, where ``k`` is the number of
  free coefficients;
* information sets: every ``k``-subset of positions, interpolated. Any
  codeword agreeing with a word on at least ``k`` positions is the
  interpolant of some ``k``-subset of its agreement set, and any ``k``
  positions can be matched, so the best (weighted, nonnegative weights)
  agreement is always attained by one of these interpolants.
"""
from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import guard
from .domains import Subspace
from .errors import DomainMismatch, EpsOutOfRange, LinearDependence
from .field import GF
from .poly import Evaluations, Polynomial, barycentric, lagrange

SEARCH_LIMIT_BITS = 24
GL_LIMIT_BITS = 20
CHUNK_ROWS = 1 << 15
# max cached codebook entries
CACHE_LIMIT = 1 << 24


@dataclass(frozen=True)
class RsParams:
    field: GF
    domain: Subspace
    degree_bound: int

    def __post_init__(self):
        if not 1 <= self.degree_bound <= self.domain.size:
            raise ValueError(f"degree bound {self.degree_bound} outside 1..{self.domain.size}")
        if self.domain.field != self.field:
            raise DomainMismatch("domain lives in a different field")

    @property
    def rate(self) -> Fraction:
        return Fraction(self.degree_bound, self.domain.size)

    def contains(self, u: Evaluations) -> bool:
        from .poly import interpolate

        return interpolate(u).degree < self.degree_bound


def _values(u) -> list[int]:
    return list(u.values) if isinstance(u, Evaluations) else [int(v) for v in u]


def distance(u: Evaluations, v: Evaluations) -> Fraction:
    if u.domain != v.domain:
        raise DomainMismatch("distance between words on different domains")
    diff = sum(a != b for a, b in zip(u.values, v.values))
    return Fraction(diff, len(u.values))


def weighted_agreement(u: Evaluations, v: Evaluations, eta) -> Fraction:
    if u.domain != v.domain or len(eta) != len(u.values):
        raise DomainMismatch("weighted agreement needs aligned words and weights")
    total = sum((Fraction(w) for a, b, w in zip(u.values, v.values, eta) if a == b), Fraction(0))
    return total / len(u.values)


# -- vectorised search engine ------------------------------------------------


def _inv_vec(field: GF, a):
    a = np.asarray(a, dtype=np.int64)
    if field._log is not None:
        return field._exp_np[(field.order - 1) - field._log_np[a]]
    return np.frompyfunc(field.inv, 1, 1)(a).astype(np.int64)


def _span_chunks(field: GF, rows, chunk_rows: int = CHUNK_ROWS):
    """Yield (coeffs, values) for every combination sum_j c_j rows[j].

    ``rows`` is a (k, n) int array; ``coeffs`` is (m, k) and ``values`` (m, n).
    Coefficient vectors come out in lexicographic order with c_0 slowest.
    """
    rows = np.asarray(rows, dtype=np.int64).reshape(len(rows), -1)
    k, n = rows.shape
    q = field.order
    t = 0
    while t < k and q ** (t + 1) <= max(chunk_rows, q):
        t += 1
    # low table over the last t coefficients
    low_c = np.zeros((1, 0), dtype=np.int64)
    low_v = np.zeros((1, n), dtype=np.int64)
    cs = np.arange(q, dtype=np.int64)
    for j in range(k - t, k):
        add = field.mul_vec(cs[:, None], rows[j][None, :])
        low_v = (low_v[:, None, :] ^ add[None, :, :]).reshape(-1, n)
        low_c = np.concatenate(
            [np.repeat(low_c, q, axis=0), np.tile(cs, len(low_c))[:, None]], axis=1
        )
    for high in itertools.product(range(q), repeat=k - t):
        hv = np.zeros(n, dtype=np.int64)
        for j, c in enumerate(high):
            if c:
                hv ^= field.mul_vec(c, rows[j])
        coeffs = np.concatenate(
            [np.broadcast_to(np.array(high, dtype=np.int64), (len(low_c), k - t)), low_c], axis=1
        )
        yield coeffs, low_v ^ hv


@functools.lru_cache(maxsize=4)
def _subset_basis(field: GF, points: tuple, free: int, fixed: tuple):
    """Lagrange basis values for node sets S + fixed, S ranging over the
    ``free``-subsets of ``points``; returns (S, free basis, fixed basis)."""
    n = len(points)
    X = np.array(points, dtype=np.int64)
    S = np.array(list(itertools.combinations(range(n), free)), dtype=np.int64).reshape(-1, free)
    m = len(S)
    nodes = np.concatenate([X[S], np.broadcast_to(np.array(fixed, dtype=np.int64), (m, len(fixed)))], axis=1)
    k = nodes.shape[1]
    dtype = np.uint16 if field.n <= 16 else np.int64
    bases = []
    for i in range(k):
        num = np.ones((m, n), dtype=np.int64)
        den = np.ones(m, dtype=np.int64)
        for j in range(k):
            if j != i:
                num = field.mul_vec(num, X[None, :] ^ nodes[:, j : j + 1])
                den = field.mul_vec(den, nodes[:, i] ^ nodes[:, j])
        bases.append(field.mul_vec(num, _inv_vec(field, den)[:, None]).astype(dtype))
    return S, bases[:free], bases[free:]


class CodeSearch:
    """Exhaustive search over ``{P : deg P < bound, P(z_j) = b_j}`` evaluated
    on ``points``. With no constraints this is RS[points, bound]."""

    def __init__(self, field: GF, points, bound: int, constraints=()):
        self.field = field
        self.points = tuple(int(p) for p in points)
        self.n = len(self.points)
        self.bound = bound
        self.constraints = tuple((int(z), int(b)) for z, b in constraints)
        self.free = bound - len(self.constraints)
        if self.free < 0:
            raise ValueError("more constraints than coefficients")
        if self.free > self.n:
            raise ValueError("code has more free coefficients than positions")
        pts = set(self.points)
        if any(z in pts for z, _ in self.constraints):
            raise ValueError("constraint points must lie outside the evaluation points")
        self._cb_cache = None

    # size of each enumeration, as log2
    def codebook_bits(self) -> float:
        return self.free * self.field.n

    def subset_bits(self) -> float:
        return math.log2(math.comb(self.n, self.free))

    def _method(self, need_all_below_free: bool = False) -> str:
        cb, sb = self.codebook_bits(), self.subset_bits()
        if need_all_below_free:
            guard.check("rs_codebook_bits", cb, SEARCH_LIMIT_BITS)
            return "codebook"
        if sb < cb:
            guard.check("rs_search_bits", sb, SEARCH_LIMIT_BITS)
            return "subsets"
        guard.check("rs_search_bits", cb, SEARCH_LIMIT_BITS)
        return "codebook"

    def _codebook(self):
        f = self.field
        X = np.array(self.points, dtype=np.int64)
        rows = [np.ones(self.n, dtype=np.int64)]
        for _ in range(1, self.free):
            rows.append(f.mul_vec(rows[-1], X))
        zx = np.ones(self.n, dtype=np.int64)
        for z, _ in self.constraints:
            zx = f.mul_vec(zx, X ^ z)
        if self.constraints:
            zs = [z for z, _ in self.constraints]
            bs = [b for _, b in self.constraints]
            ux = np.array([barycentric(f, zs, bs, x) for x in self.points], dtype=np.int64)
        else:
            ux = np.zeros(self.n, dtype=np.int64)
        if self.free == 0:
            yield ux[None, :]
            return
        for _, vals in _span_chunks(f, np.array(rows)):
            yield f.mul_vec(vals, zx[None, :]) ^ ux if self.constraints else vals

    def _cached_codebook(self):
        if self._cb_cache is not None:
            return self._cb_cache
        if self.field.order ** self.free * self.n > CACHE_LIMIT:
            return self._codebook()
        self._cb_cache = list(self._codebook())
        return self._cb_cache

    def _subsets(self, u):
        f = self.field
        zs = tuple(z for z, _ in self.constraints)
        S, free_b, fixed_b = _subset_basis(f, self.points, self.free, zs)
        for lo in range(0, len(S), CHUNK_ROWS):
            hi = lo + CHUNK_ROWS
            vals = np.zeros((len(S[lo:hi]), self.n), dtype=np.int64)
            for i, basis in enumerate(free_b):
                vals ^= f.mul_vec(u[S[lo:hi, i]][:, None], basis[lo:hi].astype(np.int64))
            for (_, b), basis in zip(self.constraints, fixed_b):
                if b:
                    vals ^= f.mul_vec(b, basis[lo:hi].astype(np.int64))
            yield vals

    def best(self, u, weights=None):
        """Max of sum(weights over agreeing positions) and every distinct
        codeword (as a value tuple) attaining it. ``weights`` are ints >= 0."""
        u = np.array(_values(u), dtype=np.int64)
        w = None if weights is None else np.array(weights, dtype=np.int64)
        chunks = self._cached_codebook() if self._method() == "codebook" else self._subsets(u)
        best_score, winners = -1, set()
        for vals in chunks:
            eq = vals == u[None, :]
            score = eq.sum(axis=1) if w is None else eq.astype(np.int64) @ w
            top = int(score.max())
            if top < best_score:
                continue
            if top > best_score:
                best_score, winners = top, set()
            for row in vals[score == top]:
                winners.add(tuple(int(v) for v in row))
        return best_score, sorted(winners)

    def within(self, u, min_agreement: int):
        """Every codeword agreeing with u on at least ``min_agreement`` positions."""
        u = np.array(_values(u), dtype=np.int64)
        method = self._method(need_all_below_free=min_agreement < self.free)
        chunks = self._cached_codebook() if method == "codebook" else self._subsets(u)
        found = set()
        for vals in chunks:
            score = (vals == u[None, :]).sum(axis=1)
            for row in vals[score >= min_agreement]:
                found.add(tuple(int(v) for v in row))
        return sorted(found)

    def to_polynomial(self, row) -> Polynomial:
        k = min(self.n, self.bound)
        pts = list(self.points[:k]) + [z for z, _ in self.constraints][: self.bound - k]
        vals = list(row[:k]) + [b for _, b in self.constraints][: self.bound - k]
        return lagrange(self.field, pts, vals)


def _canonical(polys):
    return sorted(polys, key=lambda p: p.coeffs)


def _rs_search(params: RsParams) -> CodeSearch:
    return CodeSearch(params.field, params.domain.elements, params.degree_bound)


def list_decode_rs(u: Evaluations, params: RsParams, delta) -> list[Polynomial]:
    """All codewords of degree < d at relative distance strictly below delta."""
    if u.domain != params.domain:
        raise DomainMismatch("word and code live on different domains")
    delta = Fraction(delta)
    n = params.domain.size
    # distance < delta  <=>  agreement > n (1 - delta)
    min_agree = math.floor(n * (1 - delta)) + 1
    if min_agree > n:
        return []
    search = _rs_search(params)
    rows = search.within(u, min_agree)
    return _canonical(search.to_polynomial(r) for r in rows)


def nearest_codewords(u: Evaluations, params: RsParams) -> tuple[Fraction, list[Polynomial]]:
    """Delta(u, RS) and every codeword attaining it."""
    if u.domain != params.domain:
        raise DomainMismatch("word and code live on different domains")
    search = _rs_search(params)
    score, rows = search.best(u)
    return Fraction(params.domain.size - score, params.domain.size), _canonical(
        search.to_polynomial(r) for r in rows
    )


def rs_distance(u: Evaluations, params: RsParams) -> Fraction:
    return nearest_codewords(u, params)[0]


def _integer_weights(eta):
    eta = [Fraction(e) for e in eta]
    den = 1
    for e in eta:
        den = den * e.denominator // math.gcd(den, e.denominator)
    return [int(e * den) for e in eta], den


def max_weighted_agreement(u: Evaluations, degree_bound: int, eta, constraints=()) -> Fraction:
    """max over codewords v of agree_eta(u, v), the code being all polynomials
    of degree < ``degree_bound`` on u's domain with v(z) = b for each (z, b)
    in ``constraints``."""
    if len(eta) != u.domain.size:
        raise DomainMismatch("weights do not match the domain")
    w, den = _integer_weights(eta)
    search = CodeSearch(u.field, u.domain.elements, degree_bound, constraints)
    score, _ = search.best(u, w)
    return Fraction(score, den * u.domain.size)


def _sqrt_bounds(x: Fraction, digits: int = 30) -> tuple[Fraction, Fraction]:
    """Rational lower/upper bounds on sqrt(x); equal when x is a rational square."""
    p, q = x.numerator, x.denominator
    rp, rq = math.isqrt(p), math.isqrt(q)
    if rp * rp == p and rq * rq == q:
        r = Fraction(rp, rq)
        return r, r
    scale = 10**digits
    s = math.isqrt(p * q * scale * scale)
    return Fraction(s, q * scale), Fraction(s + 1, q * scale)


def johnson_bound(rho, eps) -> tuple[Fraction, Fraction]:
    """(1 - sqrt(rho) - eps, 1 / (2 eps sqrt(rho))).

    Exact when rho is a rational square; otherwise sqrt(rho) is bracketed to
    30 decimal digits and each output rounded toward the conservative side
    (smaller radius, larger list cap).
    """
    rho, eps = Fraction(rho), Fraction(eps)
    if not 0 < rho < 1:
        raise ValueError("rho must lie in (0, 1)")
    lo, hi = _sqrt_bounds(rho)
    if eps <= 0 or eps >= 1 - lo:
        raise EpsOutOfRange(f"eps={eps} outside (0, 1 - sqrt(rho))")
    radius = 1 - hi - eps
    if radius <= 0:
        raise EpsOutOfRange(f"eps={eps} leaves no decoding radius")
    return radius, 1 / (2 * eps * lo)


# -- general linear codes ----------------------------------------------------


def _rank(field: GF, rows) -> int:
    m = [list(r) for r in rows]
    rank, cols = 0, len(m[0]) if m else 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = field.inv(m[rank][c])
        m[rank] = [field.mul(inv, v) for v in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][c]:
                f = m[i][c]
                m[i] = [a ^ field.mul(f, b) for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


class GeneralLinearCode:
    """Row space of a k x n generator matrix of rank k."""

    def __init__(self, field: GF, generator):
        self.field = field
        self.generator = [[int(v) for v in row] for row in generator]
        if not self.generator or _rank(field, self.generator) != len(self.generator):
            raise LinearDependence("generator matrix is not of full row rank")

    @property
    def k(self):
        return len(self.generator)

    @property
    def n(self):
        return len(self.generator[0])

    def columns(self):
        return [tuple(row[j] for row in self.generator) for j in range(self.n)]

    def encode(self, message) -> list[int]:
        mul = self.field.mul
        out = [0] * self.n
        for m, row in zip(message, self.generator):
            if m:
                out = [o ^ mul(m, g) for o, g in zip(out, row)]
        return out

    def chunks(self):
        guard.check("gl_codebook_bits", self.k * self.field.n, GL_LIMIT_BITS)
        return _span_chunks(self.field, np.array(self.generator))


def spans(field: GF, vectors, k: int) -> bool:
    return bool(vectors) and _rank(field, vectors) == k


def gl_metrics(code: GeneralLinearCode) -> tuple[int, int]:
    """(minimum distance, sigma) with sigma the least s such that every s-subset
    of generator columns spans F^k."""
    best = code.n
    for coeffs, vals in code.chunks():
        nz = coeffs.any(axis=1)
        if nz.any():
            best = min(best, int((vals[nz] != 0).sum(axis=1).min()))
    cols = code.columns()
    if code.n <= 12:
        sigma = None
        for s in range(code.k, code.n + 1):
            if all(spans(code.field, list(sub), code.k) for sub in itertools.combinations(cols, s)):
                sigma = s
                break
    else:
        sigma = code.n - best + 1
    return best, sigma
