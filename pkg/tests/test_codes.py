import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from deepfri.codes import (
    GeneralLinearCode,
    RsParams,
    gl_metrics,
    johnson_bound,
    list_decode_rs,
    max_weighted_agreement,
    nearest_codewords,
    rs_distance,
    distance,
    weighted_agreement,
)
from deepfri.domains import Subspace
from deepfri.errors import DomainMismatch, EpsOutOfRange, LinearDependence, SearchSpaceTooLarge
from deepfri.field import field
from deepfri.poly import Evaluations, Polynomial, encode
from oracles import brute_distance, brute_list, horner

F16 = field(4)
D16 = Subspace.standard(F16, 4)
D8 = Subspace.standard(F16, 3)


def test_distance_examples():
    u = Evaluations(D8, range(8))
    assert distance(u, u) == 0
    assert distance(u, Evaluations(D8, [v ^ 1 for v in range(8)])) == 1
    v = u.replace(0, 9).replace(3, 9).replace(7, 1)
    assert distance(u, v) == Fraction(3, 8)
    with pytest.raises(DomainMismatch):
        distance(u, Evaluations(D16, [0] * 16))


words4 = st.lists(st.integers(0, 15), min_size=4, max_size=4)


@given(words4, words4, words4)
def test_distance_is_metric(a, b, c):
    D = Subspace.standard(F16, 2)
    u, v, w = (Evaluations(D, x) for x in (a, b, c))
    assert distance(u, v) == distance(v, u)
    assert (distance(u, v) == 0) == (a == b)
    assert distance(u, w) <= distance(u, v) + distance(v, w)


def test_list_decode_one_flip():
    params = RsParams(F16, D16, 2)
    u = encode(Polynomial.x(F16), D16).replace(5, 0)
    got = list_decode_rs(u, params, Fraction(1, 4))
    assert got == [Polynomial.x(F16)]
    assert [tuple(p.coeffs) for p in got] == brute_list(F16, D16.elements, u.values, 2, Fraction(1, 4))


def test_list_decode_trivial(rng):
    params = RsParams(F16, D8, 3)
    P = Polynomial(F16, [3, 0, 7])
    u = encode(P, D8)
    assert P in list_decode_rs(u, params, Fraction(1, 8))
    assert list_decode_rs(u, params, 0) == []


def test_list_decode_matches_oracle(rng):
    params = RsParams(F16, D8, 2)
    for _ in range(25):
        u = Evaluations(D8, [rng.randrange(16) for _ in range(8)])
        for delta in (Fraction(1, 2), Fraction(3, 4), Fraction(7, 8)):
            got = [tuple(p.coeffs) for p in list_decode_rs(u, params, delta)]
            assert got == brute_list(F16, D8.elements, u.values, 2, delta)
        dist, near = nearest_codewords(u, params)
        assert dist == brute_distance(F16, D8.elements, u.values, 2)
        assert all(distance(encode(p, D8), u) == dist for p in near)


def test_list_size_within_johnson_cap():
    rng = random.Random(5)
    params = RsParams(F16, D16, 4)
    for eps in (Fraction(1, 10), Fraction(1, 5)):
        radius, cap = johnson_bound(params.rate, eps)
        for _ in range(40):
            u = Evaluations(D16, [rng.randrange(16) for _ in range(16)])
            assert len(list_decode_rs(u, params, radius)) <= cap


def test_johnson_bound_examples():
    assert johnson_bound(Fraction(1, 4), Fraction(1, 10)) == (Fraction(2, 5), Fraction(10))
    with pytest.raises(EpsOutOfRange):
        johnson_bound(Fraction(1, 4), Fraction(1, 2))
    with pytest.raises(EpsOutOfRange):
        johnson_bound(Fraction(1, 4), 0)


def test_johnson_bound_irrational_is_conservative():
    radius, cap = johnson_bound(Fraction(1, 8), Fraction(1, 10))
    exact = 1 - (1 / 8) ** 0.5 - 0.1
    assert radius <= Fraction(exact) and abs(float(radius) - exact) < 1e-12
    assert cap >= Fraction(1 / (0.2 * (1 / 8) ** 0.5)) - Fraction(1, 10**12)


def test_weighted_agreement_examples(rng):
    u = Evaluations(D8, [rng.randrange(16) for _ in range(8)])
    v = Evaluations(D8, [rng.randrange(16) for _ in range(8)])
    assert weighted_agreement(u, v, [1] * 8) == 1 - distance(u, v)
    assert weighted_agreement(u, v, [0] * 8) == 0
    eta = [Fraction(i, 7) for i in range(8)]
    assert weighted_agreement(u, u, eta) == sum(eta) / 8
    with pytest.raises(DomainMismatch):
        weighted_agreement(u, v, [1] * 7)


def test_max_weighted_agreement_matches_enumeration(rng):
    for _ in range(10):
        u = Evaluations(D8, [rng.randrange(16) for _ in range(8)])
        eta = [Fraction(rng.randrange(4), 3) for _ in range(8)]
        want = max(
            sum(e for e, a, b in zip(eta, (horner(F16, c, x) for x in D8.elements), u.values) if a == b) / 8
            for c in itertools.product(range(16), repeat=2)
        )
        assert max_weighted_agreement(u, 2, eta) == want
        assert max_weighted_agreement(u, 2, [1] * 8) == 1 - rs_distance(u, RsParams(F16, D8, 2))


def test_constrained_agreement(rng):
    u = Evaluations(D8, [rng.randrange(16) for _ in range(8)])
    z, b = 11, 4
    want = max(
        sum(horner(F16, c, x) == w for x, w in zip(D8.elements, u.values))
        for c in itertools.product(range(16), repeat=3)
        if horner(F16, c, z) == b
    )
    assert max_weighted_agreement(u, 3, [1] * 8, [(z, b)]) == Fraction(want, 8)


def _brute_gl(fld, gen):
    k, n = len(gen), len(gen[0])
    best = n
    for m in itertools.product(range(fld.order), repeat=k):
        if any(m):
            w = [0] * n
            for mi, row in zip(m, gen):
                w = [a ^ fld.mul(mi, g) for a, g in zip(w, row)]
            best = min(best, sum(1 for a in w if a))
    return best


def test_gl_parity_code():
    F2 = field(1)
    code = GeneralLinearCode(F2, [[1, 0, 1], [0, 1, 1]])
    assert gl_metrics(code) == (2, 2)


def test_gl_identity():
    for n in (2, 4):
        eye = [[int(i == j) for j in range(n)] for i in range(n)]
        assert gl_metrics(GeneralLinearCode(F16, eye)) == (1, n)


def test_gl_vandermonde():
    pts = D8.elements
    for k in (1, 2, 3):
        gen = [[F16.pow(x, i) for x in pts] for i in range(k)]
        md, sigma = gl_metrics(GeneralLinearCode(F16, gen))
        assert (md, sigma) == (8 - k + 1, k)
        assert md == _brute_gl(F16, gen)


def test_gl_sigma_identity(rng):
    F4 = field(2)
    for _ in range(15):
        while True:
            gen = [[rng.randrange(4) for _ in range(5)] for _ in range(2)]
            try:
                code = GeneralLinearCode(F4, gen)
                break
            except LinearDependence:
                continue
        md, sigma = gl_metrics(code)
        assert md == _brute_gl(F4, gen)
        assert sigma == code.n - md + 1


def test_search_guard(monkeypatch):
    F = field(16)
    D = Subspace.standard(F, 6)
    u = Evaluations(D, range(64))
    monkeypatch.delenv("DEEPFRI_GUARD_OVERRIDE", raising=False)
    with pytest.raises(SearchSpaceTooLarge):
        list_decode_rs(u, RsParams(F, D, 22), Fraction(1, 2))
    with pytest.raises(SearchSpaceTooLarge):
        gl_metrics(GeneralLinearCode(F, [[1, 2], [3, 5]]))
