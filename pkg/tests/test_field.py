import random

import pytest
from hypothesis import given, strategies as st

from deepfri.errors import FieldMismatch, InversionOfZero
from deepfri.field import GF, MODULI, FieldElement, field, field_arith, is_irreducible


def naive_mul(a, b, n, modulus):
    # schoolbook: shift-and-add with reduction at every step
    r = 0
    for _ in range(n):
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a >> n:
            a ^= modulus
    return r


def elems(n):
    return st.integers(0, (1 << n) - 1)


def test_small_examples(f16):
    a, b = f16(0x3), f16(0x5)
    assert field_arith(a, b, "add") == f16(0x6)
    assert field_arith(f16(2), f16(2), "mul") == f16(4)
    assert f16.modulus == 0b10011


def test_inverse_exhaustive_up_to_8():
    for n in range(1, 9):
        F = field(n)
        for a in range(1, F.order):
            assert F.mul(a, F.inv(a)) == 1


def test_inverse_of_zero(f16):
    with pytest.raises(InversionOfZero):
        f16.inv(0)
    with pytest.raises(InversionOfZero):
        f16(0).inv()


def test_mismatched_fields():
    with pytest.raises(FieldMismatch):
        field(4)(1) + field(5)(1)


def test_moduli_irreducible():
    assert all(is_irreducible(m) for m in MODULI.values())
    assert not is_irreducible(0b101)  # (X+1)^2
    with pytest.raises(ValueError):
        GF(4, 0b10001)


@pytest.mark.parametrize("n", [3, 4, 8, 13, 16, 20, 32])
def test_mul_matches_schoolbook(n):
    F = field(n)
    r = random.Random(n)
    for _ in range(300):
        a, b = F.random(r), F.random(r)
        assert F.mul(a, b) == naive_mul(a, b, n, F.modulus)


@given(elems(16), elems(16), elems(16))
def test_field_axioms(a, b, c):
    F = field(16)
    assert F.mul(a, b ^ c) == F.mul(a, b) ^ F.mul(a, c)
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.sqr(a ^ b) == F.sqr(a) ^ F.sqr(b)


@given(elems(24), elems(24))
def test_large_field_inverse_and_frobenius(a, b):
    F = field(24)
    if a:
        assert F.mul(a, F.inv(a)) == 1
    assert F.sqr(a ^ b) == F.sqr(a) ^ F.sqr(b)


@given(elems(11), st.integers(-50, 50))
def test_pow_matches_repeated_mul(a, k):
    F = field(11)
    if a == 0 and k < 0:
        return
    base = a if k >= 0 else F.inv(a)
    acc = 1
    for _ in range(abs(k)):
        acc = F.mul(acc, base)
    assert F.pow(a, k) == acc


def test_trace_gf4():
    F = field(2)
    assert F.trace(0b10) == 1
    assert F.trace(0) == 0


@pytest.mark.parametrize("n", range(1, 9))
def test_trace_kernel_is_half(n):
    F = field(n)
    for beta in range(1, F.order):
        zeros = sum(F.trace(F.mul(beta, y)) == 0 for y in range(F.order))
        assert zeros == 1 << (n - 1)


@given(elems(10), elems(10))
def test_trace_linear_and_binary(a, b):
    F = field(10)
    assert F.trace(a) in (0, 1)
    assert F.trace(a ^ b) == F.trace(a) ^ F.trace(b)


def test_hex_roundtrip(f16):
    assert f16.to_hex(0xA) == "a"
    assert field(9).to_hex(5) == "005"
    assert f16.from_hex("0c") == 12
    with pytest.raises(ValueError):
        f16.from_hex("1f")
    assert repr(FieldElement(f16, 10)) == "0xa"


def test_generator_has_full_order():
    F = field(8)
    g = F.generator()
    seen = {F.pow(g, k) for k in range(F.order - 1)}
    assert len(seen) == F.order - 1


def test_mul_vec_agrees_with_scalar(f16):
    import numpy as np

    a = np.arange(16)
    out = f16.mul_vec(a[:, None], a[None, :])
    assert all(out[i, j] == f16.mul(i, j) for i in range(16) for j in range(16))
    F = field(20)
    v = F.mul_vec([3, 0, 99], [5, 7, 0])
    assert list(v) == [F.mul(3, 5), 0, 0]
