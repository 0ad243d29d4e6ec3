import pytest
from hypothesis import given, strategies as st

from deepfri.domains import (
    FoldMap,
    Subspace,
    coset_pair,
    domain_chain,
    fold_domain,
    fold_map_of,
    subspace_polynomial,
)
from deepfri.errors import DimensionNotOne, KernelNotInDomain, LinearDependence, NotInImage
from deepfri.field import field
from deepfri.presets import PRESETS

F16 = field(4)
A = 0b0110  # an arbitrary element a


def test_enumeration_order():
    L = Subspace(F16, [1, A], shift=8)
    assert L.elements == [8, 9, 8 ^ A, 9 ^ A]
    assert L.size == 4 and L.index_of(9 ^ A) == 3
    with pytest.raises(NotInImage):
        L.index_of(0)


def test_dependent_basis_rejected():
    with pytest.raises(LinearDependence):
        Subspace(F16, [3, 5, 6])


def test_subspace_polynomial_examples():
    q = subspace_polynomial(Subspace(F16, [1]))
    assert q.coeffs() == [0, 1, 1]
    assert subspace_polynomial(Subspace(F16, [A])).coeffs() == [0, A, 1]
    with pytest.raises(DimensionNotOne):
        subspace_polynomial(Subspace(F16, [1, 2]))
    with pytest.raises(DimensionNotOne):
        subspace_polynomial(Subspace(F16, [1], shift=2))


def test_fold_map_is_linear_exhaustive():
    for alpha in range(1, 16):
        q = FoldMap(F16, alpha)
        for x in range(16):
            for y in range(16):
                assert q(x ^ y) == q(x) ^ q(y)


def test_fold_domain_examples():
    q = FoldMap(F16, 1)
    L = Subspace(F16, [1, A])
    image = {q(x) for x in L.elements}
    assert image == {0, F16.mul(A, A) ^ A}
    assert set(fold_domain(L, q).elements) == image
    assert fold_domain(Subspace(F16, [1]), q).elements == [0]


def test_fold_domain_rejects_foreign_kernel():
    with pytest.raises(KernelNotInDomain):
        fold_domain(Subspace(F16, [2, 4]), FoldMap(F16, 1))


def test_coset_pair_examples():
    q = FoldMap(F16, 1)
    assert coset_pair(Subspace(F16, [1, 2]), q, 0) == (0, 1)
    a2 = F16.mul(A, A)
    qa = FoldMap(F16, A)
    L = Subspace(F16, [A, a2])
    assert coset_pair(L, qa, qa(a2)) == (a2, a2 ^ A)
    with pytest.raises(NotInImage):
        coset_pair(L, qa, 1 if 1 not in fold_domain(L, qa) else 3)


@given(st.integers(1, 7), st.integers(0, 255), st.data())
def test_coset_pair_roundtrip(dim, shift, data):
    F = field(8)
    L = Subspace.standard(F, dim, shift & ~((1 << dim) - 1))
    q = fold_map_of(L)
    y = data.draw(st.sampled_from(L.elements))
    s0, s1 = coset_pair(L, q, q(y))
    assert y in (s0, s1) and s1 == s0 ^ L.basis[0]
    assert q(s0) == q(s1) == q(y)


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_preset_chains_halve(name):
    L0 = PRESETS[name].domain()
    chain = domain_chain(L0, L0.dim)
    assert [L.dim for L in chain] == list(range(L0.dim, -1, -1))
    for L, nxt in zip(chain, chain[1:]):
        q = fold_map_of(L)
        # element i of L maps to element i >> 1 of the image
        assert [q(x) for x in L.elements] == [nxt.element(i >> 1) for i in range(L.size)]


def test_json_roundtrip_and_disjointness():
    F = field(8)
    L = Subspace(F, [3, 0x40], shift=0x81)
    assert Subspace.from_json(F, L.to_json()) == L
    assert L.to_json() == {"basis": ["03", "40"], "shift": "81"}
    assert Subspace.standard(F, 3).disjoint_from(Subspace.standard(F, 3, 8))
    assert not Subspace.standard(F, 3).disjoint_from(Subspace.standard(F, 4))
