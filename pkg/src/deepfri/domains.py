"""Affine F2-subspaces of GF(2^n) used as evaluation domains, and the
degree-2 subspace polynomials that fold them in half."""
from __future__ import annotations

from functools import cached_property

from .errors import DimensionNotOne, KernelNotInDomain, LinearDependence, NotInImage
from .field import GF


def _reduce(vec: int, pivots: dict[int, int]) -> int:
    # pivots maps leading bit -> reduced vector with that leading bit
    while vec:
        top = vec.bit_length() - 1
        if top not in pivots:
            return vec
        vec ^= pivots[top]
    return 0


def is_independent(vectors) -> bool:
    """Gaussian elimination over F2 on bit-packed vectors."""
    pivots: dict[int, int] = {}
    for v in vectors:
        r = _reduce(v, pivots)
        if r == 0:
            return False
        pivots[r.bit_length() - 1] = r
    return True


class Subspace:
    """``shift + span_F2(basis)`` with a fixed enumeration order.

    ``element(i) = shift + sum_j bit_j(i) * basis[j]``, so indices ``2t`` and
    ``2t + 1`` always form a coset of ``span{basis[0]}``.
    """

    def __init__(self, field: GF, basis, shift: int = 0):
        basis = tuple(int(b) for b in basis)
        if any(not 0 <= b < field.order for b in basis) or not 0 <= shift < field.order:
            raise ValueError("basis/shift not in field")
        if not is_independent(basis):
            raise LinearDependence("basis vectors are linearly dependent over F2")
        self.field = field
        self.basis = basis
        self.shift = int(shift)

    @classmethod
    def standard(cls, field: GF, dim: int, shift: int = 0) -> "Subspace":
        """The span of 1, X, ..., X^(dim-1) (bit vectors 1, 2, 4, ...)."""
        return cls(field, [1 << j for j in range(dim)], shift)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def size(self) -> int:
        return 1 << len(self.basis)

    def __len__(self):
        return self.size

    def element(self, index: int) -> int:
        x = self.shift
        j = 0
        while index:
            if index & 1:
                x ^= self.basis[j]
            index >>= 1
            j += 1
        return x

    @cached_property
    def elements(self) -> list[int]:
        out = [self.shift]
        for b in self.basis:
            out = out + [x ^ b for x in out]
        return out

    @cached_property
    def _index(self) -> dict[int, int]:
        return {x: i for i, x in enumerate(self.elements)}

    def index_of(self, x: int) -> int:
        try:
            return self._index[x]
        except KeyError:
            raise NotInImage(f"{x:#x} is not in the domain") from None

    def __contains__(self, x: int) -> bool:
        return x in self._index

    def __iter__(self):
        return iter(self.elements)

    def linear_part(self) -> "Subspace":
        return Subspace(self.field, self.basis, 0)

    def in_span(self, x: int) -> bool:
        """Whether ``x`` lies in the linear part span(basis)."""
        pivots: dict[int, int] = {}
        for b in self.basis:
            r = _reduce(b, pivots)
            pivots[r.bit_length() - 1] = r
        return _reduce(x, pivots) == 0

    def disjoint_from(self, other: "Subspace") -> bool:
        small, big = (self, other) if self.size <= other.size else (other, self)
        return not any(x in big for x in small.elements)

    def to_json(self) -> dict:
        f = self.field
        return {"basis": [f.to_hex(b) for b in self.basis], "shift": f.to_hex(self.shift)}

    @classmethod
    def from_json(cls, field: GF, obj: dict) -> "Subspace":
        return cls(field, [field.from_hex(b) for b in obj["basis"]], field.from_hex(obj["shift"]))

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.field == other.field
            and self.basis == other.basis
            and self.shift == other.shift
        )

    def __hash__(self):
        return hash((self.field, self.basis, self.shift))

    def __repr__(self):
        b = ", ".join(f"{x:#x}" for x in self.basis)
        return f"Subspace([{b}], shift={self.shift:#x})"


class FoldMap:
    """q(X) = X (X - alpha) = X^2 + alpha X, the subspace polynomial of {0, alpha}."""

    def __init__(self, field: GF, kernel_root: int):
        if kernel_root == 0:
            raise DimensionNotOne("kernel root must be nonzero")
        self.field = field
        self.kernel_root = kernel_root

    def __call__(self, x: int) -> int:
        return self.field.mul(x, x ^ self.kernel_root)

    def coeffs(self) -> list[int]:
        """Ascending coefficients [0, alpha, 1]."""
        return [0, self.kernel_root, 1]

    def __eq__(self, other):
        return isinstance(other, FoldMap) and (self.field, self.kernel_root) == (
            other.field,
            other.kernel_root,
        )

    def __hash__(self):
        return hash((self.field, self.kernel_root))

    def __repr__(self):
        return f"FoldMap(X^2 + {self.kernel_root:#x} X)"


def subspace_polynomial(l0: Subspace) -> FoldMap:
    if l0.dim != 1 or l0.shift != 0:
        raise DimensionNotOne(f"need a 1-dimensional linear subspace, got {l0!r}")
    return FoldMap(l0.field, l0.basis[0])


def fold_map_of(domain: Subspace) -> FoldMap:
    """The fold map whose kernel is span{basis[0]} of ``domain``."""
    if domain.dim == 0:
        raise DimensionNotOne("cannot fold a single point")
    return FoldMap(domain.field, domain.basis[0])


def fold_domain(domain: Subspace, q: FoldMap) -> Subspace:
    """Image q(domain): basis q(basis[1:]), shift q(shift); element i maps to i >> 1."""
    if domain.dim == 0 or not domain.in_span(q.kernel_root):
        raise KernelNotInDomain(f"{q!r} kernel not in {domain!r}")
    if q.kernel_root != domain.basis[0]:
        raise KernelNotInDomain("fold kernel must be the first basis vector of the domain")
    return Subspace(domain.field, [q(b) for b in domain.basis[1:]], q(domain.shift))


def coset_pair(domain: Subspace, q: FoldMap, s: int) -> tuple[int, int]:
    """The two roots of q(X) - s inside ``domain``, in enumeration order."""
    image = fold_domain(domain, q)
    t = image.index_of(s)
    return domain.element(2 * t), domain.element(2 * t + 1)


def domain_chain(l0: Subspace, rounds: int) -> list[Subspace]:
    """L^(0), ..., L^(rounds), each folded by the span of its first basis vector."""
    if rounds > l0.dim:
        raise ValueError(f"{rounds} rounds need a domain of dimension >= {rounds}")
    chain = [l0]
    for _ in range(rounds):
        chain.append(fold_domain(chain[-1], fold_map_of(chain[-1])))
    return chain
