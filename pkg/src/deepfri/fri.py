"""Baseline FRI over additive domains: the two-point algebraic hash, the
COMMIT and QUERY phases, and exact acceptance by leaf enumeration."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .channel import Channel
from .domains import FoldMap, Subspace, domain_chain, fold_domain, fold_map_of
from .errors import BadDomainSize, DomainMismatch, MalformedTranscript
from .field import GF, field as get_field
from .poly import Evaluations


class CountingOracle:
    """Read access to an evaluation vector that records which positions were read."""

    def __init__(self, values):
        self.values = values
        self.reads = []

    def __getitem__(self, i):
        self.reads.append(i)
        return self.values[i]

    @property
    def distinct(self):
        return len(set(self.reads))


@dataclass
class PathTrace:
    leaf: int
    failed_round: int | None
    reads: list


@dataclass
class VerifyResult:
    accepted: bool
    paths: list = dc_field(default_factory=list)

    def __bool__(self):
        return self.accepted


def hash_point(fld: GF, v0: int, v1: int, s0: int, alpha: int, x: int) -> int:
    """P(x) for the line P through (s0, v0) and (s0 + alpha, v1)."""
    slope = fld.mul(v0 ^ v1, fld.inv(alpha))
    return v0 ^ fld.mul(slope, x ^ s0)


def line_coeffs(f: Evaluations, q: FoldMap | None = None) -> tuple[Evaluations, Evaluations]:
    """(u*, u) on the folded domain with P_{f,s}(X) = u*(s) + X u(s)."""
    L = f.domain
    q = q or fold_map_of(L)
    image = fold_domain(L, q)
    fld = f.field
    ainv = fld.inv(q.kernel_root)
    us, uu = [], []
    for t in range(image.size):
        s0 = L.element(2 * t)
        v0, v1 = f.values[2 * t], f.values[2 * t + 1]
        slope = fld.mul(v0 ^ v1, ainv)
        uu.append(slope)
        us.append(v0 ^ fld.mul(s0, slope))
    return Evaluations(image, us), Evaluations(image, uu)


def fri_hash(f: Evaluations, x: int, q: FoldMap | None = None) -> Evaluations:
    """H_x[f](s) = P_{f,s}(x), each output point read from its coset pair only."""
    L = f.domain
    if q is not None and (L.dim == 0 or q.kernel_root != L.basis[0]):
        raise DomainMismatch(f"{q!r} is not the fold map of {L!r}")
    us, uu = line_coeffs(f, q)
    mul = f.field.mul
    return Evaluations(us.domain, [a ^ mul(int(x), b) for a, b in zip(us.values, uu.values)])


def majority(values) -> int:
    """Most common value, ties broken towards the smallest element."""
    counts = Counter(values)
    return min(counts, key=lambda v: (-counts[v], v))


@dataclass(frozen=True)
class FriParams:
    domains: tuple
    rate_bits: int

    @property
    def field(self) -> GF:
        return self.domains[0].field

    @property
    def rounds(self) -> int:
        return len(self.domains) - 1

    @property
    def degree_bound(self) -> int:
        return self.domains[0].size >> self.rate_bits

    def folds(self):
        return [fold_map_of(L) for L in self.domains[:-1]]


def make_fri_params(l0: Subspace, rate_bits: int) -> FriParams:
    """|L0| = 2^k, rate 2^-R, r = k - R rounds."""
    k = l0.dim
    if not 0 <= rate_bits <= k:
        raise BadDomainSize(f"rate 2^-{rate_bits} impossible on a domain of size 2^{k}")
    return FriParams(tuple(domain_chain(l0, k - rate_bits)), rate_bits)


@dataclass
class FriTranscript:
    params: FriParams
    layers: list
    challenges: list
    final: int
    seed: int
    tag: str = ""

    def to_json(self) -> dict:
        fld = self.params.field
        return {
            "protocol": "fri",
            "field_n": fld.n,
            "rate_bits": self.params.rate_bits,
            "seed": self.seed,
            "tag": self.tag,
            "layers": [
                {"domain": e.domain.to_json(), "values": [fld.to_hex(v) for v in e.values]}
                for e in self.layers
            ],
            "challenges": [fld.to_hex(x) for x in self.challenges],
            "final": fld.to_hex(self.final),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "FriTranscript":
        try:
            fld = get_field(obj["field_n"])
            layers = [
                Evaluations(Subspace.from_json(fld, l["domain"]), [fld.from_hex(v) for v in l["values"]])
                for l in obj["layers"]
            ]
            params = make_fri_params(layers[0].domain, obj["rate_bits"])
            return cls(
                params,
                layers,
                [fld.from_hex(x) for x in obj["challenges"]],
                fld.from_hex(obj["final"]),
                obj["seed"],
                obj.get("tag", ""),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedTranscript(f"cannot parse FRI transcript: {exc}") from exc


def fri_commit(f0: Evaluations, params: FriParams, channel: Channel) -> FriTranscript:
    """Honest(-fold) prover: every layer is the hash of the previous one,
    C is the majority value of the last layer."""
    if f0.domain != params.domains[0]:
        raise BadDomainSize("input does not live on L^(0)")
    seed, tag = channel.seed, channel.tag
    layers, xs = [f0], []
    for q in params.folds():
        x = channel.element(params.field)
        xs.append(x)
        layers.append(fri_hash(layers[-1], x, q))
    return FriTranscript(params, layers, xs, majority(layers[-1].values), seed, tag)


def _check_structure(t: FriTranscript):
    p = t.params
    if len(t.layers) != p.rounds + 1 or len(t.challenges) != p.rounds:
        raise MalformedTranscript("layer/challenge count does not match the round count")
    for e, L in zip(t.layers, p.domains):
        if e.domain != L:
            raise MalformedTranscript("layer domain does not match the domain chain")
    replay = Channel(t.seed, t.tag)
    if [replay.element(p.field) for _ in range(p.rounds)] != list(t.challenges):
        raise MalformedTranscript("challenges do not replay from the transcript seed")


def _fri_path(t: FriTranscript, leaf: int, oracles) -> int | None:
    """Run one query path from leaf; return the failing round (r = final check) or None."""
    p = t.params
    fld = p.field
    idx = leaf
    for i in range(p.rounds):
        L = p.domains[i]
        j = idx >> 1
        v0, v1 = oracles[i][2 * j], oracles[i][2 * j + 1]
        h = hash_point(fld, v0, v1, L.element(2 * j), L.basis[0], t.challenges[i])
        if h != oracles[i + 1][j]:
            return i
        idx = j
    if oracles[p.rounds][idx] != t.final:
        return p.rounds
    return None


def fri_verify(t: FriTranscript, ell: int, channel: Channel) -> VerifyResult:
    _check_structure(t)
    n0 = t.params.domains[0].size
    paths = []
    for _ in range(ell):
        leaf = channel.below(n0)
        oracles = [CountingOracle(e.values) for e in t.layers]
        failed = _fri_path(t, leaf, oracles)
        paths.append(PathTrace(leaf, failed, [o.reads for o in oracles]))
    return VerifyResult(all(p.failed_round is None for p in paths), paths)


def fri_exact_accept(t: FriTranscript) -> Fraction:
    _check_structure(t)
    vals = [e.values for e in t.layers]
    n0 = len(vals[0])
    good = sum(_fri_path(t, leaf, vals) is None for leaf in range(n0))
    return Fraction(good, n0)
