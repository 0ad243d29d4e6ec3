"""DEEP-FRI: FRI where every fold is pinned to a prover-claimed line at an
out-of-domain point z and quotiented by (X - z).

Besides the protocol this module carries the bookkeeping used to analyse it
on small instances: GREEN/RED colouring of the folding forest, the leaf-path
weights eta and theta, and the weighted agreements alpha and beta.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .channel import Channel
from .codes import max_weighted_agreement, nearest_codewords, RsParams
from .domains import Subspace, domain_chain, fold_map_of
from .errors import BadDomainSize, MalformedTranscript
from .field import GF, field as get_field
from .fri import CountingOracle, PathTrace, VerifyResult, fri_hash, hash_point, line_coeffs, majority
from .poly import Evaluations, Polynomial, encode, out_of_domain_eval, quotient_single


def degree_schedule(d0: int) -> list[int]:
    """d, ceil(d/2) - 1, ... until the bound drops to 1 or below."""
    if d0 < 1:
        raise ValueError("degree bound must be at least 1")
    out = [d0]
    while out[-1] > 1:
        d = out[-1]
        out.append((d + 1) // 2 - 1)
    return out


def full_schedule_degree(rounds: int) -> int:
    """3 * 2^r - 2, the bound whose schedule ends exactly at 1."""
    return 3 * 2**rounds - 2


@dataclass(frozen=True)
class DeepFriParams:
    domains: tuple
    degrees: tuple

    @property
    def field(self) -> GF:
        return self.domains[0].field

    @property
    def rounds(self) -> int:
        return len(self.domains) - 1

    @property
    def rate(self) -> Fraction:
        return Fraction(self.degrees[0], self.domains[0].size)


def make_deep_params(l0: Subspace, d0: int) -> DeepFriParams:
    degrees = degree_schedule(d0)
    r = len(degrees) - 1
    if d0 > l0.size or r > l0.dim:
        raise BadDomainSize(f"degree {d0} needs {r} folds; domain has size {l0.size}")
    return DeepFriParams(tuple(domain_chain(l0, r)), tuple(degrees))


@dataclass
class RoundRecord:
    z: int
    line: tuple
    x: int
    retries: int = 0

    def value(self, fld: GF) -> int:
        """B(x) = b0 + b1 x."""
        return self.line[0] ^ fld.mul(self.line[1], self.x)


@dataclass
class DeepFriTranscript:
    params: DeepFriParams
    layers: list
    rounds: list
    final: int
    seed: int
    tag: str = ""

    def to_json(self) -> dict:
        fld = self.params.field
        hx = fld.to_hex
        return {
            "protocol": "deep-fri",
            "field_n": fld.n,
            "degree": self.params.degrees[0],
            "seed": self.seed,
            "tag": self.tag,
            "base_domain": self.params.domains[0].to_json(),
            "layers": [
                None
                if e is None
                else {"domain": e.domain.to_json(), "values": [hx(v) for v in e.values]}
                for e in self.layers
            ],
            "rounds": [
                {"z": hx(r.z), "line": [hx(r.line[0]), hx(r.line[1])], "x": hx(r.x), "retries": r.retries}
                for r in self.rounds
            ],
            "final": hx(self.final),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "DeepFriTranscript":
        try:
            fld = get_field(obj["field_n"])
            l0 = Subspace.from_json(fld, obj["base_domain"])
            params = make_deep_params(l0, obj["degree"])
            layers = [
                None
                if l is None
                else Evaluations(Subspace.from_json(fld, l["domain"]), [fld.from_hex(v) for v in l["values"]])
                for l in obj["layers"]
            ]
            rounds = [
                RoundRecord(
                    fld.from_hex(r["z"]),
                    (fld.from_hex(r["line"][0]), fld.from_hex(r["line"][1])),
                    fld.from_hex(r["x"]),
                    int(r["retries"]),
                )
                for r in obj["rounds"]
            ]
            return cls(params, layers, rounds, fld.from_hex(obj["final"]), obj["seed"], obj.get("tag", ""))
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise MalformedTranscript(f"cannot parse DEEP-FRI transcript: {exc}") from exc


def sample_outside(channel: Channel, fld: GF, avoid) -> tuple[int, int]:
    """Draw field elements until one falls outside ``avoid``; return it and the retry count."""
    retries = 0
    while True:
        z = channel.element(fld)
        if z not in avoid:
            return z, retries
        retries += 1


# -- provers -----------------------------------------------------------------


class HonestProver:
    """The prescribed prover; run on a far input it is the honest-fold adversary."""

    name = "honest"

    def start(self, f0: Evaluations, params: DeepFriParams):
        pass

    def line(self, i: int, f: Evaluations, z: int) -> tuple[int, int]:
        us, uu = line_coeffs(f)
        return out_of_domain_eval(us, z), out_of_domain_eval(uu, z)

    def next_layer(self, i: int, f: Evaluations, z: int, line, x: int) -> Evaluations:
        fld = f.field
        return quotient_single(fri_hash(f, x), z, line[0] ^ fld.mul(line[1], x))

    def final(self, f: Evaluations) -> int:
        return majority(f.values)


def fold_polynomial(p: Polynomial, alpha: int) -> tuple[Polynomial, Polynomial]:
    """(A, B) with p(X) = A(q(X)) + X B(q(X)) for q = X^2 + alpha X."""
    fld = p.field
    q = Polynomial(fld, [0, alpha, 1])
    a, b = [], []
    rest = p
    while not rest.is_zero():
        rest, r = divmod(rest, q)
        c = list(r.coeffs) + [0, 0]
        a.append(c[0])
        b.append(c[1])
    return Polynomial(fld, a), Polynomial(fld, b)


class NearestCodewordProver:
    """Commits to the folds of a fixed codeword close to f0.

    The codeword is decoded from f0 by exhaustive search unless supplied.
    Every later layer is then an exact codeword, so the only failing queries
    are those whose first coset pair touches a position where f0 differs.
    """

    name = "nearest-codeword"

    def __init__(self, codeword: Polynomial | None = None):
        self.codeword = codeword

    def start(self, f0: Evaluations, params: DeepFriParams):
        if self.codeword is None:
            _, best = nearest_codewords(f0, RsParams(params.field, params.domains[0], params.degrees[0]))
            self.codeword = best[0]
        self.params = params
        self.current = self.codeword

    def line(self, i, f, z):
        self._ab = fold_polynomial(self.current, self.params.domains[i].basis[0])
        a, b = self._ab
        return a.evaluate(z), b.evaluate(z)

    def next_layer(self, i, f, z, line, x):
        a, b = self._ab
        fld = self.params.field
        target = a + b.scale(x) + (line[0] ^ fld.mul(line[1], x))
        self.current = target.exact_div(Polynomial(fld, [z, 1]))
        return encode(self.current, self.params.domains[i + 1])

    def final(self, f):
        return self.current.coeffs[0] if self.current.coeffs else 0


ADVERSARIES = {"honest": HonestProver, "honest-fold": HonestProver, "nearest-codeword": NearestCodewordProver}


def deep_commit(f0: Evaluations, params: DeepFriParams, channel: Channel, prover=None) -> DeepFriTranscript:
    if f0.domain != params.domains[0]:
        raise BadDomainSize("input does not live on L^(0)")
    prover = prover or HonestProver()
    prover.start(f0, params)
    seed, tag = channel.seed, channel.tag
    fld = params.field
    layers, rounds = [f0], []
    f = f0
    for i in range(params.rounds):
        z, retries = sample_outside(channel, fld, params.domains[i + 1])
        line = tuple(prover.line(i, f, z))
        x = channel.element(fld)
        f = prover.next_layer(i, f, z, line, x)
        layers.append(f)
        rounds.append(RoundRecord(z, line, x, retries))
    return DeepFriTranscript(params, layers, rounds, prover.final(f), seed, tag)


# -- verification ------------------------------------------------------------


def _check_structure(t: DeepFriTranscript, has_base: bool):
    p = t.params
    if len(t.layers) != p.rounds + 1 or len(t.rounds) != p.rounds:
        raise MalformedTranscript("layer/round count does not match the degree schedule")
    for i, (e, L) in enumerate(zip(t.layers, p.domains)):
        if e is None and i == 0 and has_base:
            continue
        if e is None or e.domain != L:
            raise MalformedTranscript(f"layer {i} missing or on the wrong domain")
    replay = Channel(t.seed, t.tag)
    for i, rec in enumerate(t.rounds):
        z, retries = sample_outside(replay, p.field, p.domains[i + 1])
        x = replay.element(p.field)
        if (z, retries, x) != (rec.z, rec.retries, rec.x):
            raise MalformedTranscript(f"round {i} challenges do not replay from the seed")


def round_test(t: DeepFriTranscript, i: int, j: int, lower, upper) -> bool:
    """The QUERY identity of round i at s = L^(i+1)[j]."""
    p = t.params
    fld = p.field
    L = p.domains[i]
    rec = t.rounds[i]
    v0, v1 = lower[2 * j], lower[2 * j + 1]
    h = hash_point(fld, v0, v1, L.element(2 * j), L.basis[0], rec.x)
    s = p.domains[i + 1].element(j)
    return h == fld.mul(upper[j], s ^ rec.z) ^ rec.value(fld)


def _deep_path(t: DeepFriTranscript, leaf: int, oracles) -> int | None:
    idx = leaf
    for i in range(t.params.rounds):
        j = idx >> 1
        if not round_test(t, i, j, oracles[i], oracles[i + 1]):
            return i
        idx = j
    if oracles[-1][idx] != t.final:
        return t.params.rounds
    return None


def deep_verify(t: DeepFriTranscript, ell: int, channel: Channel, base_oracle=None) -> VerifyResult:
    """ell query repetitions. ``base_oracle`` (indexable) replaces layer 0,
    e.g. a virtual quotient computed on demand."""
    _check_structure(t, base_oracle is not None)
    n0 = t.params.domains[0].size
    paths = []
    for _ in range(ell):
        leaf = channel.below(n0)
        oracles = [CountingOracle(e.values) for e in t.layers[1:]]
        base = base_oracle if base_oracle is not None else CountingOracle(t.layers[0].values)
        if hasattr(base, "reads"):
            base.reads = []
        failed = _deep_path(t, leaf, [base] + oracles)
        reads = [list(getattr(base, "reads", []))] + [o.reads for o in oracles]
        paths.append(PathTrace(leaf, failed, reads))
    return VerifyResult(all(p.failed_round is None for p in paths), paths)


def _layer_values(t: DeepFriTranscript, base=None) -> list:
    vals = [e.values if e is not None else None for e in t.layers]
    if base is not None:
        vals[0] = [base[i] for i in range(t.params.domains[0].size)]
    return vals


def deep_exact_accept(t: DeepFriTranscript, base=None) -> Fraction:
    """Single-repetition acceptance probability over all starting leaves."""
    _check_structure(t, base is not None)
    vals = _layer_values(t, base)
    n0 = len(vals[0])
    good = sum(_deep_path(t, leaf, vals) is None for leaf in range(n0))
    return Fraction(good, n0)


@dataclass
class Instrumentation:
    green: list  # green[i][idx] for idx in L^(i)
    eta: list
    theta: list  # theta[0] is None
    alpha: list
    beta: list  # beta[0] is None
    p_accept: Fraction = Fraction(0)
    failing: list = dc_field(default_factory=list)  # E^(i+1) as index sets


def round_instrumentation(t: DeepFriTranscript, base=None, weights_only: bool = False) -> Instrumentation:
    """Colouring, eta/theta and (unless ``weights_only``) alpha/beta by exhaustive search."""
    _check_structure(t, base is not None)
    p = t.params
    fld = p.field
    vals = _layer_values(t, base)
    r = p.rounds
    tests = [[round_test(t, i, j, vals[i], vals[i + 1]) for j in range(p.domains[i + 1].size)] for i in range(r)]
    green = [[tests[i][idx >> 1] for idx in range(p.domains[i].size)] for i in range(r)]
    green.append([v == t.final for v in vals[r]])

    one = Fraction(1)
    eta = [[one] * p.domains[0].size]
    theta = [None]
    failing = []
    for i in range(r):
        prev = eta[-1]
        th = [(prev[2 * j] + prev[2 * j + 1]) / 2 for j in range(p.domains[i + 1].size)]
        bad = {j for j, ok in enumerate(tests[i]) if not ok}
        theta.append(th)
        failing.append(bad)
        eta.append([Fraction(0) if j in bad else w for j, w in enumerate(th)])
    p_accept = sum(
        (w for w, v in zip(eta[r], vals[r]) if v == t.final), Fraction(0)
    ) / p.domains[r].size

    alpha, beta = [], [None]
    if not weights_only:
        for i in range(r + 1):
            e = Evaluations(p.domains[i], vals[i])
            alpha.append(max_weighted_agreement(e, p.degrees[i], eta[i]))
        for i in range(r):
            rec = t.rounds[i]
            h = fri_hash(Evaluations(p.domains[i], vals[i]), rec.x)
            beta.append(
                max_weighted_agreement(h, p.degrees[i + 1] + 1, theta[i + 1], [(rec.z, rec.value(fld))])
            )
    return Instrumentation(green, eta, theta, alpha, beta, p_accept, failing)


# -- error formulas ----------------------------------------------------------


@dataclass(frozen=True)
class SoundnessTerms:
    delta_star: float
    nu_star: float
    err_commit: float
    err_query: float
    total: float


def deep_fri_soundness(n: int, d0: int, q: int, rounds: int, delta: float, eps: float, list_size: float, ell: int = 1) -> SoundnessTerms:
    """delta* = delta - 2 r eps, nu* = 2 L* (d/q + eps)^(1/3) + 4 / (eps^2 q),
    err_COMMIT = r nu*, err_QUERY = (1 - delta* + log2(n) eps)^ell."""
    delta_star = delta - 2 * rounds * eps
    nu = 2 * list_size * (d0 / q + eps) ** (1 / 3) + 4 / (eps * eps * q)
    commit = rounds * nu
    query = min(1.0, 1 - delta_star + math.log2(n) * eps) ** ell
    return SoundnessTerms(delta_star, nu, commit, query, commit + query)


def johnson_preset(n: int, d0: int, q: int, delta0: float) -> dict:
    """delta = min(delta0, 1 - sqrt(rho) - q^(-1/13)), eps = q^(-6/13) and the
    Johnson list cap at that radius."""
    rho = d0 / n
    slack = q ** (-1 / 13)
    delta = min(delta0, 1 - math.sqrt(rho) - slack)
    return {
        "rho": rho,
        "delta": delta,
        "eps": q ** (-6 / 13),
        "list_size": 1 / (2 * slack * math.sqrt(rho)),
    }
