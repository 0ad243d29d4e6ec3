"""Experiments on lines of words: worst-to-average distance profiles, the
one-and-a-half Johnson bound, trace counterexamples, and out-of-domain
conditioning against pretenders.

All distances are exact rationals obtained by exhaustive search, so every
report is a pure function of its inputs and seed.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .channel import Channel
from .codes import CodeSearch, GeneralLinearCode, RsParams, gl_metrics, list_decode_rs, nearest_codewords, spans
from .deep_fri import DeepFriParams, HonestProver, NearestCodewordProver, deep_commit, deep_exact_accept
from .domains import Subspace
from .errors import DomainMismatch, DomainOverlap, NOutOfRange
from .field import GF, field as get_field
from .poly import Evaluations, Polynomial, encode

ADVERSARY_LINES = ("constant-line", "pretender-pair-line")


def _cell(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple)):
        return " ".join(str(_cell(x)) for x in v)
    return v


@dataclass
class ExperimentReport:
    name: str
    params: dict
    seed: int
    rows: list = dc_field(default_factory=list)
    summary: dict = dc_field(default_factory=dict)

    def columns(self) -> list[str]:
        cols = []
        for row in self.rows:
            for k in row:
                if k not in cols:
                    cols.append(k)
        return cols

    def csv_text(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=self.columns(), lineterminator="\n")
        w.writeheader()
        for row in self.rows:
            w.writerow({k: _cell(v) for k, v in row.items()})
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "seed": self.seed,
            "params": {k: _cell(v) for k, v in self.params.items()},
            "summary": {k: _cell(v) for k, v in self.summary.items()},
        }

    def stem(self) -> str:
        return f"{self.name}-seed{self.seed}"

    def write(self, csv_path, json_path=None) -> list[Path]:
        csv_path = Path(csv_path)
        csv_path.write_text(self.csv_text())
        out = [csv_path]
        if json_path is not None:
            json_path = Path(json_path)
            json_path.write_text(json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n")
            out.append(json_path)
        return out


def _vals(u) -> np.ndarray:
    return np.array(u.values if isinstance(u, Evaluations) else u, dtype=np.int64)


def _check_pair(u_star: Evaluations, u: Evaluations, params: RsParams):
    if u_star.domain != params.domain or u.domain != params.domain:
        raise DomainMismatch("words and code live on different domains")


def line_word(fld: GF, us: np.ndarray, uu: np.ndarray, x: int) -> np.ndarray:
    return us ^ fld.mul_vec(uu, x)


def random_word(domain: Subspace, channel: Channel) -> Evaluations:
    fld = domain.field
    return Evaluations(domain, [channel.element(fld) for _ in range(domain.size)])


def random_codeword(params: RsParams, channel: Channel) -> Polynomial:
    fld = params.field
    return Polynomial(fld, [channel.element(fld) for _ in range(params.degree_bound)])


# -- worst case to average case ----------------------------------------------


@dataclass
class WtaProfile:
    distances: dict  # x -> Delta(u* + x u, V)
    mean: Fraction
    max: Fraction
    below: dict  # delta -> |{x : delta_x < delta}|

    def count_below(self, delta) -> int:
        delta = Fraction(delta)
        return sum(d < delta for d in self.distances.values())


def wta_profile(u_star: Evaluations, u: Evaluations, params: RsParams, deltas=()) -> WtaProfile:
    """Delta(u* + x u, V) for every x in the field, by exhaustive nearest-codeword search."""
    _check_pair(u_star, u, params)
    fld = params.field
    n = params.domain.size
    search = CodeSearch(fld, params.domain.elements, params.degree_bound)
    us, uu = _vals(u_star), _vals(u)
    dist = {}
    for x in range(fld.order):
        score, _ = search.best(line_word(fld, us, uu, x))
        dist[x] = Fraction(n - score, n)
    prof = WtaProfile(dist, sum(dist.values(), Fraction(0)) / len(dist), max(dist.values()), {})
    prof.below = {Fraction(d): prof.count_below(d) for d in deltas}
    return prof


# -- one-and-a-half Johnson ----------------------------------------------------


@dataclass
class OneHalfCheck:
    delta: Fraction
    eps: Fraction
    lam: Fraction
    dist_star: Fraction
    bad: int
    bound: Fraction
    applicable: bool
    reason: str
    passed: bool | None
    positive_triggered: bool = False
    c_size: int | None = None
    c_bound: Fraction | None = None
    positive_passed: bool | None = None
    witness: tuple | None = None  # (v, v_star, C)

    def row(self) -> dict:
        return {
            "delta": self.delta,
            "eps": self.eps,
            "lambda": self.lam,
            "dist_u_star": self.dist_star,
            "bad_x": self.bad,
            "bound": self.bound,
            "applicable": self.applicable,
            "reason": self.reason,
            "pass": self.passed,
            "positive_triggered": self.positive_triggered,
            "C_size": self.c_size,
            "C_bound": self.c_bound,
            "positive_pass": self.positive_passed,
        }


def radius_admissible(delta, eps, lam) -> bool:
    """delta < 1 - (1 - lam + eps)^(1/3), decided exactly by cubing."""
    delta, eps, lam = Fraction(delta), Fraction(eps), Fraction(lam)
    return delta > 0 and eps > 0 and delta < 1 and (1 - delta) ** 3 > 1 - lam + eps


def _extract_agreement(u_star, u, params, delta, eps):
    """Best (v, v*, C) with C the common agreement set, over codewords within delta + eps."""
    n = params.domain.size
    radius = delta + eps + Fraction(1, 2 * n)
    near_u = list_decode_rs(u, params, radius)
    near_s = list_decode_rs(u_star, params, radius)
    best = None
    for v in near_u:
        ev = encode(v, params.domain).values
        for vs in near_s:
            es = encode(vs, params.domain).values
            C = [i for i in range(n) if ev[i] == u.values[i] and es[i] == u_star.values[i]]
            if best is None or len(C) > len(best[2]):
                best = (v, vs, C)
    return best


def check_one_and_half(u_star: Evaluations, u: Evaluations, params: RsParams, delta, eps, profile: WtaProfile | None = None) -> OneHalfCheck:
    """Count x with Delta(u* + x u, V) < delta against 2/eps^2.

    lambda is taken as 1 - rho. When the hypotheses fail the check is marked
    not applicable rather than raised. Independently of Delta(u*, V), if the
    count reaches 2/eps^2 the common agreement set C is extracted and compared
    with (1 - delta - eps)|D|.
    """
    delta, eps = Fraction(delta), Fraction(eps)
    lam = 1 - params.rate
    profile = profile or wta_profile(u_star, u, params)
    dist_star = profile.distances[0]
    bad = profile.count_below(delta)
    bound = 2 / eps**2
    radius_ok = radius_admissible(delta, eps, lam)
    if not radius_ok:
        reason = "delta not below 1 - (1 - lambda + eps)^(1/3)"
    elif dist_star <= delta + eps:
        reason = "Delta(u*, V) not above delta + eps"
    else:
        reason = ""
    applicable = reason == ""
    out = OneHalfCheck(delta, eps, lam, dist_star, bad, bound, applicable, reason, (bad <= bound) if applicable else None)
    if radius_ok and bad >= bound:
        out.positive_triggered = True
        n = params.domain.size
        found = _extract_agreement(u_star, u, params, delta, eps)
        out.c_bound = (1 - delta - eps) * n
        out.c_size = len(found[2]) if found else 0
        out.positive_passed = out.c_size >= out.c_bound
        out.witness = found
    return out


# -- tightness constructions ---------------------------------------------------


def trace_polynomial(fld: GF, beta: int) -> Polynomial:
    """Tr(beta Y) = sum_i beta^(2^i) Y^(2^i)."""
    coeffs = [0] * ((1 << (fld.n - 1)) + 1)
    b = beta
    for i in range(fld.n):
        coeffs[1 << i] = b
        b = fld.sqr(b)
    return Polynomial(fld, coeffs)


@dataclass
class TightnessPair:
    u_star: Evaluations
    u: Evaluations
    params: RsParams
    witnesses: dict  # x -> v_x
    trace_polys: dict  # x -> P_x

    def __iter__(self):
        return iter((self.u_star, self.u, self.params))


def tightness_pair(n: int) -> TightnessPair:
    """u* = y^(2^(n-1)), u = y^(2^(n-2)) on all of GF(2^n), code of degree <= 2^(n-3).

    For x != 0, with beta = x^-4, P_x = Tr(beta Y) / beta^(2^(n-1)) is monic of
    degree 2^(n-1) with Y^(2^(n-2)) coefficient x, and vanishes on half the
    field. The witness is v_x = P_x - Y^(2^(n-1)) - x Y^(2^(n-2)).
    """
    if not 4 <= n <= 8:
        raise NOutOfRange(f"n = {n} outside 4..8")
    fld = get_field(n)
    D = Subspace.standard(fld, n)
    params = RsParams(fld, D, (1 << (n - 3)) + 1)
    top, mid = 1 << (n - 1), 1 << (n - 2)
    u_star = encode(Polynomial.monomial(fld, top), D)
    u = encode(Polynomial.monomial(fld, mid), D)
    witnesses, traces = {}, {}
    for x in range(1, fld.order):
        beta = fld.inv(fld.pow(x, 4))
        P = trace_polynomial(fld, beta).scale(fld.inv(fld.pow(beta, top)))
        traces[x] = P
        witnesses[x] = P + Polynomial.monomial(fld, top) + Polynomial.monomial(fld, mid, x)
    return TightnessPair(u_star, u, params, witnesses, traces)


@dataclass
class SubspaceTightness:
    u_star: Evaluations
    u: Evaluations
    params: RsParams
    bad_set: list  # sorted x_U
    witnesses: dict  # x_U -> hat P_U
    hyperplanes: dict  # x_U -> elements of U

    def __iter__(self):
        return iter((self.u_star, self.u, self.params, self.bad_set))


def subspace_tightness_pair(n: int, dim: int) -> SubspaceTightness:
    """u* = y^(2^dim), u = y^(2^(dim-1)) on a (dim+1)-dimensional subspace D,
    code of degree <= 2^(dim-2). Each hyperplane U of D gives
    P_U = Y^(2^dim) + x_U Y^(2^(dim-1)) + hat P_U vanishing on U, so
    u* + x_U u agrees with hat P_U on half of D."""
    if not 2 <= dim or not dim + 1 < n or n > 16:
        raise NOutOfRange(f"need 2 <= dim and dim + 1 < n <= 16, got n={n}, dim={dim}")
    fld = get_field(n)
    D = Subspace.standard(fld, dim + 1)
    params = RsParams(fld, D, (1 << (dim - 2)) + 1)
    top, mid = 1 << dim, 1 << (dim - 1)
    u_star = encode(Polynomial.monomial(fld, top), D)
    u = encode(Polynomial.monomial(fld, mid), D)
    witnesses, planes = {}, {}
    for c in range(1, D.size):
        U = [D.element(i) for i in range(D.size) if bin(i & c).count("1") % 2 == 0]
        P = Polynomial.from_roots(fld, U)
        coeffs = list(P.coeffs)
        x_u = coeffs[mid]
        coeffs[top] = coeffs[mid] = 0
        hat = Polynomial(fld, coeffs)
        assert hat.degree <= 1 << (dim - 2)
        witnesses[x_u] = hat
        planes[x_u] = U
    return SubspaceTightness(u_star, u, params, sorted(witnesses), witnesses, planes)


# -- DEEP conditioning ---------------------------------------------------------


def _line_through(fld: GF, x1: int, y1: int, x2: int, y2: int) -> tuple[int, int]:
    b1 = fld.div(y1 ^ y2, x1 ^ x2)
    return y1 ^ fld.mul(b1, x1), b1


def _pick_pretenders(dist: dict, pretenders=None) -> tuple[int, int]:
    if pretenders is not None:
        x1, x2 = pretenders
        if x1 == x2:
            raise ValueError("pretenders must sit at distinct x")
        return x1, x2
    order = sorted(dist, key=lambda x: (dist[x], x))
    return order[0], order[1]


def deep_pretender_experiment(
    u_star: Evaluations,
    u: Evaluations,
    params: RsParams,
    adversary: str,
    z_domain,
    seed: int = 0,
    pretenders=None,
    profile: WtaProfile | None = None,
) -> ExperimentReport:
    """Delta(u_x, V_{z, B_z(x)}) for every z in z_domain and x in the field.

    V_{z,b} holds the codewords whose interpolant takes the value b at z.
    The adversary answers with a line B_z(x) = b0 + b1 x:

    * constant-line: b0, b1 are the values at z of nearest codewords to u*, u;
    * pretender-pair-line: the line through (x1, P1(z)) and (x2, P2(z)) where
      P_i is a nearest codeword to u_{x_i}, the x_i being the two closest
      points of the line unless given.
    """
    _check_pair(u_star, u, params)
    if adversary not in ADVERSARY_LINES:
        raise ValueError(f"unknown adversary {adversary!r}; choose from {ADVERSARY_LINES}")
    fld = params.field
    D = params.domain
    n = D.size
    zs = [int(z) for z in z_domain]
    if any(z in D for z in zs):
        raise DomainOverlap("z domain meets the evaluation domain")
    profile = profile or wta_profile(u_star, u, params)
    dist = profile.distances
    us, uu = _vals(u_star), _vals(u)

    if adversary == "constant-line":
        v_star = nearest_codewords(u_star, params)[1][0]
        v = nearest_codewords(u, params)[1][0]
        lines = {z: (v_star(z), v(z)) for z in zs}
        meta = {}
    else:
        x1, x2 = _pick_pretenders(dist, pretenders)
        p1 = nearest_codewords(Evaluations(D, line_word(fld, us, uu, x1).tolist()), params)[1][0]
        p2 = nearest_codewords(Evaluations(D, line_word(fld, us, uu, x2).tolist()), params)[1][0]
        lines = {z: _line_through(fld, x1, p1(z), x2, p2(z)) for z in zs}
        meta = {"x1": x1, "x2": x2}

    rows = []
    total = Fraction(0)
    floor_ok = True
    strict = 0
    for z in zs:
        b0, b1 = lines[z]
        for x in range(fld.order):
            b = b0 ^ fld.mul(b1, x)
            search = CodeSearch(fld, D.elements, params.degree_bound, [(z, b)])
            score, _ = search.best(line_word(fld, us, uu, x))
            cond = Fraction(n - score, n)
            ok = cond >= dist[x] - Fraction(1, n)
            floor_ok &= ok
            strict += cond > dist[x]
            total += cond
            rows.append({"z": z, "x": x, "b": b, "delta_x": dist[x], "conditioned": cond, "pass": ok})
    cond_mean = total / (len(zs) * fld.order)
    summary = {
        "unconditioned_mean": profile.mean,
        "conditioned_mean": cond_mean,
        "lift": cond_mean - profile.mean,
        "strict_increases": strict,
        "delta_max": profile.max,
        "floor_ok": floor_ok,
        **meta,
    }
    report_params = {
        "adversary": adversary,
        "field_n": fld.n,
        "domain": D.to_json(),
        "degree_bound": params.degree_bound,
        "z_count": len(zs),
    }
    return ExperimentReport(f"deep-pretender-{adversary}", report_params, seed, rows, summary)


def robustness(fld: GF, S, k: int) -> int | None:
    """sigma(S): least s such that every s-subset of S spans F^k (None if S does not span)."""
    S = [tuple(int(c) for c in p) for p in S]
    if not spans(fld, S, k):
        return None
    generator = [[p[i] for p in S] for i in range(k)]
    return gl_metrics(GeneralLinearCode(fld, generator))[1]


def _message_table(code: GeneralLinearCode):
    coeffs, vals = [], []
    for c, v in code.chunks():
        coeffs.append(c)
        vals.append(v)
    return np.concatenate(coeffs), np.concatenate(vals)


def _nearest_message(coeffs, vals, word) -> int:
    agree = (vals == word[None, :]).sum(axis=1)
    top = np.flatnonzero(agree == agree.max())
    return min(top, key=lambda i: tuple(coeffs[i]))


def gl_deep_experiment(code: GeneralLinearCode, S, u_star, u, adversary: str = "constant-line", seed: int = 0, pretenders=None) -> ExperimentReport:
    """As :func:`deep_pretender_experiment` for a general linear code, codewords
    being linear forms l with v = l G and the out-of-domain value <l, z>."""
    if adversary not in ADVERSARY_LINES:
        raise ValueError(f"unknown adversary {adversary!r}; choose from {ADVERSARY_LINES}")
    fld = code.field
    n, k = code.n, code.k
    S = [tuple(int(c) for c in p) for p in S]
    if any(len(p) != k for p in S):
        raise DomainMismatch(f"points of S must have {k} coordinates")
    sigma = robustness(fld, S, k)
    non_robust = sigma is None or sigma == len(S)
    coeffs, vals = _message_table(code)
    us, uu = _vals(u_star), _vals(u)
    if len(us) != n or len(uu) != n:
        raise DomainMismatch("word length differs from the code length")

    agree_by_x = {}
    dist = {}
    for x in range(fld.order):
        agree = (vals == line_word(fld, us, uu, x)[None, :]).sum(axis=1)
        agree_by_x[x] = agree
        dist[x] = Fraction(n - int(agree.max()), n)
    mean = sum(dist.values(), Fraction(0)) / fld.order

    def dot(z):
        acc = np.zeros(len(coeffs), dtype=np.int64)
        for j in range(k):
            acc ^= fld.mul_vec(coeffs[:, j], z[j])
        return acc

    def form_at(i, z):
        acc = 0
        for j in range(k):
            acc ^= fld.mul(int(coeffs[i, j]), z[j])
        return acc

    meta = {}
    if adversary == "constant-line":
        a = _nearest_message(coeffs, vals, us)
        b = _nearest_message(coeffs, vals, uu)
        lines = {z: (form_at(a, z), form_at(b, z)) for z in S}
    else:
        x1, x2 = _pick_pretenders(dist, pretenders)
        m1 = _nearest_message(coeffs, vals, line_word(fld, us, uu, x1))
        m2 = _nearest_message(coeffs, vals, line_word(fld, us, uu, x2))
        lines = {z: _line_through(fld, x1, form_at(m1, z), x2, form_at(m2, z)) for z in S}
        meta = {"x1": x1, "x2": x2}

    rows = []
    total = Fraction(0)
    for z in S:
        forms = dot(z)
        b0, b1 = lines[z]
        for x in range(fld.order):
            b = b0 ^ fld.mul(b1, x)
            mask = forms == b
            best = int(agree_by_x[x][mask].max()) if mask.any() else 0
            cond = Fraction(n - best, n)
            total += cond
            rows.append({"z": list(z), "x": x, "b": b, "delta_x": dist[x], "conditioned": cond, "pass": cond >= dist[x]})
    cond_mean = total / (len(S) * fld.order)
    summary = {
        "sigma": sigma,
        "non_robust": non_robust,
        "unconditioned_mean": mean,
        "conditioned_mean": cond_mean,
        "lift": cond_mean - mean,
        **meta,
    }
    report_params = {"adversary": adversary, "field_n": fld.n, "k": k, "n": n, "S_size": len(S)}
    return ExperimentReport(f"gl-deep-{adversary}", report_params, seed, rows, summary)


# -- threshold curves ----------------------------------------------------------

CURVE_LABELS = (
    "upper bound + DEEP-FRI conjectured lower bound",
    "DEEP-FRI lower bound",
    "FRI lower bound (one-and-a-half Johnson)",
    "FRI previous lower bound",
    "FRI initial lower bound",
)


def curve_values(rho: float) -> tuple:
    return (1 - rho, 1 - math.sqrt(rho), 1 - rho ** (1 / 3), 1 - rho**0.25, (1 - 3 * rho) / 4)


def soundness_curves(rho_grid) -> list[dict]:
    """One row per rate with the five threshold curves; negative values are
    clamped to 0 and the clamped labels listed."""
    rows = []
    for rho in rho_grid:
        r = float(Fraction(rho)) if isinstance(rho, (str, Fraction)) else float(rho)
        if not 0 < r < 1:
            raise ValueError(f"rate {rho} outside (0, 1)")
        row = {"rho": r}
        clamped = []
        for label, v in zip(CURVE_LABELS, curve_values(r)):
            if v < 0:
                clamped.append(label)
                v = 0.0
            row[label] = v
        row["clamped"] = ";".join(clamped)
        rows.append(row)
    return rows


def curves_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=["rho", *CURVE_LABELS, "clamped"], lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: _cell(v) for k, v in row.items()})
    return buf.getvalue()


# -- soundness echo ------------------------------------------------------------


@dataclass
class FarWord:
    word: Evaluations
    codeword: Polynomial
    agreement_set: list
    distance: Fraction


def far_word(params: RsParams, agreement: int, channel: Channel) -> FarWord:
    """A word at distance exactly 1 - agreement/|D| from the code.

    u = c + lam Z_S with c a codeword, S a random agreement-subset of D and
    lam != 0. For any codeword p, u - p is a polynomial of degree exactly
    |S| >= d, so no codeword agrees with u on more than |S| points, and c
    agrees on S.
    """
    D = params.domain
    n = D.size
    if not params.degree_bound <= agreement <= n:
        raise ValueError(f"agreement must lie in [{params.degree_bound}, {n}]")
    fld = params.field
    c = random_codeword(params, channel)
    idx = list(range(n))
    for i in range(n - 1, 0, -1):
        j = channel.below(i + 1)
        idx[i], idx[j] = idx[j], idx[i]
    S = sorted(idx[:agreement])
    lam = 0
    while lam == 0:
        lam = channel.element(fld)
    Z = Polynomial.from_roots(fld, [D.element(i) for i in S]).scale(lam)
    return FarWord(encode(c + Z, D), c, S, Fraction(n - agreement, n))


ECHO_ADVERSARIES = ("honest-fold", "nearest-codeword")


def soundness_echo(params: DeepFriParams, delta, adversary: str, seeds, slack: float = 0.1) -> ExperimentReport:
    """Exact single-query acceptance of far words against max(1 - delta, sqrt(rho)) + slack."""
    if adversary not in ECHO_ADVERSARIES:
        raise ValueError(f"unknown adversary {adversary!r}; choose from {ECHO_ADVERSARIES}")
    delta = Fraction(delta)
    L0 = params.domains[0]
    rs = RsParams(params.field, L0, params.degrees[0])
    agreement = int(L0.size * (1 - delta))
    bound = max(1 - float(delta), math.sqrt(float(params.rate))) + slack
    rows = []
    for seed in seeds:
        fw = far_word(rs, agreement, Channel(seed, "echo/word"))
        prover = HonestProver() if adversary == "honest-fold" else NearestCodewordProver(fw.codeword)
        t = deep_commit(fw.word, params, Channel(seed, "echo/commit"), prover)
        acc = deep_exact_accept(t)
        rows.append({"seed": seed, "distance": fw.distance, "accept": acc, "bound": bound, "pass": float(acc) <= bound})
    passing = sum(r["pass"] for r in rows)
    summary = {"passing": passing, "trials": len(rows), "pass_rate": Fraction(passing, max(1, len(rows)))}
    report_params = {"adversary": adversary, "delta": delta, "degree": params.degrees[0], "size": L0.size, "field_n": params.field.n}
    first = min(seeds) if len(seeds) else 0
    return ExperimentReport(f"soundness-echo-{adversary}", report_params, first, rows, summary)


# -- report builders -----------------------------------------------------------


def _count_roots(fld: GF, p: Polynomial) -> int:
    return sum(p.evaluate(y) == 0 for y in range(fld.order))


def tightness_report(n: int) -> ExperimentReport:
    """Long-format table of the trace counterexample: per-x distances,
    witness distances, root counts, Delta(u*, V) and Delta(u, V)."""
    tp = tightness_pair(n)
    p = tp.params
    fld, D = p.field, p.domain
    prof = wta_profile(tp.u_star, tp.u, p)
    us, uu = _vals(tp.u_star), _vals(tp.u)
    half, top = Fraction(1, 2), Fraction(3, 4)
    rows = []
    for x, d in prof.distances.items():
        rows.append({"quantity": "delta_x", "x": x, "value": d, "bound": half if x else "", "pass": d <= half if x else ""})
    for x, v in tp.witnesses.items():
        word = line_word(fld, us, uu, x)
        wd = Fraction(int((word != _vals(encode(v, D))).sum()), D.size)
        rows.append({"quantity": "witness_distance", "x": x, "value": wd, "bound": half, "pass": wd == half})
    for x, P in tp.trace_polys.items():
        r = _count_roots(fld, P)
        rows.append({"quantity": "trace_roots", "x": x, "value": r, "bound": 1 << (n - 1), "pass": r == 1 << (n - 1)})
    dist_u = nearest_codewords(tp.u, p)[0]
    rows.append({"quantity": "dist_u_star", "x": "", "value": prof.distances[0], "bound": top, "pass": prof.distances[0] == top})
    rows.append({"quantity": "dist_u", "x": "", "value": dist_u, "bound": top, "pass": dist_u == top})
    rows.append({"quantity": "delta_max", "x": "", "value": prof.max, "bound": top, "pass": prof.max == top})
    summary = {
        "delta_max": prof.max,
        "dist_u": dist_u,
        "max_nonzero": max(d for x, d in prof.distances.items() if x),
        "mean": prof.mean,
        "all_pass": all(r["pass"] is not False for r in rows),
    }
    return ExperimentReport(f"tightness-n{n}", {"n": n, "degree_bound": p.degree_bound}, 0, rows, summary)


def subspace_report(n: int, dim: int) -> ExperimentReport:
    st = subspace_tightness_pair(n, dim)
    p = st.params
    fld, D = p.field, p.domain
    prof = wta_profile(st.u_star, st.u, p)
    us, uu = _vals(st.u_star), _vals(st.u)
    A = set(st.bad_set)
    rows = []
    for x, d in prof.distances.items():
        rows.append({"quantity": "delta_x", "x": x, "value": d, "in_A": x in A})
    for x in st.bad_set:
        agree = int((line_word(fld, us, uu, x) == _vals(encode(st.witnesses[x], D))).sum())
        rows.append({"quantity": "witness_agreement", "x": x, "value": Fraction(agree, D.size), "in_A": True})
    half_set = sorted(x for x, d in prof.distances.items() if d <= Fraction(1, 2))
    summary = {
        "A_size": len(A),
        "A_fraction": Fraction(len(A), fld.order),
        "half_agreement_set_size": len(half_set),
        "half_agreement_equals_A": half_set == st.bad_set,
        "unconditioned_mean": prof.mean,
        "delta_max": prof.max,
    }
    return ExperimentReport(f"subspace-tightness-n{n}-dim{dim}", {"n": n, "dim": dim, "degree_bound": p.degree_bound}, 0, rows, summary)


def _planted(params: RsParams, channel: Channel, x: int):
    """A word c + e with c a random codeword and e of weight at most one."""
    D = params.domain
    vals = list(encode(random_codeword(params, channel), D).values)
    if channel.below(2):
        i = channel.below(D.size)
        vals[i] ^= 1 + channel.below(params.field.order - 1)
    return np.array(vals, dtype=np.int64)


ONE_HALF_KINDS = ("random", "planted-one", "planted-two", "common-support")


def one_and_half_instance(params: RsParams, kind: str, channel: Channel) -> tuple[Evaluations, Evaluations]:
    fld, D = params.field, params.domain
    rand = lambda: _vals(random_word(D, channel))  # noqa: E731
    if kind == "random":
        us, uu = rand(), rand()
    elif kind == "planted-one":
        # u* + x1 u close to the code
        x1 = channel.element(fld)
        uu = rand()
        us = _planted(params, channel, x1) ^ fld.mul_vec(uu, x1)
    elif kind == "planted-two":
        x1 = channel.element(fld)
        x2 = x1
        while x2 == x1:
            x2 = channel.element(fld)
        w1, w2 = _planted(params, channel, x1), _planted(params, channel, x2)
        uu = fld.mul_vec(w1 ^ w2, fld.inv(x1 ^ x2))
        us = w1 ^ fld.mul_vec(uu, x1)
    elif kind == "common-support":
        # both words one shared position away from the code: every x is close
        us = _vals(encode(random_codeword(params, channel), D))
        uu = _vals(encode(random_codeword(params, channel), D))
        i = channel.below(D.size)
        us[i] ^= 1 + channel.below(fld.order - 1)
        uu[i] ^= 1 + channel.below(fld.order - 1)
    else:
        raise ValueError(f"unknown instance kind {kind!r}")
    return Evaluations(D, us.tolist()), Evaluations(D, uu.tolist())


def one_and_half_suite(
    trials: int = 200,
    seed: int = 0,
    field_n: int = 4,
    degree_bound: int = 2,
    delta=Fraction(1, 8),
    eps=Fraction(1, 2),
    kinds=ONE_HALF_KINDS,
    max_attempts: int | None = None,
) -> ExperimentReport:
    """Draw instances until ``trials`` of them satisfy the hypotheses,
    recording inadmissible ones as not applicable."""
    fld = get_field(field_n)
    params = RsParams(fld, Subspace.standard(fld, field_n), degree_bound)
    channel = Channel(seed, "one-and-half")
    max_attempts = max_attempts or 10 * trials
    rows = []
    admissible = violations = triggered = pos_fail = 0
    attempt = 0
    while admissible < trials and attempt < max_attempts:
        kind = kinds[attempt % len(kinds)]
        u_star, u = one_and_half_instance(params, kind, channel.child(str(attempt)))
        res = check_one_and_half(u_star, u, params, delta, eps)
        admissible += res.applicable
        violations += res.passed is False
        triggered += res.positive_triggered
        pos_fail += res.positive_passed is False
        rows.append({"attempt": attempt, "kind": kind, **res.row()})
        attempt += 1
    summary = {
        "admissible": admissible,
        "violations": violations,
        "positive_triggered": triggered,
        "positive_failures": pos_fail,
        "bound": 2 / Fraction(eps) ** 2,
        "attempts": attempt,
    }
    report_params = {"field_n": field_n, "degree_bound": degree_bound, "delta": Fraction(delta), "eps": Fraction(eps), "trials": trials}
    return ExperimentReport("one-and-half", report_params, seed, rows, summary)
