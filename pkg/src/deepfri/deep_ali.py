"""Algebraic placement-and-routing (APR) constraint systems, the reduction
from execution-trace constraints (AIR), and the DEEP-ALI protocol that
reduces APR satisfiability to two Reed-Solomon proximity tests.

Condition polynomials are written in a prefix grammar::

    expr  := var | const | "(" op expr expr* ")" | "(" "^" expr int ")"
    var   := "v1" | "v2" | ...          (1-based mask position)
    const := hex literal such as 0x1f
    op    := "+" | "-" | "*"

Subtraction equals addition in characteristic 2 but is kept for
readability. ``(+ v2 (^ v1 2))`` reads v2 - v1^2.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .channel import Channel
from .deep_fri import DeepFriTranscript, HonestProver, deep_commit, deep_verify, make_deep_params
from .domains import Subspace
from .errors import (
    DomainSizeMismatch,
    MalformedTranscript,
    NonDivisible,
    SubgroupUnavailable,
    TraceShapeMismatch,
)
from .field import GF, field as get_field
from .poly import Evaluations, Polynomial, barycentric, encode, lagrange, poly_lcm, quotient_multi, quotient_single

# -- condition expressions ---------------------------------------------------

_TOKEN = re.compile(r"\(|\)|[^\s()]+")


class ConstraintExpr:
    """Expression tree: ("var", i) | ("const", c) | (op, child, ...) | ("^", child, k)."""

    def __init__(self, tree, source: str | None = None):
        self.tree = tree
        self.source = source

    @classmethod
    def parse(cls, text: str, fld: GF) -> "ConstraintExpr":
        tokens = _TOKEN.findall(text)
        pos = 0

        def node():
            nonlocal pos
            if pos >= len(tokens):
                raise ValueError("unexpected end of expression")
            tok = tokens[pos]
            pos += 1
            if tok == "(":
                op = tokens[pos]
                pos += 1
                if op not in ("+", "-", "*", "^"):
                    raise ValueError(f"unknown operator {op!r}")
                args = []
                while pos < len(tokens) and tokens[pos] != ")":
                    if op == "^" and len(args) == 1:
                        args.append(int(tokens[pos]))
                        pos += 1
                    else:
                        args.append(node())
                if pos >= len(tokens):
                    raise ValueError("missing ')'")
                pos += 1
                if op == "^" and (len(args) != 2 or args[1] < 0):
                    raise ValueError("'^' takes an expression and a nonnegative integer")
                if op != "^" and not args:
                    raise ValueError(f"{op!r} needs operands")
                return (op, *args)
            if tok == ")":
                raise ValueError("unexpected ')'")
            if re.fullmatch(r"v[1-9][0-9]*", tok):
                return ("var", int(tok[1:]) - 1)
            if tok.lower().startswith("0x"):
                return ("const", fld.from_hex(tok[2:]))
            raise ValueError(f"bad token {tok!r}")

        tree = node()
        if pos != len(tokens):
            raise ValueError("trailing tokens after expression")
        return cls(tree, text)

    def __str__(self):
        return self.source if self.source is not None else _render(self.tree)

    def __repr__(self):
        return f"ConstraintExpr({str(self)!r})"

    @cached_property
    def degree(self) -> int:
        return _degree(self.tree)

    @cached_property
    def arity(self) -> int:
        return _max_var(self.tree) + 1

    def evaluate(self, fld: GF, values) -> int:
        return _eval(self.tree, values, fld.add, fld.mul, lambda a, k: fld.pow(a, k), lambda c: c)

    def evaluate_poly(self, fld: GF, polys) -> Polynomial:
        return _eval(
            self.tree, polys, lambda a, b: a + b, lambda a, b: a * b, lambda a, k: a**k,
            lambda c: Polynomial.constant(fld, c),
        )

    def expand(self, fld: GF) -> dict:
        """Monomial map {exponent tuple: coefficient} of the expanded polynomial."""
        m = self.arity

        def add(a, b):
            out = dict(a)
            for k, v in b.items():
                out[k] = out.get(k, 0) ^ v
            return {k: v for k, v in out.items() if v}

        def mul(a, b):
            out = {}
            for ka, va in a.items():
                for kb, vb in b.items():
                    k = tuple(x + y for x, y in zip(ka, kb))
                    out[k] = out.get(k, 0) ^ fld.mul(va, vb)
            return {k: v for k, v in out.items() if v}

        def power(a, k):
            out = {(0,) * m: 1}
            for _ in range(k):
                out = mul(out, a)
            return out

        def var(i):
            e = [0] * m
            e[i] = 1
            return {tuple(e): 1}

        def const(c):
            return {(0,) * m: c} if c else {}

        return _eval(self.tree, [var(i) for i in range(m)], add, mul, power, const)


def _render(t):
    if t[0] == "var":
        return f"v{t[1] + 1}"
    if t[0] == "const":
        return hex(t[1])
    if t[0] == "^":
        return f"(^ {_render(t[1])} {t[2]})"
    return "(" + t[0] + " " + " ".join(_render(c) for c in t[1:]) + ")"


def _degree(t) -> int:
    kind = t[0]
    if kind == "var":
        return 1
    if kind == "const":
        return 0
    if kind == "^":
        return _degree(t[1]) * t[2]
    if kind == "*":
        return sum(_degree(c) for c in t[1:])
    return max(_degree(c) for c in t[1:])


def _max_var(t) -> int:
    if t[0] == "var":
        return t[1]
    if t[0] == "const":
        return -1
    kids = t[1:2] if t[0] == "^" else t[1:]
    return max(_max_var(c) for c in kids)


def _eval(t, env, add, mul, power, const):
    kind = t[0]
    if kind == "var":
        return env[t[1]]
    if kind == "const":
        return const(t[1])
    if kind == "^":
        return power(_eval(t[1], env, add, mul, power, const), t[2])
    # left to right
    acc = _eval(t[1], env, add, mul, power, const)
    for c in t[2:]:
        v = _eval(c, env, add, mul, power, const)
        acc = mul(acc, v) if kind == "*" else add(acc, v)
    return acc


# -- APR ---------------------------------------------------------------------


@dataclass(frozen=True)
class Constraint:
    mask: tuple
    condition: ConstraintExpr
    domain_poly: Polynomial


class AprInstance:
    def __init__(self, fld: GF, d: int, constraints):
        self.field = fld
        self.d = d
        self.constraints = list(constraints)
        for c in self.constraints:
            if c.condition.arity > len(c.mask):
                raise ValueError("condition uses more variables than its mask has entries")

    @cached_property
    def full_mask(self) -> list[int]:
        out = []
        for c in self.constraints:
            for m in c.mask:
                if m not in out:
                    out.append(m)
        return out

    @property
    def d_c(self) -> int:
        return max(c.condition.degree for c in self.constraints)

    @cached_property
    def q_lcm(self) -> Polynomial:
        acc = Polynomial.constant(self.field, 1)
        for c in self.constraints:
            acc = poly_lcm(acc, c.domain_poly)
        return acc

    def to_json(self) -> dict:
        fld = self.field
        return {
            "field_n": fld.n,
            "d": self.d,
            "constraints": [
                {
                    "mask": [fld.to_hex(m) for m in c.mask],
                    "condition": str(c.condition),
                    "domain_poly": c.domain_poly.to_hex(),
                }
                for c in self.constraints
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "AprInstance":
        fld = get_field(obj["field_n"])
        cons = [
            Constraint(
                tuple(fld.from_hex(m) for m in c["mask"]),
                ConstraintExpr.parse(c["condition"], fld),
                Polynomial.from_hex(fld, c["domain_poly"]),
            )
            for c in obj["constraints"]
        ]
        return cls(fld, int(obj["d"]), cons)


@dataclass(frozen=True)
class AprWitness:
    f_tilde: Polynomial


def _field_roots(p: Polynomial) -> list[int]:
    """All roots of p in its field, by evaluating on every element."""
    fld = p.field
    xs = np.arange(fld.order, dtype=np.int64)
    acc = np.zeros(fld.order, dtype=np.int64)
    for c in reversed(p.coeffs):
        acc = fld.mul_vec(acc, xs) ^ c
    return [int(x) for x in np.nonzero(acc == 0)[0]]


def constraint_holds(inst: AprInstance, c: Constraint, f_tilde: Polynomial, x: int) -> bool:
    fld = inst.field
    vals = [f_tilde.evaluate(fld.mul(x, m)) for m in c.mask]
    return c.condition.evaluate(fld, vals) == 0


def apr_check(inst: AprInstance, wit: AprWitness) -> bool:
    f = wit.f_tilde
    if f.degree >= inst.d:
        return False
    for c in inst.constraints:
        if c.domain_poly.is_zero():
            return False
        for x in _field_roots(c.domain_poly):
            if not constraint_holds(inst, c, f, x):
                return False
    return True


def _shifted_inputs(f_tilde: Polynomial, mask) -> list[Polynomial]:
    return [f_tilde.scale_input(m) for m in mask]


def compose_constraints(f_tilde: Polynomial, alpha, inst: AprInstance) -> Polynomial:
    """sum_i alpha_i P^i(f(x M^i_1), ...) / Q^i(x), by exact division."""
    fld = inst.field
    acc = Polynomial(fld)
    for a, c in zip(alpha, inst.constraints):
        num = c.condition.evaluate_poly(fld, _shifted_inputs(f_tilde, c.mask))
        try:
            quo = num.exact_div(c.domain_poly)
        except NonDivisible:
            raise NonDivisible("witness violates a constraint: domain polynomial does not divide") from None
        acc = acc + quo.scale(int(a))
    return acc


def composition_at(inst: AprInstance, alpha, values_at: dict, x: int) -> int:
    """sum_i alpha_i P^i(v(x M^i_1), ...) / Q^i(x) from point values ``values_at[x M]``."""
    fld = inst.field
    acc = 0
    for a, c in zip(alpha, inst.constraints):
        vals = [values_at[fld.mul(x, m)] for m in c.mask]
        acc ^= fld.mul(int(a), fld.div(c.condition.evaluate(fld, vals), c.domain_poly.evaluate(x)))
    return acc


# -- AIR ---------------------------------------------------------------------


class AirInstance:
    """Trace of T rows and w columns; transition constraints over 2w
    variables (row t then row t+1) and boundary constraints (i, j, value)."""

    def __init__(self, fld: GF, T: int, w: int, transitions, boundaries, gamma: int | None = None):
        n = T * w
        if n < 1 or (fld.order - 1) % n:
            raise SubgroupUnavailable(f"T*w = {n} does not divide q - 1 = {fld.order - 1}")
        if gamma is None:
            gamma = fld.pow(fld.generator(), (fld.order - 1) // n)
        if _mult_order(fld, gamma) != n:
            raise SubgroupUnavailable(f"{gamma:#x} does not have order {n}")
        self.field = fld
        self.T = T
        self.w = w
        self.transitions = list(transitions)
        self.boundaries = [(int(i), int(j), int(v)) for i, j, v in boundaries]
        self.gamma = gamma

    def subgroup(self) -> list[int]:
        out, x = [], 1
        for _ in range(self.T * self.w):
            out.append(x)
            x = self.field.mul(x, self.gamma)
        return out

    def to_json(self) -> dict:
        fld = self.field
        return {
            "field_n": fld.n,
            "T": self.T,
            "w": self.w,
            "gamma": fld.to_hex(self.gamma),
            "transitions": [str(t) for t in self.transitions],
            "boundaries": [[i, j, fld.to_hex(v)] for i, j, v in self.boundaries],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "AirInstance":
        fld = get_field(obj["field_n"])
        return cls(
            fld,
            int(obj["T"]),
            int(obj["w"]),
            [ConstraintExpr.parse(s, fld) for s in obj["transitions"]],
            [(i, j, fld.from_hex(v)) for i, j, v in obj["boundaries"]],
            fld.from_hex(obj["gamma"]) if obj.get("gamma") else None,
        )


def _mult_order(fld: GF, g: int) -> int:
    if g == 0:
        return 0
    k, x = 1, g
    while x != 1:
        x = fld.mul(x, g)
        k += 1
    return k


def default_witness_degree(air: AirInstance) -> int:
    """Smallest power of two >= T w, so that d / rho is a domain size."""
    d = 1
    while d < air.T * air.w:
        d *= 2
    return d


def air_to_apr(air: AirInstance, trace, d: int | None = None) -> tuple[AprInstance, AprWitness]:
    fld = air.field
    if len(trace) != air.T or any(len(row) != air.w for row in trace):
        raise TraceShapeMismatch(f"trace must be {air.T} x {air.w}")
    d = default_witness_degree(air) if d is None else d
    pts = air.subgroup()
    vals = [int(trace[t][j]) for t in range(air.T) for j in range(air.w)]
    f_tilde = lagrange(fld, pts, vals)
    mask = tuple(pts[: 2 * air.w]) if 2 * air.w <= len(pts) else tuple(
        fld.pow(air.gamma, k) for k in range(2 * air.w)
    )
    # zeros gamma^(t w) for t in [T - 1]: (x^T - 1) / (x - gamma^-w)
    q_trans = (Polynomial.monomial(fld, air.T) + 1).exact_div(
        Polynomial(fld, [fld.pow(air.gamma, -air.w), 1])
    )
    cons = [Constraint(mask, t, q_trans) for t in air.transitions]
    for i, j, v in air.boundaries:
        cond = ConstraintExpr(("-", ("var", 0), ("const", v)), f"(- v1 0x{fld.to_hex(v)})")
        cons.append(Constraint((1,), cond, Polynomial(fld, [fld.pow(air.gamma, i * air.w + j), 1])))
    return AprInstance(fld, d, cons), AprWitness(f_tilde)


# -- DEEP-ALI ----------------------------------------------------------------


def ali_domains(inst: AprInstance, rate_bits: int, avoid=()) -> tuple[Subspace, Subspace]:
    """Cosets D, D' of sizes d 2^R and d d_C 2^R, each the first coset of a
    standard-basis subspace that misses ``avoid`` and the roots of Q_lcm."""
    d, dc = inst.d, inst.d_c
    sizes = (d << rate_bits, (d * dc) << rate_bits)
    fld = inst.field
    bad = set(int(a) for a in avoid) | set(_field_roots(inst.q_lcm))
    out = []
    for size in sizes:
        k = size.bit_length() - 1
        if size != 1 << k:
            raise DomainSizeMismatch(f"domain size {size} is not a power of two")
        if k >= fld.n:
            raise DomainSizeMismatch(f"domain of size {size} does not fit a proper coset of GF(2^{fld.n})")
        for shift in range(1 << k, fld.order, 1 << k):
            dom = Subspace.standard(fld, k, shift)
            if not any(x in bad for x in dom.elements):
                out.append(dom)
                break
        else:
            raise DomainSizeMismatch(f"no coset of size {size} avoids the forbidden points")
    return out[0], out[1]


class QuotientOracle:
    """h(y) = (f(y) - U(y)) / Z(y) computed on demand from an oracle for f:
    one read of f per query plus O(|answers|) arithmetic."""

    def __init__(self, values, domain: Subspace, answers: dict):
        self.values = values
        self.domain = domain
        self.points = list(answers)
        self.answers = [answers[p] for p in self.points]
        self.reads = []

    def __getitem__(self, i):
        fld = self.domain.field
        self.reads.append(i)
        v = self.values[i]
        y = self.domain.element(i)
        z = 1
        for p in self.points:
            z = fld.mul(z, y ^ p)
        return fld.mul(v ^ barycentric(fld, self.points, self.answers, y), fld.inv(z))


@dataclass
class AliTranscript:
    instance: AprInstance
    domains: tuple
    f: Evaluations
    g: Evaluations
    alpha: list
    z: int
    z_retries: int
    answers: list  # f~(z M) for M in the full mask, in order
    h1: DeepFriTranscript
    h2: DeepFriTranscript
    seed: int
    tag: str = ""

    def answer_map(self) -> dict:
        fld = self.instance.field
        return {fld.mul(self.z, m): a for m, a in zip(self.instance.full_mask, self.answers)}

    def to_json(self) -> dict:
        fld = self.instance.field
        hx = fld.to_hex
        return {
            "protocol": "deep-ali",
            "instance": self.instance.to_json(),
            "domains": [d.to_json() for d in self.domains],
            "f": [hx(v) for v in self.f.values],
            "g": [hx(v) for v in self.g.values],
            "alpha": [hx(a) for a in self.alpha],
            "z": hx(self.z),
            "z_retries": self.z_retries,
            "answers": [hx(a) for a in self.answers],
            "h1": self.h1.to_json(),
            "h2": self.h2.to_json(),
            "seed": self.seed,
            "tag": self.tag,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "AliTranscript":
        try:
            inst = AprInstance.from_json(obj["instance"])
            fld = inst.field
            D, D2 = (Subspace.from_json(fld, d) for d in obj["domains"])
            return cls(
                inst,
                (D, D2),
                Evaluations(D, [fld.from_hex(v) for v in obj["f"]]),
                Evaluations(D2, [fld.from_hex(v) for v in obj["g"]]),
                [fld.from_hex(a) for a in obj["alpha"]],
                fld.from_hex(obj["z"]),
                int(obj["z_retries"]),
                [fld.from_hex(a) for a in obj["answers"]],
                DeepFriTranscript.from_json(obj["h1"]),
                DeepFriTranscript.from_json(obj["h2"]),
                obj["seed"],
                obj.get("tag", ""),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedTranscript(f"cannot parse DEEP-ALI transcript: {exc}") from exc


def _sub_params(inst: AprInstance, domains):
    D, D2 = domains
    return (
        make_deep_params(D, inst.d - len(inst.full_mask)),
        make_deep_params(D2, inst.d * inst.d_c - 1),
    )


def _z_forbidden(inst: AprInstance, domains, z: int) -> bool:
    fld = inst.field
    D, D2 = domains
    if z == 0 or z in D2:
        return True
    for m in inst.full_mask:
        p = fld.mul(z, m)
        if p in D or p in D2:
            return True
    return any(c.domain_poly.evaluate(z) == 0 for c in inst.constraints)


def _sample_challenges(inst: AprInstance, domains, channel: Channel):
    fld = inst.field
    alpha = [channel.element(fld) for _ in inst.constraints]
    retries = 0
    while True:
        z = channel.element(fld)
        if not _z_forbidden(inst, domains, z):
            return alpha, z, retries
        retries += 1


def _check_domains(inst: AprInstance, domains):
    D, D2 = domains
    if D.size % inst.d or D2.size != D.size * inst.d_c:
        raise DomainSizeMismatch(
            f"need |D| = d/rho and |D'| = d d_C/rho; got {D.size}, {D2.size} for d={inst.d}, d_C={inst.d_c}"
        )


def pointwise_composition(inst: AprInstance, f_tilde: Polynomial, alpha, domain: Subspace) -> Evaluations:
    """g_alpha evaluated point by point; defined even when the witness is invalid."""
    fld = inst.field
    out = []
    for x in domain.elements:
        vals = {fld.mul(x, m): f_tilde.evaluate(fld.mul(x, m)) for m in inst.full_mask}
        out.append(composition_at(inst, alpha, vals, x))
    return Evaluations(domain, out)


def deep_ali_prove(inst: AprInstance, wit: AprWitness, domains, channel: Channel, strategy: str = "honest") -> AliTranscript:
    """``strategy`` "honest" divides exactly (raising NonDivisible on a bad
    witness); "pointwise" evaluates the composition point by point, which is
    what a prover holding an invalid witness can still send."""
    _check_domains(inst, domains)
    fld = inst.field
    D, D2 = domains
    seed, tag = channel.seed, channel.tag
    f_tilde = wit.f_tilde
    f = encode(f_tilde, D)
    alpha, z, retries = _sample_challenges(inst, domains, channel)
    if strategy == "honest":
        g = encode(compose_constraints(f_tilde, alpha, inst), D2)
    elif strategy == "pointwise":
        g = pointwise_composition(inst, f_tilde, alpha, D2)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    points = [fld.mul(z, m) for m in inst.full_mask]
    answers = [f_tilde.evaluate(p) for p in points]
    amap = dict(zip(points, answers))
    b = composition_at(inst, alpha, amap, z)
    h1 = quotient_multi(f, amap)
    h2 = quotient_single(g, z, b)
    p1, p2 = _sub_params(inst, domains)
    t1 = deep_commit(h1, p1, channel.child("h1"), HonestProver())
    t2 = deep_commit(h2, p2, channel.child("h2"), HonestProver())
    # the verifier derives layer 0 of both sub-protocols from f and g
    t1.layers[0] = None
    t2.layers[0] = None
    return AliTranscript(inst, (D, D2), f, g, alpha, z, retries, answers, t1, t2, seed, tag)


@dataclass
class AliVerifyResult:
    accepted: bool
    b: int
    h1: object
    h2: object
    f_reads: int
    g_reads: int

    def __bool__(self):
        return self.accepted


def deep_ali_verify(t: AliTranscript, ell: int, channel: Channel) -> AliVerifyResult:
    inst = t.instance
    fld = inst.field
    _check_domains(inst, t.domains)
    if t.f.domain != t.domains[0] or t.g.domain != t.domains[1]:
        raise MalformedTranscript("oracle domains do not match the transcript domains")
    if len(t.answers) != len(inst.full_mask):
        raise MalformedTranscript("answer count does not match the full mask")
    alpha, z, retries = _sample_challenges(inst, t.domains, Channel(t.seed, t.tag))
    if (alpha, z, retries) != (list(t.alpha), t.z, t.z_retries):
        raise MalformedTranscript("alpha/z do not replay from the transcript seed")
    parent = Channel(t.seed, t.tag)
    for sub, name in ((t.h1, "h1"), (t.h2, "h2")):
        expect = parent.child(name)
        if (sub.seed, sub.tag) != (expect.seed, expect.tag):
            raise MalformedTranscript(f"{name} sub-transcript is not bound to the parent seed")
    p1, p2 = _sub_params(inst, t.domains)
    if t.h1.params != p1 or t.h2.params != p2:
        raise MalformedTranscript("sub-transcript parameters do not match the instance")
    amap = t.answer_map()
    b = composition_at(inst, alpha, amap, z)
    o1 = QuotientOracle(t.f.values, t.domains[0], amap)
    o2 = QuotientOracle(t.g.values, t.domains[1], {z: b})
    r1 = deep_verify(t.h1, ell, channel.child("h1q"), base_oracle=o1)
    r2 = deep_verify(t.h2, ell, channel.child("h2q"), base_oracle=o2)
    f_reads = sum(len(p.reads[0]) for p in r1.paths)
    g_reads = sum(len(p.reads[0]) for p in r2.paths)
    return AliVerifyResult(r1.accepted and r2.accepted, b, r1, r2, f_reads, g_reads)


def ali_soundness_bound(L, d, d_c, deg_qlcm, q, eps, eps_prime) -> float:
    """eps + eps' + 2 L^2 (d d_C + deg Q_lcm) / q."""
    return eps + eps_prime + 2 * L * L * (d * d_c + deg_qlcm) / q


# -- toy instance --------------------------------------------------------------


def squaring_air(fld: GF, T: int = 15, start: int = 3) -> AirInstance:
    """One-column trace t_{i+1} = t_i^2 with t_0 = start."""
    trans = ConstraintExpr.parse("(+ v2 (^ v1 2))", fld)
    return AirInstance(fld, T, 1, [trans], [(0, 0, start)])


def squaring_trace(air: AirInstance) -> list[list[int]]:
    fld = air.field
    start = air.boundaries[0][2]
    rows, v = [], start
    for _ in range(air.T):
        rows.append([v])
        v = fld.mul(v, v)
    return rows


def fibonacci_air(fld: GF, T: int = 5, first: int = 1, second: int = 2) -> AirInstance:
    """Additive Fibonacci sequence laid out three terms per row, so that
    T * 3 can divide q - 1 in characteristic two."""
    trans = [
        ConstraintExpr.parse(s, fld)
        for s in ("(- v3 (+ v1 v2))", "(- v4 (+ v2 v3))", "(- v5 (+ v3 v4))")
    ]
    return AirInstance(fld, T, 3, trans, [(0, 0, first), (0, 1, second)])


def fibonacci_trace(air: AirInstance) -> list[list[int]]:
    a, b = air.boundaries[0][2], air.boundaries[1][2]
    seq = [a, b]
    while len(seq) < 3 * air.T:
        seq.append(seq[-1] ^ seq[-2])
    return [seq[3 * t : 3 * t + 3] for t in range(air.T)]
