"""Command-line front end.

Exit codes: 0 accept/success, 1 reject, 2 usage or configuration error,
3 brute-force guard tripped (set DEEPFRI_GUARD_OVERRIDE=1 to lift guards,
which can be very slow).
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import lab
from .channel import Channel
from .codes import GeneralLinearCode
from .deep_ali import (
    AliTranscript,
    air_to_apr,
    ali_domains,
    deep_ali_prove,
    deep_ali_verify,
    fibonacci_air,
    fibonacci_trace,
    squaring_air,
    squaring_trace,
)
from .deep_fri import ADVERSARIES, DeepFriTranscript, deep_commit, deep_exact_accept, deep_fri_soundness, deep_verify, johnson_preset
from .domains import Subspace
from .errors import DeepFriError, MalformedTranscript, SearchSpaceTooLarge
from .field import field as get_field
from .fri import FriTranscript, fri_commit, fri_exact_accept, fri_verify
from .poly import Evaluations, Polynomial, encode
from .presets import ALI_RATE_BITS, PRESETS, get_preset

EXIT_OK, EXIT_REJECT, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _dump(obj, path):
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _load(path):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _preset(args, default: str):
    name = args.preset or default
    try:
        return get_preset(name, field_n=args.n, log_size=args.log_size, degree=args.degree)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from exc


def _input_word(args, domain: Subspace, degree_bound: int) -> Evaluations:
    """Word from --input (evaluations or coefficients), else a random codeword."""
    fld = domain.field
    if args.input:
        obj = _load(args.input)
        if "coeffs" in obj:
            return encode(Polynomial.from_hex(fld, obj["coeffs"]), domain)
        try:
            word = Evaluations.from_json(obj)
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"{args.input} is not an evaluation file: {exc}") from exc
        if word.domain != domain:
            raise UsageError(f"{args.input} does not live on the preset domain {domain!r}")
        return word
    ch = Channel(args.seed, "input")
    return encode(Polynomial(fld, [ch.element(fld) for _ in range(degree_bound)]), domain)


# -- subcommands -----------------------------------------------------------------


def cmd_fri_prove(args):
    p = _preset(args, "r1-q8")
    rate_bits = args.rate_bits if args.rate_bits is not None else p.fri_rate_bits
    if args.rounds is not None:
        rate_bits = p.log_size - args.rounds
    from .fri import make_fri_params

    params = make_fri_params(p.domain(), rate_bits)
    f0 = _input_word(args, params.domains[0], params.degree_bound)
    t = fri_commit(f0, params, Channel(args.seed, "fri"))
    _dump(t.to_json(), args.out)
    print(f"fri transcript: {params.rounds} rounds, |L0| = {p.size}", file=sys.stderr)
    return EXIT_OK


def cmd_fri_verify(args):
    try:
        t = FriTranscript.from_json(_load(args.input))
    except MalformedTranscript as exc:
        raise UsageError(str(exc)) from exc
    res = fri_verify(t, args.ell, Channel(args.seed, "fri-query"))
    summary = {
        "protocol": "fri",
        "accepted": res.accepted,
        "ell": args.ell,
        "seed": args.seed,
        "exact_accept": str(fri_exact_accept(t)),
        "failed_rounds": [pt.failed_round for pt in res.paths],
    }
    if args.json_summary:
        _dump(summary, args.json_summary)
    print("accept" if res.accepted else "reject")
    return EXIT_OK if res.accepted else EXIT_REJECT


def cmd_deep_prove(args):
    p = _preset(args, "r3-q16")
    params = p.deep_params()
    f0 = _input_word(args, params.domains[0], params.degrees[0])
    prover = ADVERSARIES[args.adversary]()
    t = deep_commit(f0, params, Channel(args.seed, "deep"), prover)
    _dump(t.to_json(), args.out)
    print(f"deep-fri transcript: degrees {list(params.degrees)}", file=sys.stderr)
    return EXIT_OK


def cmd_deep_verify(args):
    try:
        t = DeepFriTranscript.from_json(_load(args.input))
    except MalformedTranscript as exc:
        raise UsageError(str(exc)) from exc
    res = deep_verify(t, args.ell, Channel(args.seed, "deep-query"))
    p = t.params
    n, d0, q = p.domains[0].size, p.degrees[0], p.field.order
    j = johnson_preset(n, d0, q, 1.0)
    terms = deep_fri_soundness(n, d0, q, p.rounds, j["delta"], j["eps"], j["list_size"], args.ell)
    summary = {
        "protocol": "deep-fri",
        "accepted": res.accepted,
        "ell": args.ell,
        "seed": args.seed,
        "exact_accept": str(deep_exact_accept(t)),
        "failed_rounds": [pt.failed_round for pt in res.paths],
        "johnson_delta": j["delta"],
        "err_commit": terms.err_commit,
        "err_query": terms.err_query,
    }
    if args.json_summary:
        _dump(summary, args.json_summary)
    print("accept" if res.accepted else "reject")
    return EXIT_OK if res.accepted else EXIT_REJECT


AIRS = {"fibonacci": (fibonacci_air, fibonacci_trace), "squaring": (squaring_air, squaring_trace)}


def cmd_ali_prove(args):
    p = _preset(args, "ali-fib-q16")
    fld = get_field(p.field_n)
    make_air, make_trace = AIRS[args.air]
    air = make_air(fld)
    trace = make_trace(air)
    strategy = args.strategy
    if args.corrupt:
        i, j = (int(v) for v in args.corrupt.split(","))
        if not (0 <= i < air.T and 0 <= j < air.w):
            raise UsageError(f"cell {i},{j} outside the {air.T} x {air.w} trace")
        trace[i][j] ^= 1
        strategy = strategy or "pointwise"
    inst, wit = air_to_apr(air, trace)
    rate_bits = args.rate_bits if args.rate_bits is not None else ALI_RATE_BITS
    doms = ali_domains(inst, rate_bits)
    t = deep_ali_prove(inst, wit, doms, Channel(args.seed, "ali"), strategy or "honest")
    _dump(t.to_json(), args.out)
    return EXIT_OK


def cmd_ali_verify(args):
    try:
        t = AliTranscript.from_json(_load(args.input))
    except MalformedTranscript as exc:
        raise UsageError(str(exc)) from exc
    res = deep_ali_verify(t, args.ell, Channel(args.seed, "ali-query"))
    if args.json_summary:
        _dump({"protocol": "deep-ali", "accepted": res.accepted, "ell": args.ell, "seed": args.seed,
               "f_reads": res.f_reads, "g_reads": res.g_reads}, args.json_summary)
    print("accept" if res.accepted else "reject")
    return EXIT_OK if res.accepted else EXIT_REJECT


def _gl_report(args):
    fld = get_field(args.n or 4)
    ch = Channel(args.seed, "gl")
    k, n = 2, 4
    while True:
        gen = [[ch.element(fld) for _ in range(n)] for _ in range(k)]
        try:
            code = GeneralLinearCode(fld, gen)
            break
        except DeepFriError:
            continue
    S = [tuple(ch.element(fld) for _ in range(k)) for _ in range(args.trials or 6)]
    u_star = [ch.element(fld) for _ in range(n)]
    u = [ch.element(fld) for _ in range(n)]
    rep = lab.gl_deep_experiment(code, S, u_star, u, args.adversary or "constant-line", args.seed)
    rep.params["generator"] = [[fld.to_hex(v) for v in row] for row in gen]
    return rep


def _lab_report(args):
    exp = args.experiment
    if exp == "tightness":
        return lab.tightness_report(args.n or 4)
    if exp == "subspace":
        return lab.subspace_report(args.n or 6, args.dim or 3)
    if exp == "pretender":
        n, dim = args.n or 6, args.dim or 3
        st = lab.subspace_tightness_pair(n, dim)
        fld = st.params.field
        z_dom = Subspace.standard(fld, n - 1, 1 << (n - 1))
        rep = lab.deep_pretender_experiment(st.u_star, st.u, st.params, args.adversary or "constant-line", z_dom, args.seed)
        rep.params.update({"n": n, "dim": dim})
        return rep
    if exp == "one-half":
        return lab.one_and_half_suite(args.trials or 200, args.seed)
    if exp == "echo":
        p = _preset(args, "r3-q16")
        delta = args.delta if args.delta is not None else Fraction(1, 4)
        trials = args.trials or 100
        adversary = args.adversary or "nearest-codeword"
        if adversary not in lab.ECHO_ADVERSARIES:
            raise UsageError(f"echo adversary must be one of {lab.ECHO_ADVERSARIES}")
        return lab.soundness_echo(p.deep_params(), delta, adversary, range(args.seed, args.seed + trials))
    if exp == "gl":
        return _gl_report(args)
    raise UsageError(f"unknown experiment {exp!r}")


def _report_paths(out, stem: str):
    if out is None:
        base = Path(f"{stem}.csv")
    else:
        base = Path(out)
        if base.is_dir():
            base = base / f"{stem}.csv"
    return base, base.with_suffix(".png")


def cmd_lab(args):
    from .plotting import figure_for

    rep = _lab_report(args)
    csv_path, png_path = _report_paths(args.out, rep.stem())
    rep.write(csv_path, args.json_summary)
    fig = figure_for(rep, png_path)
    print(json.dumps(rep.to_json()["summary"], sort_keys=True))
    if fig is not None:
        print(f"figure: {fig}", file=sys.stderr)
    return EXIT_OK


def cmd_curves(args):
    from .plotting import plot_curves

    grid = args.rho or [Fraction(1, 16), Fraction(1, 8), Fraction(1, 4), Fraction(1, 2)]
    try:
        rows = lab.soundness_curves(grid)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    csv_path, png_path = _report_paths(args.out, "curves")
    csv_path.write_text(lab.curves_csv(rows))
    plot_curves(rows, png_path)
    if args.json_summary:
        _dump({"rows": len(rows), "clamped": [r["rho"] for r in rows if r["clamped"]]}, args.json_summary)
    return EXIT_OK


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="deepfri", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, out=True, inp=False):
        p.add_argument("--seed", type=int, default=0, help="randomness seed (default 0)")
        p.add_argument("--json-summary", help="write a JSON summary here")
        if out:
            p.add_argument("--out", help="output path ('-' for stdout where applicable)")
        if inp:
            p.add_argument("--input", "--in", dest="input", required=True, help="transcript JSON")

    def params(p):
        p.add_argument("--preset", choices=sorted(PRESETS))
        p.add_argument("--n", type=int, help="field GF(2^n)")
        p.add_argument("--log-size", type=int, help="|L0| = 2^k")
        p.add_argument("--degree", type=int, help="degree bound d0 (degree < d0)")
        p.add_argument("--rate-bits", type=int, help="rate 2^-R")
        p.add_argument("--rounds", type=int, help="FRI rounds (sets R = k - rounds)")

    p = sub.add_parser("fri-prove", help="commit to a word with FRI")
    common(p)
    params(p)
    p.add_argument("--input", "--in", dest="input", help="word JSON (evaluations or coeffs); random codeword if absent")
    p.set_defaults(func=cmd_fri_prove)

    p = sub.add_parser("fri-verify", help="run the FRI query phase on a transcript")
    common(p, out=False, inp=True)
    p.add_argument("--ell", type=int, default=8)
    p.set_defaults(func=cmd_fri_verify)

    p = sub.add_parser("deep-prove", help="commit to a word with DEEP-FRI")
    common(p)
    params(p)
    p.add_argument("--input", "--in", dest="input", help="word JSON (evaluations or coeffs); random codeword if absent")
    p.add_argument("--adversary", choices=sorted(ADVERSARIES), default="honest")
    p.set_defaults(func=cmd_deep_prove)

    p = sub.add_parser("deep-verify", help="run the DEEP-FRI query phase on a transcript")
    common(p, out=False, inp=True)
    p.add_argument("--ell", type=int, default=8)
    p.set_defaults(func=cmd_deep_verify)

    p = sub.add_parser("ali-prove", help="prove a toy AIR instance with DEEP-ALI")
    common(p)
    params(p)
    p.add_argument("--air", choices=sorted(AIRS), default="fibonacci")
    p.add_argument("--corrupt", help="flip one trace cell, given as row,col")
    p.add_argument("--strategy", choices=("honest", "pointwise"))
    p.set_defaults(func=cmd_ali_prove)

    p = sub.add_parser("ali-verify", help="verify a DEEP-ALI transcript")
    common(p, out=False, inp=True)
    p.add_argument("--ell", type=int, default=8)
    p.set_defaults(func=cmd_ali_verify)

    p = sub.add_parser("lab", help="run an experiment and write a CSV report plus figure")
    p.add_argument("experiment", choices=("tightness", "subspace", "pretender", "one-half", "echo", "gl"))
    common(p)
    params(p)
    p.add_argument("--dim", type=int)
    p.add_argument("--adversary")
    p.add_argument("--trials", type=int)
    p.add_argument("--delta", type=_fraction)
    p.set_defaults(func=cmd_lab)

    p = sub.add_parser("curves", help="threshold curves as CSV plus figure")
    common(p)
    p.add_argument("--rho", type=_fraction, action="append", help="rate (repeatable)")
    p.set_defaults(func=cmd_curves)
    return ap


def run(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except SearchSpaceTooLarge as exc:
        print(f"deepfri: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except MalformedTranscript as exc:
        print(f"deepfri: reject: {exc}", file=sys.stderr)
        return EXIT_REJECT
    except (UsageError, DeepFriError, ValueError, KeyError, OSError) as exc:
        print(f"deepfri: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
