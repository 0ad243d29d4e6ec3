import json
import math
from fractions import Fraction

import pytest

from deepfri.channel import Channel
from deepfri.codes import GeneralLinearCode, RsParams, distance, rs_distance
from deepfri.domains import Subspace
from deepfri.errors import DomainOverlap, NOutOfRange
from deepfri.field import field
from deepfri.lab import (
    CURVE_LABELS,
    check_one_and_half,
    curves_csv,
    deep_pretender_experiment,
    far_word,
    gl_deep_experiment,
    one_and_half_suite,
    radius_admissible,
    random_word,
    robustness,
    soundness_curves,
    subspace_report,
    subspace_tightness_pair,
    tightness_pair,
    tightness_report,
    trace_polynomial,
    wta_profile,
)
from deepfri.poly import Evaluations, Polynomial, encode
from oracles import brute_distance

F16 = field(4)
D8 = Subspace.standard(F16, 3)
Z8 = Subspace.standard(F16, 3, shift=8)
P8 = RsParams(F16, D8, 2)


def test_wta_codewords():
    us = encode(Polynomial(F16, [1, 2]), D8)
    u = encode(Polynomial(F16, [7]), D8)
    prof = wta_profile(us, u, P8)
    assert set(prof.distances.values()) == {0}
    assert prof.mean == prof.max == 0


def test_wta_one_flip():
    us = encode(Polynomial(F16, [1, 2]), D8).replace(3, 0)
    prof = wta_profile(us, Evaluations(D8, [0] * 8), P8, deltas=[Fraction(1, 4)])
    assert set(prof.distances.values()) == {Fraction(1, 8)}
    assert prof.below == {Fraction(1, 4): 16}


def test_wta_matches_oracle(rng):
    us = Evaluations(D8, [rng.randrange(16) for _ in range(8)])
    u = Evaluations(D8, [rng.randrange(16) for _ in range(8)])
    prof = wta_profile(us, u, P8)
    for x in range(16):
        word = [a ^ F16.mul(x, b) for a, b in zip(us.values, u.values)]
        assert prof.distances[x] == brute_distance(F16, D8.elements, word, 2)


def test_trace_polynomial():
    fld = field(4)
    for beta in range(1, 16):
        T = trace_polynomial(fld, beta)
        vals = [T.evaluate(y) for y in range(16)]
        assert set(vals) == {0, 1} and vals.count(0) == 8
        assert all(fld.trace(fld.mul(beta, y)) == v for y, v in zip(range(16), vals))


def test_tightness_n4():
    tp = tightness_pair(4)
    us, u, params = tp
    assert params.degree_bound == 3
    prof = wta_profile(us, u, params)
    assert prof.max == Fraction(3, 4) == prof.distances[0]
    assert all(d <= Fraction(1, 2) for x, d in prof.distances.items() if x)
    line = lambda x: Evaluations(params.domain, [a ^ F16.mul(x, b) for a, b in zip(us.values, u.values)])  # noqa: E731
    for x in range(1, 16):
        v = tp.witnesses[x]
        assert v.degree <= 2
        assert distance(line(x), encode(v, params.domain)) == Fraction(1, 2)
        P = tp.trace_polys[x]
        assert P.degree == 8 and P.lead() == 1 and P.coeffs[4] == x
        assert sum(P.evaluate(y) == 0 for y in range(16)) == 8
    assert brute_distance(F16, params.domain.elements, u.values, 3) == Fraction(3, 4)


def test_tightness_range():
    with pytest.raises(NOutOfRange):
        tightness_pair(3)
    with pytest.raises(NOutOfRange):
        tightness_pair(9)


def test_tightness_report_rows():
    rep = tightness_report(4)
    assert rep.summary["delta_max"] == Fraction(3, 4)
    assert rep.summary["all_pass"]
    assert "delta_max,,3/4,3/4,True" in rep.csv_text().splitlines()
    assert rep.csv_text() == tightness_report(4).csv_text()


def test_one_and_half_on_tightness_pair():
    us, u, params = tightness_pair(4)
    res = check_one_and_half(us, u, params, Fraction(1, 8), Fraction(1, 2))
    # at this rate the radius condition already fails, so the row is skipped
    assert res.applicable == radius_admissible(Fraction(1, 8), Fraction(1, 2), 1 - params.rate)
    if res.applicable:
        assert res.passed


def test_subspace_pair():
    st = subspace_tightness_pair(6, 3)
    us, u, params, A = st
    # one x_U per hyperplane of a 4-dimensional space
    assert len(A) >= 8
    assert len(A) == 15
    D = params.domain
    for x in A:
        word = Evaluations(D, [a ^ st.u_star.field.mul(x, b) for a, b in zip(us.values, u.values)])
        hat = st.witnesses[x]
        assert hat.degree <= params.degree_bound - 1
        assert distance(word, encode(hat, D)) == Fraction(1, 2)
        assert sorted(st.hyperplanes[x]) == sorted(y for y in D.elements if hat.evaluate(y) == word.at(y))
    rep = subspace_report(6, 3)
    assert rep.summary["half_agreement_equals_A"]
    assert rep.summary["A_size"] == 15
    with pytest.raises(NOutOfRange):
        subspace_tightness_pair(4, 3)


def test_pretender_codewords_zero():
    us = encode(Polynomial(F16, [3, 5]), D8)
    u = encode(Polynomial(F16, [9, 1]), D8)
    for adv in ("constant-line", "pretender-pair-line"):
        rep = deep_pretender_experiment(us, u, P8, adv, Z8)
        assert all(r["conditioned"] == 0 for r in rep.rows)
        assert rep.summary["conditioned_mean"] == 0


def test_pretender_overlap():
    us = Evaluations(D8, [0] * 8)
    with pytest.raises(DomainOverlap):
        deep_pretender_experiment(us, us, P8, "constant-line", [1, 9])
    with pytest.raises(ValueError):
        deep_pretender_experiment(us, us, P8, "best", Z8)


def test_pretender_floor_far_word():
    for seed in range(5):
        us = random_word(D8, Channel(seed, "far"))
        zero = Evaluations(D8, [0] * 8)
        dist = rs_distance(us, P8)
        for adv in ("constant-line", "pretender-pair-line"):
            rep = deep_pretender_experiment(us, zero, P8, adv, Z8)
            assert rep.summary["floor_ok"]
            for r in rep.rows:
                assert r["conditioned"] >= dist - Fraction(1, 8)


def test_gl_experiment(rng):
    pts = [1, 2, 3, 4]
    code = GeneralLinearCode(F16, [[1] * 4, pts])
    S = [(rng.randrange(16), rng.randrange(16)) for _ in range(6)]
    us = code.encode([3, 7])
    u = code.encode([1, 9])
    rep = gl_deep_experiment(code, S, us, u, "constant-line")
    assert rep.summary["conditioned_mean"] == 0
    assert rep.summary["sigma"] == robustness(F16, S, 2)
    far = [rng.randrange(16) for _ in range(4)]
    rep2 = gl_deep_experiment(code, S, far, [0, 0, 0, 0], "pretender-pair-line")
    assert rep2.summary["conditioned_mean"] >= rep2.summary["unconditioned_mean"]


def test_robustness_flag():
    # three parallel points: only the full set is sure to contain (0, 1)
    S = [(1, 0), (1, 0), (2, 0), (0, 1)]
    assert robustness(F16, S, 2) == 4
    code = GeneralLinearCode(F16, [[1, 0, 1], [0, 1, 1]])
    rep = gl_deep_experiment(code, S, [1, 2, 3], [0, 0, 0])
    assert rep.summary["non_robust"]
    assert robustness(F16, [(1, 0), (2, 0)], 2) is None
    assert robustness(F16, [(1, 0), (0, 1), (1, 1)], 2) == 2


def test_curves_quarter():
    (row,) = soundness_curves([Fraction(1, 4)])
    want = (0.75, 0.5, 1 - 0.25 ** (1 / 3), 1 - 0.5**0.5, 0.0625)
    for label, w in zip(CURVE_LABELS, want):
        assert row[label] == pytest.approx(w, abs=1e-12)
    assert row[CURVE_LABELS[2]] == pytest.approx(0.37, abs=0.001)
    assert row[CURVE_LABELS[3]] == pytest.approx(0.293, abs=0.001)
    assert row["clamped"] == ""


def test_curves_limits_and_monotone():
    grid = [i / 64 for i in range(1, 64)] + [0.999999]
    rows = soundness_curves(grid)
    last = rows[-1]
    assert all(last[label] < 1e-5 for label in CURVE_LABELS)
    assert last["clamped"] == CURVE_LABELS[4]
    for label in CURVE_LABELS:
        vals = [r[label] for r in rows]
        assert all(a >= b for a, b in zip(vals, vals[1:]))
    with pytest.raises(ValueError):
        soundness_curves([1])
    header = curves_csv(rows).splitlines()[0]
    assert header.split(",")[1:6] == list(CURVE_LABELS)


def test_one_half_codeword_not_applicable():
    params = RsParams(F16, Subspace.standard(F16, 4), 2)
    us = encode(Polynomial(F16, [1, 1]), params.domain)
    res = check_one_and_half(us, random_word(params.domain, Channel(1)), params, Fraction(1, 8), Fraction(1, 2))
    assert not res.applicable and res.passed is None and res.reason


def test_radius_admissible():
    lam = Fraction(7, 8)
    assert radius_admissible(Fraction(1, 8), Fraction(1, 2), lam)
    assert not radius_admissible(Fraction(1, 4), Fraction(1, 2), lam)
    # boundary is excluded: (1 - delta)^3 == 1 - lam + eps
    assert not radius_admissible(Fraction(1, 2), Fraction(0), Fraction(7, 8))


def test_one_half_small_suite():
    rep = one_and_half_suite(trials=20, seed=3)
    s = rep.summary
    assert s["admissible"] == 20 and s["violations"] == 0 and s["positive_failures"] == 0
    assert rep.csv_text() == one_and_half_suite(trials=20, seed=3).csv_text()


def test_far_word_exact_distance():
    params = RsParams(F16, Subspace.standard(F16, 4), 3)
    for agreement in (3, 8, 12, 16):
        fw = far_word(params, agreement, Channel(agreement))
        assert fw.distance == Fraction(16 - agreement, 16) == rs_distance(fw.word, params)
        assert len(fw.agreement_set) == agreement
    with pytest.raises(ValueError):
        far_word(params, 2, Channel(0))


def test_report_write(tmp_path):
    rep = tightness_report(4)
    paths = rep.write(tmp_path / "r.csv", tmp_path / "r.json")
    assert paths[0].read_text() == rep.csv_text()
    obj = json.loads(paths[1].read_text())
    assert obj["summary"]["delta_max"] == "3/4"
    assert rep.stem() == "tightness-n4-seed0"
