"""Slow, independent reference computations used as test oracles."""
import itertools
from fractions import Fraction


def horner(F, coeffs, x):
    acc = 0
    for c in reversed(coeffs):
        acc = F.mul(acc, x) ^ c
    return acc


def solve(F, rows, rhs):
    """Gaussian elimination over F for a square nonsingular system."""
    n = len(rows)
    M = [list(r) + [b] for r, b in zip(rows, rhs)]
    for col in range(n):
        piv = next(i for i in range(col, n) if M[i][col])
        M[col], M[piv] = M[piv], M[col]
        inv = F.inv(M[col][col])
        M[col] = [F.mul(inv, v) for v in M[col]]
        for i in range(n):
            if i != col and M[i][col]:
                c = M[i][col]
                M[i] = [a ^ F.mul(c, b) for a, b in zip(M[i], M[col])]
    return [M[i][n] for i in range(n)]


def interpolate_coeffs(F, points, values):
    rows = [[F.pow(x, j) for j in range(len(points))] for x in points]
    coeffs = solve(F, rows, values)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def all_codewords(F, points, bound, constraints=()):
    """Every (coeffs, evaluations) with deg < bound and P(z) = b for each constraint."""
    for coeffs in itertools.product(range(F.order), repeat=bound):
        if all(horner(F, coeffs, z) == b for z, b in constraints):
            yield coeffs, [horner(F, coeffs, x) for x in points]


def brute_distance(F, points, word, bound, constraints=()):
    n = len(points)
    best = max(sum(a == b for a, b in zip(ev, word)) for _, ev in all_codewords(F, points, bound, constraints))
    return Fraction(n - best, n)


def brute_list(F, points, word, bound, delta, constraints=()):
    n = len(points)
    out = []
    for coeffs, ev in all_codewords(F, points, bound, constraints):
        if Fraction(sum(a != b for a, b in zip(ev, word)), n) < delta:
            c = list(coeffs)
            while c and c[-1] == 0:
                c.pop()
            out.append(tuple(c))
    return sorted(out)


def close_exists(F, points, word, bound, need, constraint=None):
    """Oracle: some poly of degree < bound agrees with word on >= need points
    (and passes through constraint). Enumerates interpolation subsets."""
    free = bound - (constraint is not None)
    for sub in itertools.combinations(range(len(points)), free):
        xs = [points[i] for i in sub]
        ys = [word[i] for i in sub]
        if constraint is not None:
            xs.append(constraint[0])
            ys.append(constraint[1])
        c = interpolate_coeffs(F, xs, ys)
        if sum(horner(F, c, x) == w for x, w in zip(points, word)) >= need:
            return True
    return False
