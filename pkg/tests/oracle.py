"""Brute-force reference computations, written without the package's
linear algebra so they can check it."""

from fractions import Fraction
from itertools import combinations, combinations_with_replacement


def monomials(nvars, d):
    """Exponent vectors of all degree-d monomials (order irrelevant for rank)."""
    out = []
    for combo in combinations_with_replacement(range(nvars), d):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(e)
    return out


def eval_matrix_mod(coords, d, p):
    mons = monomials(len(coords[0]), d)
    rows = []
    for x in coords:
        row = []
        for e in mons:
            v = 1
            for xi, ei in zip(x, e):
                v = v * pow(int(xi) % p, ei, p) % p
            row.append(v)
        rows.append(row)
    return rows


def eval_matrix_q(coords, d):
    mons = monomials(len(coords[0]), d)
    rows = []
    for x in coords:
        row = []
        for e in mons:
            v = Fraction(1)
            for xi, ei in zip(x, e):
                v *= Fraction(xi) ** ei
            row.append(v)
        rows.append(row)
    return rows


def rank_mod(rows, p):
    M = [[int(v) % p for v in r] for r in rows]
    rank, col = 0, 0
    ncols = len(M[0]) if M else 0
    while rank < len(M) and col < ncols:
        piv = next((i for i in range(rank, len(M)) if M[i][col]), None)
        if piv is None:
            col += 1
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = pow(M[rank][col], p - 2, p)
        M[rank] = [v * inv % p for v in M[rank]]
        for i in range(len(M)):
            if i != rank and M[i][col]:
                f = M[i][col]
                M[i] = [(a - f * b) % p for a, b in zip(M[i], M[rank])]
        rank += 1
        col += 1
    return rank


def rank_q(rows):
    M = [[Fraction(v) for v in r] for r in rows]
    rank, col = 0, 0
    ncols = len(M[0]) if M else 0
    while rank < len(M) and col < ncols:
        piv = next((i for i in range(rank, len(M)) if M[i][col] != 0), None)
        if piv is None:
            col += 1
            continue
        M[rank], M[piv] = M[piv], M[rank]
        for i in range(rank + 1, len(M)):
            if M[i][col] != 0:
                f = M[i][col] / M[rank][col]
                M[i] = [a - f * b for a, b in zip(M[i], M[rank])]
        rank += 1
        col += 1
    return rank


def points_rank_mod(points, d):
    p = points.field.p
    return rank_mod(eval_matrix_mod([pt.coords for pt in points], d, p), p)


def max_in_flat_brute(coords, k, p):
    """Largest number of points in a k-flat, by trying every (k+1)-subset."""
    best = 0
    for sub in combinations(range(len(coords)), k + 1):
        base = [coords[i] for i in sub]
        if rank_mod(base, p) != k + 1:
            continue
        n = sum(1 for x in coords if rank_mod(base + [x], p) == k + 1)
        best = max(best, n)
    return best
