"""Small generators of structured point sets shared by the tests."""

import itertools

from nodalfact import linalg
from nodalfact.geom import PointSet, ProjectivePoint, combine
from nodalfact.poly import HomogeneousForm, product


def on_line(field, a, b, count, rng):
    out, seen = [], set()
    while len(out) < count:
        pt = combine(field, [(field.random_nonzero(rng), a), (field.random(rng), b)])
        if pt.coords not in seen:
            seen.add(pt.coords)
            out.append(pt)
    return out


def in_span(field, basis, count, rng):
    out, seen = [], set()
    while len(out) < count:
        pt = combine(field, [(field.random(rng), b) for b in basis[:-1]]
                     + [(field.random_nonzero(rng), basis[-1])])
        if pt.coords not in seen:
            seen.add(pt.coords)
            out.append(pt)
    return out


def dedup(points):
    return list({pt.coords: pt for pt in points}.values())


def random_change(field, N, rng):
    while True:
        A = rng.integers(0, field.p, (N + 1, N + 1))
        if linalg.rank(field, A) == N + 1:
            return A


def grid_intersection(field, N, k, rng):
    """k^N points cut out by N products of k linear forms, in random coordinates.

    Returns the points and the N generators.
    """
    A = random_change(field, N, rng)
    # rows of A^{-1}: the coordinates y = A^{-1} x as linear forms in x
    unit = [[1 if i == j else 0 for j in range(N + 1)] for i in range(N + 1)]
    cols = [linalg.solve(field, A, e) for e in unit]
    inv_rows = [[cols[j][i] for j in range(N + 1)] for i in range(N + 1)]
    vals = []
    for _ in range(N):
        v = set()
        while len(v) < k:
            v.add(field.random(rng))
        vals.append(sorted(v))
    # generator i = prod_a (y_i - a * y_0)
    gens = []
    for i in range(1, N + 1):
        lins = []
        for a in vals[i - 1]:
            coeffs = [field.sub(inv_rows[i][c], field.mul(a, inv_rows[0][c])) for c in range(N + 1)]
            lins.append(HomogeneousForm.linear(field, coeffs))
        gens.append(product(lins))
    pts = []
    for combo in itertools.product(*vals):
        y = [1] + list(combo)
        x = [sum(int(A[r][c]) * int(y[c]) for c in range(N + 1)) % field.p for r in range(N + 1)]
        pts.append(ProjectivePoint(field, tuple(x)))
    return PointSet(pts), gens
