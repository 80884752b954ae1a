"""Building separating hypersurfaces by hand.

Three moves: sweeping extra points into a zero set without touching the
value at p, coning a surface in a hyperplane so it picks up two outside
points, and pairing points by lines that miss p so that few hyperplanes
cover them.
"""

import numpy as np

from nodalfact import HomogeneousForm, PointSet, pair_lines, separating_form, sweep, two_point_cone
from nodalfact.construct import hyperplane_through, pad_to_degree
from nodalfact.geom import ProjectivePoint, combine, random_point
from nodalfact.scalar import GF

rng = np.random.default_rng(3)
F = GF()
N = 4

# --- sweep: 10 points handled by D0, three more swept in afterwards
pts = PointSet([random_point(F, N, rng) for _ in range(14)])
p = pts[0]
Lambda = pts.subset(range(1, 11))
Delta = pts.subset(range(11, 14))
D0 = separating_form(PointSet([p] + list(Lambda)), "p0", 3)
print("D0 at the swept points:", [int(D0.value_at(q)) for q in Delta])
dq = []
for j, q in enumerate(Delta):
    # hyperplanes covering everything but q
    others = [x for x in list(Lambda) + list(Delta) + [p] if x.coords != q.coords]
    Dq = HomogeneousForm.constant(F, N)
    for k in range(0, len(others), 4):
        Dq = Dq * hyperplane_through(F, others[k:k + 4], [q], N, rng)
    dq.append((q, Dq))
degree = max(Dq.degree for _, Dq in dq)
D0 = pad_to_degree(D0, degree, [p], rng)
dq = [(q, pad_to_degree(Dq, degree, [q], rng)) for q, Dq in dq]
G = sweep(D0, dq, p, Lambda, Delta)
print(f"sweep result: degree {G.degree}, zero on all 13 others, G(p) = D0(p): "
      f"{G.value_at(p) == D0.value_at(p)}")

# --- two-point cone over a quadric surface in the hyperplane x4 = 0
h = HomogeneousForm.linear(F, [0, 0, 0, 0, 1])
X = HomogeneousForm.from_dense(F, N, 2, [F.random(rng) for _ in range(15)])
while True:
    o = ProjectivePoint(F, tuple(F.random(rng) for _ in range(4)) + (0,))
    if not X.vanishes_at(o):
        break
p1, q1 = random_point(F, N, rng), random_point(F, N, rng)
res = two_point_cone(X, h, o, p1, q1, rng)
print(f"\ntwo-point cone: degree {res.form.degree} after {res.attempts} plane draw(s); "
      f"through p, q: {res.form.vanishes_at(p1) and res.form.vanishes_at(q1)}, "
      f"nonzero at o: {not res.form.vanishes_at(o)}")
on_cone = [res.form.vanishes_at(combine(F, [(1, res.vertex), (t, res.p_prime)])) for t in range(5)]
print("  line from vertex through p' lies on the cone:", all(on_cone))

# --- pairing: 5 points on one line through c, 4 scattered
c = random_point(F, 3, rng)
a = random_point(F, 3, rng)
line = [combine(F, [(1, a), (t, c)]) for t in range(1, 6)]
scattered = [random_point(F, 3, rng) for _ in range(4)]
ps = PointSet(line + scattered)
pairs = pair_lines(ps, c, 5)
print(f"\npair_lines: {len(pairs)} pairs from 9 points (5 collinear with c): {pairs}")
print(f"  guaranteed at least min(r - m, r // 2) = {min(9 - 5, 9 // 2)}")
