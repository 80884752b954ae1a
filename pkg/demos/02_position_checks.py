"""How nodes sit in lines, planes and hyperplanes, and what that buys.

Shows the incidence profile of a node set, the flat-counting test for
normality, the plane-curve thresholds used after projecting to P^2, and
the line/plane bounds that nodes of a degree-n hypersurface must obey.
"""

import numpy as np

from nodalfact import (
    PointSet,
    bese_condition,
    bese_thresholds,
    configuration_profile,
    eisenbud_koh_check,
    example11,
    node_position_bounds,
    random_projection,
)
from nodalfact.config import bese_max_points
from nodalfact.geom import random_point
from nodalfact.scalar import GF

rng = np.random.default_rng(11)
F = GF()

print("curve thresholds: a degree-k curve must carry fewer than t_k points")
for d in (5, 7, 9):
    print(f"  d={d}: t = {bese_thresholds(d)}, at most {bese_max_points(d)} points")

inst = example11(5, rng)
prof = configuration_profile(inst.nodes)
print(f"\nn=5 boundary set: {prof.max_collinear} collinear, {prof.max_in_2plane} on a plane, "
      f"{prof.max_in_hyperplane} on a hyperplane")
ok, why = eisenbud_koh_check(inst.nodes, 5)
print(f"  flat test at degree 5 passes: {ok}; first crowded flat k={why['k']} "
      f"holds {why['count']} >= {why['limit']}")
bounds = node_position_bounds(inst)
print(f"  at most n-1 = 4 nodes on a line: {bounds['max_collinear']['ok']}")
for plane in bounds["rich_planes"]["planes"]:
    print(f"  plane with {plane['count']} nodes > {bounds['rich_planes']['threshold']}: "
          f"{plane['status']}")

# fifteen general points: the flat test certifies 5-normality outright
general = PointSet([random_point(F, 4, rng) for _ in range(15)])
ok, _ = eisenbud_koh_check(general, 5)
print(f"\n15 general points, flat test at degree 5: {ok}")

# project 34 general points to a plane and read off the curve maxima
pts = PointSet([random_point(F, 4, rng) for _ in range(34)])
img = random_projection(4, pts, rng).image(pts)
ok, rep = bese_condition(img, 9, budget=2000, rng=rng)
print(f"\n34 general points projected to P^2, curve test at degree 9: {ok}")
for row in rep["rows"]:
    print(f"  k={row['k']}: {row['measured']} ({row['status']}) vs threshold {row['threshold']}")

# the boundary set minus one node fails: its 15 points lie on four lines
smaller = example11(5, rng).without("q00")
img = random_projection(4, smaller.nodes, rng).image(smaller.nodes)
ok, rep = bese_condition(img, 5, rng=rng)
bad = [r for r in rep["rows"] if not r["passes"]]
print(f"\nn=5 set minus one node projected, curve test at degree 5: {ok}; "
      f"failing degrees {[r['k'] for r in bad]}")
