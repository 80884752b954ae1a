import numpy as np
import pytest

from nodalfact.config import (
    bese_check_maxima,
    bese_condition,
    bese_max_points,
    bese_separator,
    bese_thresholds,
    configuration_profile,
    conjecture15_fuzz,
    eisenbud_koh_check,
    fuzz_configuration,
    max_on_conic,
    max_on_plane_curve,
    node_position_bounds,
)
from nodalfact.errors import NotSeparable
from nodalfact.geom import PointSet, ProjectivePoint, max_points_in_flat, point, random_point, random_projection
from nodalfact.nodes import NodalInstance, example11
from nodalfact.normality import independent_conditions
from nodalfact.scalar import GF

from helpers import dedup, in_span, on_line

F = GF()


def plane_set(rng, lines, extra):
    pts = []
    for size in lines:
        a, b = random_point(F, 2, rng), random_point(F, 2, rng)
        pts += on_line(F, a, b, size, rng)
    pts += [random_point(F, 2, rng) for _ in range(extra)]
    return PointSet(dedup(pts))


def conic_points(count, rng, field=F):
    """Points (1 : t : t^2) in random coordinates."""
    A = rng.integers(0, field.p, (3, 3))
    out, ts = [], set()
    while len(out) < count:
        t = field.random(rng)
        if t in ts:
            continue
        ts.add(t)
        v = [1, t, t * t % field.p]
        out.append(ProjectivePoint(field, tuple(sum(int(A[r][c]) * v[c] for c in range(3)) for r in range(3))))
    return out


def test_threshold_tables():
    assert bese_thresholds(9) == (10, 19, 26, 31, 34, 35)
    assert bese_thresholds(7) == (8, 15, 20, 23, 24)
    assert bese_thresholds(5) == (6, 11, 14, 15)
    assert (bese_max_points(9), bese_max_points(7), bese_max_points(5)) == (36, 25, 16)
    ok, rows = bese_check_maxima((6, 12, 25, 30, 33, 34), 34, 9)
    assert ok and all(r["passes"] for r in rows)
    assert not bese_check_maxima((6, 12, 26, 30, 33, 34), 34, 9)[0]


def test_curve_incidence_k1_agrees_with_flats(rng):
    for _ in range(100):
        ps = plane_set(rng, list(rng.integers(2, 6, int(rng.integers(0, 3)))), int(rng.integers(2, 8)))
        inc = max_on_plane_curve(ps, 1)
        assert inc.status == "exact"
        assert inc.count == max_points_in_flat(ps, 1)[0]


def test_six_on_a_conic(rng):
    ps = PointSet(conic_points(6, rng) + [random_point(F, 2, rng) for _ in range(4)])
    inc = max_on_plane_curve(ps, 2)
    assert (inc.count, inc.status) == (6, "exact")
    assert all(inc.curve.vanishes_at(ps.point(l)) for l in inc.members)


def test_curve_maxima_nondecreasing(rng):
    ps = plane_set(rng, [4, 3], 8)
    prof = configuration_profile(ps)
    counts = [prof.curves[k].count for k in (1, 2, 3)]
    assert counts == sorted(counts)


def test_sampled_status(rng):
    ps = PointSet([random_point(F, 2, rng) for _ in range(30)])
    inc = max_on_plane_curve(ps, 3, budget=200, rng=rng)
    assert inc.status == "lower-bound" and inc.count >= 9


def test_projected_example11_lines(rng):
    inst = example11(5, rng).without("q00")
    for _ in range(5):
        img = random_projection(4, inst.nodes, rng).image(inst.nodes)
        assert max_on_plane_curve(img, 1).count <= 4


def test_eisenbud_koh_examples(rng):
    line = on_line(F, random_point(F, 4, rng), random_point(F, 4, rng), 7, rng)
    ok, viol = eisenbud_koh_check(PointSet(line), 5)
    assert not ok and viol["k"] == 1 and viol["count"] == 7
    # 15 points: 4 on a line, 11 in a plane through it, 4 general
    a, b, c = (random_point(F, 4, rng) for _ in range(3))
    pts = on_line(F, a, b, 4, rng) + in_span(F, [a, b, c], 7, rng)
    pts += [random_point(F, 4, rng) for _ in range(4)]
    ps = PointSet(dedup(pts))
    assert len(ps) == 15 and max_points_in_flat(ps, 2)[0] == 11
    assert eisenbud_koh_check(ps, 5) == (True, None)
    assert independent_conditions(ps, 5, separability=False).defect == 0
    # 24 points: 6 on a line inside a plane of 15, the rest general
    pts = on_line(F, a, b, 6, rng) + in_span(F, [a, b, c], 9, rng)
    pts += [random_point(F, 4, rng) for _ in range(9)]
    ps = PointSet(dedup(pts))
    assert len(ps) == 24
    assert eisenbud_koh_check(ps, 7)[0]
    assert independent_conditions(ps, 7, separability=False).defect == 0


def test_eisenbud_koh_implies_normal(rng):
    checked = 0
    for _ in range(40):
        a, b, c = (random_point(F, 4, rng) for _ in range(3))
        pts = on_line(F, a, b, int(rng.integers(2, 6)), rng)
        pts += in_span(F, [a, b, c], int(rng.integers(0, 8)), rng)
        pts += [random_point(F, 4, rng) for _ in range(int(rng.integers(0, 6)))]
        ps = PointSet(dedup(pts))
        for d in (2, 3):
            if len(ps) > d + 1 and eisenbud_koh_check(ps, d)[0]:
                checked += 1
                assert independent_conditions(ps, d, separability=False).defect == 0
    assert checked > 10


def test_bese_examples(rng):
    ps = plane_set(rng, [4], 5)
    ok, rep = bese_condition(ps, 3)
    assert not ok and not rep["rows"][0]["passes"] and rep["rows"][0]["threshold"] == 4
    # 26 points on a nodal cubic y^2 z = x^3 + x^2 z, plus 4 general points
    cubic = []
    for t in range(2, 28):
        cubic.append(point(F, t * t - 1, t * (t * t - 1), 1))
    ps = PointSet(cubic + [random_point(F, 2, rng) for _ in range(4)])
    ok, rep = bese_condition(ps, 9, budget=3000, rng=rng)
    row3 = rep["rows"][2]
    assert not ok and row3["k"] == 3 and row3["measured"] >= 26 and not row3["passes"]


def test_bese_implies_separator(rng):
    tried = 0
    for _ in range(30):
        d = int(rng.integers(3, 6))
        ps = plane_set(rng, list(rng.integers(2, d + 2, int(rng.integers(0, 3)))),
                       int(rng.integers(3, 10)))
        ok, rep = bese_condition(ps, d)
        if not (ok and rep["exact"]):
            continue
        tried += 1
        for lab in ps.labels:
            f = bese_separator(ps, lab, d, condition=ok)
            assert not f.vanishes_at(ps.point(lab))
            assert all(f.vanishes_at(x) for l, x in zip(ps.labels, ps) if l != lab)
    assert tried >= 5


def test_bese_separator_small():
    pts = PointSet([point(F, 1, 0, 0), point(F, 0, 1, 0), point(F, 0, 0, 1),
                    point(F, 1, 1, 1), point(F, 1, 2, 3), point(F, 1, 5, 7)])
    for lab in pts.labels:
        f = bese_separator(pts, lab, 3)
        assert f.degree == 3 and not f.vanishes_at(pts.point(lab))
    line = PointSet([point(F, 1, t, 0) for t in range(6)])
    with pytest.raises(NotSeparable):
        bese_separator(line, "p0", 3)


def test_node_position_bounds(rng):
    inst = example11(5, rng)
    rep = node_position_bounds(inst)
    assert rep["max_collinear"]["count"] == 4 and rep["max_collinear"]["ok"]
    planes = rep["rich_planes"]["planes"]
    assert len(planes) == 1 and planes[0]["count"] == 16 and planes[0]["contained"]
    assert rep["rich_plane_node_count"]["ok"]
    bare = NodalInstance(5, inst.nodes)
    assert node_position_bounds(bare)["rich_planes"]["planes"][0]["status"] == \
        "plane containment unverifiable"
    line = on_line(F, random_point(F, 4, rng), random_point(F, 4, rng), 5, rng)
    syn = NodalInstance(5, PointSet(line + [random_point(F, 4, rng) for _ in range(3)]))
    assert not node_position_bounds(syn)["max_collinear"]["ok"]


def test_fuzz_configurations_respect_budgets(rng):
    for _ in range(20):
        sigma, info = fuzz_configuration(5, rng, F)
        assert len(sigma) < 16
        assert max_points_in_flat(sigma, 1)[0] <= 4
        assert max_on_conic(sigma)[0] <= 8


def test_conic_in_space(rng):
    a, b, c = (random_point(F, 4, rng) for _ in range(3))
    from nodalfact.geom import combine
    pts = []
    for t in range(1, 8):
        pts.append(combine(F, [(1, a), (t, b), (t * t, c)]))
    ps = PointSet(pts + [random_point(F, 4, rng) for _ in range(3)])
    assert max_on_conic(ps)[0] == 7


def test_fuzz_is_replayable():
    a = conjecture15_fuzz(5, 15, np.random.default_rng(3))
    b = conjecture15_fuzz(5, 15, np.random.default_rng(3))
    assert a == b and a["violations"] == 0
    row = a["rows"][7]
    sigma, info = fuzz_configuration(5, np.random.default_rng(row["seed"]), F)
    assert len(sigma) == row["s"] and info["plants"] == row["plants"]


def test_fuzz_higher_degree_informational():
    rep = conjecture15_fuzz(7, 3, np.random.default_rng(5), ks=(1, 2, 3), budget=3000)
    assert len(rep["rows"]) == 3
    assert all(3 in r["image_max"] for r in rep["rows"])
