import json

import pytest

from nodalfact.errors import (
    BudgetExceeded,
    DimensionMismatch,
    DuplicatePoint,
    EmptySet,
    ParseError,
    PointOnCenter,
    PreconditionViolation,
)
from nodalfact.geom import (
    LinearFlat,
    PointSet,
    Projection,
    combine,
    flats_with_at_least,
    max_points_in_flat,
    max_span_closure,
    point,
    project,
    projection_from_point,
    random_point,
    random_projection,
    span_rank,
)
from nodalfact.scalar import GF, QQ

from oracle import max_in_flat_brute

F = GF()


def planted(rng, N, lines, extra):
    """Random points plus some collinear groups."""
    pts = []
    for size in lines:
        a, b = random_point(F, N, rng), random_point(F, N, rng)
        for _ in range(size):
            pts.append(combine(F, [(F.random(rng), a), (F.random_nonzero(rng), b)]))
    pts += [random_point(F, N, rng) for _ in range(extra)]
    uniq = list({pt.coords: pt for pt in pts}.values())
    return PointSet(uniq)


def test_normalization():
    assert point(F, 0, 2, 4).coords == (0, 1, 2)
    assert point(QQ, 3, 6).coords == (1, 2)
    with pytest.raises(ValueError):
        point(F, 0, 0, 0)


def test_pointset_invariants():
    a, b = point(F, 1, 2, 3), point(F, 2, 4, 6)
    with pytest.raises(DuplicatePoint):
        PointSet([a, b])
    with pytest.raises(EmptySet):
        PointSet([])
    with pytest.raises(DimensionMismatch):
        PointSet([a, point(F, 1, 2)])
    empty = PointSet([], field=F, ambient_dim=4)
    assert len(empty) == 0


def test_json_roundtrip(rng):
    for field in (F, QQ):
        ps = PointSet([random_point(field, 4, rng) for _ in range(6)])
        again = PointSet.from_json(json.loads(json.dumps(ps.to_json())))
        assert again == ps
    with pytest.raises(ParseError):
        PointSet.from_json([{"field": "fp:65521", "ambient_dim": 4}, {"label": "a"}])


def test_flat_through_and_contains(rng):
    pts = [random_point(F, 4, rng) for _ in range(3)]
    plane = LinearFlat.through(pts)
    assert plane.dim == 2
    assert all(plane.contains(p) for p in pts)
    assert plane.contains(combine(F, [(3, pts[0]), (5, pts[1]), (7, pts[2])]))
    assert not plane.contains(random_point(F, 4, rng))
    assert span_rank(plane.spanning_points()) == 3


def test_projection_center_and_composite(rng):
    center = [random_point(F, 4, rng) for _ in range(2)]
    proj = Projection.from_center(center)
    assert proj.target_dim == 2
    with pytest.raises(PointOnCenter):
        project(proj, center[0])
    first = projection_from_point(center[0])
    pt = random_point(F, 4, rng)
    second = projection_from_point(first(center[1]))
    comp = first.then(second)
    assert comp(pt) == second(first(pt))


def test_random_projection_avoids_points(rng):
    ps = PointSet([random_point(F, 4, rng) for _ in range(20)])
    proj = random_projection(4, ps, rng)
    img = proj.image(ps)
    assert len(img) == 20 and img.ambient_dim == 2


@pytest.mark.parametrize("k", [1, 2, 3])
def test_max_in_flat_matches_brute_force(rng, k):
    for _ in range(4):
        ps = planted(rng, 4, [4, 3], 5)
        count, wit = max_points_in_flat(ps, k)
        assert count == max_in_flat_brute([pt.coords for pt in ps], k, F.p)
        assert span_rank(wit) == k + 1 and len(wit) == count


def test_max_in_flat_qq(rng):
    pts = [point(QQ, 1, t, t * t, 0, 1) for t in range(5)] + [point(QQ, 0, 0, 0, 1, 0)]
    count, _ = max_points_in_flat(PointSet(pts), 2)
    assert count == 5  # the five conic points share a plane; the last point is off it
    line = [point(QQ, 1, t, 0, 0, 0) for t in range(4)]
    assert max_points_in_flat(PointSet(line + pts[2:4]), 1)[0] == 4


def test_budget_and_sampling(rng):
    ps = planted(rng, 4, [5], 20)
    with pytest.raises(BudgetExceeded):
        max_points_in_flat(ps, 2, budget=10)
    exact, _, ok = max_span_closure(F, ps.matrix(), 2)
    sampled, _, flag = max_span_closure(F, ps.matrix(), 2, budget=50, rng=rng)
    assert ok and not flag and sampled <= exact == 5


def test_flats_with_at_least(rng):
    ps = planted(rng, 4, [4, 4], 4)
    lines = flats_with_at_least(ps, 1, 4)
    assert len(lines) == 2 and all(span_rank(s) == 2 for s in lines)


def test_precondition(rng):
    ps = PointSet([random_point(F, 4, rng) for _ in range(5)])
    with pytest.raises(PreconditionViolation):
        max_points_in_flat(ps, 4)
