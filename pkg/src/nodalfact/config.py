"""Position checks for point sets: flat and plane-curve incidences, the
Eisenbud-Koh and Bese criteria, node-position bounds, and a projection fuzzer.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field
from math import comb

import numpy as np

from . import linalg
from .errors import BudgetExceeded, GenericityFailure, NotSeparable, PreconditionViolation
from .geom import (
    DEFAULT_BUDGET,
    PointSet,
    ProjectivePoint,
    combine,
    flats_with_at_least,
    max_points_in_flat,
    max_span_closure,
    random_point,
    random_projection,
    span_rank,
)
from .normality import forms_through, separating_form
from .poly import HomogeneousForm, evaluation_matrix, substitute

log = logging.getLogger(__name__)


def curve_conditions(k: int) -> int:
    """Number of points that generically determine a plane curve of degree k."""
    return k * (k + 3) // 2


# ----------------------------------------------------------- plane curves


@dataclass
class CurveIncidence:
    k: int
    count: int
    status: str  # "exact" or "lower-bound"
    members: list[str]
    curve: HomogeneousForm | None = None

    def to_json(self) -> dict:
        return {"k": self.k, "count": self.count, "status": self.status,
                "members": self.members,
                "curve": None if self.curve is None else self.curve.to_json()}


def max_on_plane_curve(points2d: PointSet, k: int, budget: int = DEFAULT_BUDGET,
                       rng: np.random.Generator | None = None) -> CurveIncidence:
    """Most points of a plane set lying on one curve of degree k.

    A point lies on a curve through an independent c-subset (c = k(k+3)/2)
    iff its degree-k evaluation vector is in the span of the subset's, so
    maximal curves are found as span closures.  Beyond ``budget`` subsets
    the search samples and reports a lower bound.
    """
    if points2d.ambient_dim != 2:
        raise PreconditionViolation("max_on_plane_curve needs points in P^2")
    if k < 1:
        raise PreconditionViolation("k must be positive")
    F = points2d.field
    s = len(points2d)
    c = curve_conditions(k)
    E = evaluation_matrix(F, [pt.coords for pt in points2d], 2, k)
    if comb(s, c) > budget and rng is None:
        rng = np.random.default_rng(0)
    count, members, exact = max_span_closure(F, E, c, budget, rng)
    sub = points2d.subset(members)
    curves = forms_through(sub, k)
    return CurveIncidence(k, count, "exact" if exact else "lower-bound",
                          list(sub.labels), curves[0] if curves else None)


# ------------------------------------------------------------- Eisenbud-Koh


def eisenbud_koh_check(points: PointSet, d: int, budget: int = DEFAULT_BUDGET):
    """Sufficient test for d-normality: no dk+2 of the points in any k-plane.

    Returns ``(passes, violation)`` with ``violation`` describing the first
    k-plane holding too many points.
    """
    if d < 2:
        raise PreconditionViolation("the criterion needs d >= 2")
    s = len(points)
    N = points.ambient_dim
    for k in range(1, N + 1):
        limit = d * k + 2
        if limit > s:
            continue
        if k == N:
            return False, {"k": k, "limit": limit, "count": s, "members": list(points.labels)}
        count, witness = max_points_in_flat(points, k, budget)
        if count >= limit:
            return False, {"k": k, "limit": limit, "count": count,
                           "members": list(witness.labels)}
    return True, None


# --------------------------------------------------------------------- Bese


def bese_m(d: int) -> int:
    return (d + 3) // 2


def bese_thresholds(d: int) -> tuple[int, ...]:
    """``k(d+3-k) - 1`` for k = 1..m; a degree-k curve must hold fewer points."""
    return tuple(k * (d + 3 - k) - 1 for k in range(1, bese_m(d) + 1))


def bese_max_points(d: int) -> int:
    m = bese_m(d)
    return max(m * (d + 3 - m) - 1, m * m)


def bese_check_maxima(maxima, s: int, d: int) -> tuple[bool, list[dict]]:
    """Apply the criterion to already measured curve maxima (k = 1..m)."""
    th = bese_thresholds(d)
    if len(maxima) != len(th):
        raise ValueError(f"need {len(th)} maxima for d = {d}")
    rows = [{"k": k, "threshold": t, "measured": int(v), "passes": int(v) < t}
            for k, (t, v) in enumerate(zip(th, maxima), start=1)]
    ok = s <= bese_max_points(d) and all(r["passes"] for r in rows)
    return ok, rows


def bese_condition(points2d: PointSet, d: int, budget: int = DEFAULT_BUDGET,
                   rng: np.random.Generator | None = None):
    """Check the plane incidence criterion guaranteeing separators of degree d.

    Returns ``(passes, report)``; the report lists each threshold, the
    measured maximum and whether it is exact or sampled.
    """
    if points2d.ambient_dim != 2:
        raise PreconditionViolation("bese_condition needs points in P^2")
    if d < 3:
        raise PreconditionViolation("bese_condition needs d >= 3")
    if d == 3:
        log.info("bese_condition used at d = 3 with the general size bound")
    s = len(points2d)
    rows = []
    for k, t in enumerate(bese_thresholds(d), start=1):
        if s < t:
            rows.append({"k": k, "threshold": t, "measured": s, "status": "trivial",
                         "passes": True})
            continue
        # degrees 1 and 2 are always searched exhaustively
        kb = max(budget, comb(s, curve_conditions(k))) if k <= 2 else budget
        inc = max_on_plane_curve(points2d, k, kb, rng)
        rows.append({"k": k, "threshold": t, "measured": inc.count, "status": inc.status,
                     "passes": inc.count < t, "members": inc.members})
    size_ok = s <= bese_max_points(d)
    ok = size_ok and all(r["passes"] for r in rows)
    report = {"degree": d, "s": s, "max_points": bese_max_points(d), "size_ok": size_ok,
              "rows": rows, "exact": all(r["status"] != "lower-bound" for r in rows),
              "passes": ok}
    return ok, report


def bese_separator(points2d: PointSet, p: str, d: int, condition: bool | None = None):
    """Plane curve of degree d through every point but ``p``."""
    if points2d.ambient_dim != 2:
        raise PreconditionViolation("bese_separator needs points in P^2")
    try:
        return separating_form(points2d, p, d)
    except NotSeparable:
        if condition:
            log.error("red flag: criterion held but %s is not separable at degree %d", p, d)
        raise


# -------------------------------------------------------------- profiles


@dataclass
class ConfigurationProfile:
    ambient_dim: int
    s: int
    flats: dict = dc_field(default_factory=dict)
    curves: dict = dc_field(default_factory=dict)

    @property
    def max_collinear(self) -> int:
        return self.flats.get(1, {}).get("count", 0)

    @property
    def max_in_2plane(self) -> int:
        return self.flats.get(2, {}).get("count", 0)

    @property
    def max_in_hyperplane(self) -> int:
        return self.flats.get(self.ambient_dim - 1, {}).get("count", 0)

    def to_json(self) -> dict:
        return {"ambient_dim": self.ambient_dim, "s": self.s,
                "flats": {str(k): v for k, v in self.flats.items()},
                "curves": {str(k): v.to_json() for k, v in self.curves.items()}}


def configuration_profile(points: PointSet, budget: int = DEFAULT_BUDGET,
                          curve_degrees=(1, 2, 3), rng=None) -> ConfigurationProfile:
    N = points.ambient_dim
    prof = ConfigurationProfile(N, len(points))
    for k in range(1, N):
        if len(points) < k + 1:
            break
        try:
            count, wit = max_points_in_flat(points, k, budget)
        except BudgetExceeded as exc:
            prof.flats[k] = {"count": None, "skipped": str(exc)}
            continue
        prof.flats[k] = {"count": count, "members": list(wit.labels)}
    if N == 2:
        for k in curve_degrees:
            prof.curves[k] = max_on_plane_curve(points, k, budget, rng)
    return prof


# ---------------------------------------------------------- node positions


def plane_restriction(form: HomogeneousForm, plane_points) -> HomogeneousForm:
    """``form`` pulled back to a 2-plane spanned by three of the given points."""
    basis = _plane_basis(plane_points)
    return substitute(form, [tuple(b.coords[i] for b in basis)
                             for i in range(form.ambient_dim + 1)])


def _plane_basis(points) -> list[ProjectivePoint]:
    basis = []
    for pt in points:
        if span_rank(basis + [pt]) == len(basis) + 1:
            basis.append(pt)
        if len(basis) == 3:
            return basis
    raise ValueError("points do not span a 2-plane")


def node_position_bounds(inst, budget: int = DEFAULT_BUDGET) -> dict:
    """Check how the nodes of a degree-n hypersurface may sit in lines and planes."""
    n, nodes = inst.n, inst.nodes
    report = {"n": n, "s": len(nodes)}
    count, wit = max_points_in_flat(nodes, 1, budget)
    report["max_collinear"] = {"count": count, "bound": n - 1, "ok": count <= n - 1,
                               "members": list(wit.labels)}
    threshold = n * (n - 1) // 2
    planes = []
    for plane in flats_with_at_least(nodes, 2, threshold + 1, budget):
        entry = {"count": len(plane), "members": list(plane.labels)}
        if inst.form is None:
            entry["status"] = "plane containment unverifiable"
        else:
            contained = plane_restriction(inst.form, list(plane)).is_zero()
            entry["status"] = "contained in hypersurface" if contained else "NOT contained"
            entry["contained"] = contained
        planes.append(entry)
    report["rich_planes"] = {"threshold": threshold, "planes": planes}
    if planes:
        report["rich_plane_node_count"] = {"expected_at_least": (n - 1) ** 2,
                                           "ok": len(nodes) >= (n - 1) ** 2}
    return report


# ------------------------------------------------------------------- fuzz


def _plane_coordinates(points: PointSet) -> PointSet:
    """Coordinates of coplanar points with respect to three of them."""
    F = points.field
    basis = _plane_basis(list(points))
    B = linalg.as_matrix(F, [[b.coords[i] for b in basis] for i in range(points.ambient_dim + 1)])
    coords = []
    for pt in points:
        sol = linalg.solve(F, B, list(pt.coords))
        if sol is None:
            raise ValueError("point is not in the plane")
        coords.append(ProjectivePoint(F, tuple(sol)))
    return PointSet(coords, points.labels, F, 2)


def max_on_conic(points: PointSet, budget: int = DEFAULT_BUDGET) -> tuple[int, list[str]]:
    """Most points of a set in P^N on one plane conic (N >= 2)."""
    if points.ambient_dim == 2:
        inc = max_on_plane_curve(points, 2, budget)
        return inc.count, inc.members
    best, members = min(len(points), 5), list(points.labels[:5])
    for plane in flats_with_at_least(points, 2, 6, budget):
        inc = max_on_plane_curve(_plane_coordinates(plane), 2, budget)
        if inc.count > best:
            best, members = inc.count, inc.members
    return best, members


def _curve_points(field, basis, count, rng):
    """``count`` distinct points sum(t^i * basis[i]) of a rational normal curve."""
    out, seen = [], set()
    while len(out) < count:
        t = field.random(rng)
        pt = combine(field, [(field.power(t, i), b) for i, b in enumerate(basis)])
        if pt.coords not in seen:
            seen.add(pt.coords)
            out.append(pt)
    return out


def fuzz_configuration(n: int, rng: np.random.Generator, field) -> tuple[PointSet, dict]:
    """A random set in P^4 with fewer than (n-1)^2 points, planted with a few
    lines, possibly a conic and a twisted cubic, within the degree-1 and
    degree-2 incidence budgets."""
    limit = (n - 1) ** 2 - 1
    for _ in range(200):
        s = int(rng.integers(max(6, limit // 2), limit + 1))
        pts, plants = [], []
        for _ in range(int(rng.integers(0, 3))):
            r = int(rng.integers(2, n))
            pts += _curve_points(field, [random_point(field, 4, rng) for _ in range(2)], r, rng)
            plants.append(("line", r))
        if rng.random() < 0.6:
            r = int(rng.integers(5, 2 * (n - 1) + 1))
            pts += _curve_points(field, [random_point(field, 4, rng) for _ in range(3)], r, rng)
            plants.append(("conic", r))
        if rng.random() < 0.3:
            r = int(rng.integers(6, 3 * (n - 1) + 1))
            pts += _curve_points(field, [random_point(field, 4, rng) for _ in range(4)], r, rng)
            plants.append(("twisted-cubic", r))
        while len(pts) < s:
            pts.append(random_point(field, 4, rng))
        if len(pts) > limit or len({pt.coords for pt in pts}) != len(pts):
            continue
        sigma = PointSet(pts)
        collinear = max_points_in_flat(sigma, 1)[0]
        if collinear > n - 1:
            continue
        conic = max_on_conic(sigma)[0]
        if conic > 2 * (n - 1):
            continue
        return sigma, {"plants": plants, "max_collinear": collinear, "max_on_conic": conic}
    raise GenericityFailure("could not build a configuration within budget")


def _image_maxima(sigma: PointSet, ks, rng, budget) -> tuple:
    proj = random_projection(4, sigma, rng)
    img = proj.image(sigma)
    return {k: max_on_plane_curve(img, k, budget, rng) for k in ks}


def conjecture15_fuzz(n: int, trials: int, rng: np.random.Generator, ks=(1, 2),
                      budget: int = DEFAULT_BUDGET, redraws: int = 3, field=None) -> dict:
    """Project random configurations to the plane and look for curves of degree
    k carrying more than k(n-1) image points.

    A violation is re-tested under ``redraws`` fresh projections; one that
    disappears was caused by a special projection center and is recorded as
    such.  Persistent ones are candidate counterexamples with genericity
    unverified.
    """
    from .scalar import GF

    if n < 4:
        raise PreconditionViolation("n must be at least 4")
    field = field or GF()
    seeds = rng.integers(0, 2**63, size=trials)
    rows, candidates, special = [], [], []
    for i, seed in enumerate(seeds):
        trng = np.random.default_rng(int(seed))
        sigma, info = fuzz_configuration(n, trng, field)
        maxima = _image_maxima(sigma, ks, trng, budget)
        row = {"trial": i, "seed": int(seed), "s": len(sigma), **info,
               "image_max": {k: v.count for k, v in maxima.items()},
               "status": {k: v.status for k, v in maxima.items()}}
        bad = [k for k, v in maxima.items() if v.count > k * (n - 1)]
        if bad:
            persistent = []
            for k in bad:
                again = [_image_maxima(sigma, (k,), trng, budget)[k].count for _ in range(redraws)]
                if all(c > k * (n - 1) for c in again):
                    persistent.append(k)
            row["violations"] = bad
            if persistent:
                row["label"] = "candidate counterexample, genericity unverified"
                candidates.append({"trial": i, "seed": int(seed), "k": persistent})
            else:
                row["label"] = "special projection center; vanished under redraw"
                special.append({"trial": i, "seed": int(seed), "k": bad})
        rows.append(row)
    return {"n": n, "trials": trials, "ks": list(ks), "field": field.spec,
            "violations": len(candidates), "candidates": candidates,
            "special_centers": special, "rows": rows}
