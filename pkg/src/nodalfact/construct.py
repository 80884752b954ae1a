"""Explicit separating hypersurfaces.

Building blocks: combining forms so that extra points are swept into the
zero set (``sweep``), cones over a surface in a hyperplane picking up two
extra points (``two_point_cone``), and disjoint pairing of points by lines
avoiding a given point (``pair_lines``).  ``separator_pipeline`` produces a
verified certificate that a node can be separated from the others by a form
of degree 2n-5.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from . import linalg
from .config import bese_condition, bese_separator
from .errors import (
    GenericityFailure,
    InvariantViolation,
    NotSeparable,
    PointOnCenter,
    PreconditionViolation,
    ZeroForm,
)
from .geom import (
    PointSet,
    ProjectivePoint,
    combine,
    projection_from_point,
    random_point,
    random_projection,
    rich_spans,
    span_rank,
)
from .normality import independent_conditions, separating_form
from .poly import (
    HomogeneousForm,
    cone_pullback,
    restrict_to_line,
    substitute,
    univariate_roots,
)

METHODS = ("DirectLinearAlgebra", "ProjectionBeseCone", "SweepComposite")


# ------------------------------------------------------------ certificates


@dataclass
class SeparatorCertificate:
    """A form vanishing on ``required`` and nonzero at ``target``."""

    target: str
    target_point: ProjectivePoint
    degree: int
    form: HomogeneousForm
    method: str
    required: PointSet
    evaluation_log: dict = dc_field(default_factory=dict)
    seed: int | None = None
    details: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.form.degree != self.degree:
            raise InvariantViolation("certificate degree differs from form degree")
        F = self.form.field
        log = {}
        for lab, pt in zip(self.required.labels, self.required):
            v = self.form.value_at(pt)
            log[lab] = F.to_str(v)
            if not F.is_zero(v):
                raise InvariantViolation(f"form does not vanish at {lab}", lab)
        v = self.form.value_at(self.target_point)
        log[self.target] = F.to_str(v)
        if F.is_zero(v):
            raise InvariantViolation(f"form vanishes at the target {self.target}", self.target)
        self.evaluation_log = log

    @classmethod
    def for_point(cls, points: PointSet, p: str, form: HomogeneousForm, method: str,
                  **kw) -> SeparatorCertificate:
        return cls(p, points.point(p), form.degree, form, method, points.without(p), **kw)

    def to_json(self) -> dict:
        return {"target": self.target, "target_point": self.target_point.to_json(),
                "degree": self.degree, "method": self.method, "form": self.form.to_json(),
                "required": self.required.to_json(), "evaluation_log": self.evaluation_log,
                "seed": self.seed, "details": self.details}


def verify_certificate_json(data: dict) -> bool:
    """Re-check a serialized certificate by evaluating its form."""
    req = PointSet.from_json(data["required"])
    F = req.field
    form = HomogeneousForm.from_json(data["form"], F)
    target = ProjectivePoint(F, tuple(F.parse(c) for c in data["target_point"]))
    return (all(form.vanishes_at(pt) for pt in req) and not form.vanishes_at(target))


# ------------------------------------------------------------ hyperplanes


def hyperplane_through(field, through, avoid, N: int, rng: np.random.Generator,
                       max_retries: int = 50) -> HomogeneousForm:
    """A random linear form vanishing on ``through`` and nonzero on ``avoid``."""
    through, avoid = list(through), list(avoid)
    if through:
        M = linalg.as_matrix(field, [pt.coords for pt in through])
        K = linalg.nullspace(field, M, N + 1)
    else:
        K = [[field.one if i == j else field.zero for i in range(N + 1)] for j in range(N + 1)]
    if not K:
        raise PreconditionViolation("the points span everything; no hyperplane through them")
    for _ in range(max_retries):
        coeffs = [field.zero] * (N + 1)
        for kv in K:
            c = field.random(rng)
            coeffs = [field.add(a, field.mul(c, b)) for a, b in zip(coeffs, kv)]
        if all(field.is_zero(c) for c in coeffs):
            continue
        h = HomogeneousForm.linear(field, coeffs)
        if all(not h.vanishes_at(pt) for pt in avoid):
            return h
    raise GenericityFailure("no hyperplane with the requested incidences")


def pad_to_degree(form: HomogeneousForm, degree: int, avoid, rng) -> HomogeneousForm:
    """Multiply by random hyperplanes missing ``avoid`` until ``degree`` is reached."""
    if form.degree > degree:
        raise PreconditionViolation(f"form degree {form.degree} exceeds {degree}")
    while form.degree < degree:
        form = form * hyperplane_through(form.field, [], avoid, form.ambient_dim, rng)
    return form


# ----------------------------------------------------------------- sweep


def sweep(D0: HomogeneousForm, Dq_list, p: ProjectivePoint, Lambda: PointSet | None,
          Delta: PointSet | None) -> HomogeneousForm:
    """``D0 + sum c_q Dq`` with ``c_q = -D0(q)/Dq(q)``.

    ``D0`` vanishes on Lambda and not at p; each ``Dq`` vanishes on
    Lambda, Delta and p except at q.  The result vanishes on Lambda and Delta
    and equals D0 at p.
    """
    F, k = D0.field, D0.degree
    lam = list(Lambda) if Lambda is not None else []
    lam_labels = list(Lambda.labels) if Lambda is not None else []
    delta = list(Delta) if Delta is not None else []
    if {pt.coords for pt in lam} & {pt.coords for pt in delta}:
        raise PreconditionViolation("Lambda and Delta intersect")
    if p.coords in {pt.coords for pt in lam + delta}:
        raise PreconditionViolation("p lies in Lambda or Delta")
    for lab, pt in zip(lam_labels, lam):
        if not D0.vanishes_at(pt):
            raise PreconditionViolation(f"D0 does not vanish at {lab}")
    d0p = D0.value_at(p)
    if F.is_zero(d0p):
        raise PreconditionViolation("D0 vanishes at p")
    if len(Dq_list) != len(delta) or {q.coords for q, _ in Dq_list} != {pt.coords for pt in delta}:
        raise PreconditionViolation("need exactly one Dq per point of Delta")
    G = D0
    for q, Dq in Dq_list:
        if Dq.degree != k:
            raise PreconditionViolation(f"Dq for {q} has degree {Dq.degree}, expected {k}")
        for pt in lam + delta + [p]:
            if pt.coords != q.coords and not Dq.vanishes_at(pt):
                raise PreconditionViolation(f"Dq for {q} does not vanish at {pt}")
        dqq = Dq.value_at(q)
        if F.is_zero(dqq):
            raise PreconditionViolation(f"Dq vanishes at its own point {q}")
        c = F.neg(F.div(D0.value_at(q), dqq))
        G = G + Dq.scale(c)
    for pt in lam + delta:
        if not G.vanishes_at(pt):
            raise InvariantViolation(f"sweep result does not vanish at {pt}")
    if G.value_at(p) != d0p:
        raise InvariantViolation("sweep changed the value at p")
    return G


# -------------------------------------------------------- two-point cone


@dataclass
class ConeResult:
    form: HomogeneousForm
    vertex: ProjectivePoint
    p_prime: ProjectivePoint
    q_prime: ProjectivePoint
    attempts: int


def cone_from_vertex(X: HomogeneousForm, h: HomogeneousForm, v: ProjectivePoint) -> HomogeneousForm:
    """The cone over ``{X = 0} ∩ H`` with vertex v (not on H = {h = 0})."""
    F = X.field
    hv = h.value_at(v)
    if F.is_zero(hv):
        raise PreconditionViolation("vertex lies on the hyperplane")
    hc = h.to_dense()
    N = X.ambient_dim
    # x -> h(v) x - h(x) v maps P^N onto H and fixes H pointwise up to scale
    rows = []
    for i in range(N + 1):
        row = [F.neg(F.mul(hc[j], v.coords[i])) for j in range(N + 1)]
        row[i] = F.add(row[i], hv)
        rows.append(row)
    return substitute(X, rows)


def _line_meet(F, a, a2, b, b2) -> ProjectivePoint:
    """Intersection of the coplanar lines (a, a2) and (b, b2)."""
    M = linalg.as_matrix(F, [[a.coords[i], a2.coords[i], b.coords[i], b2.coords[i]]
                             for i in range(len(a.coords))])
    K = linalg.nullspace(F, M, 4)
    if len(K) != 1:
        raise GenericityFailure("lines do not meet in a single point")
    al, be = K[0][0], K[0][1]
    return combine(F, [(al, a), (be, a2)])


def two_point_cone(X: HomogeneousForm, h: HomogeneousForm, o: ProjectivePoint,
                   p: ProjectivePoint, q: ProjectivePoint, rng: np.random.Generator,
                   max_retries: int = 50) -> ConeResult:
    """Cone over the surface ``{X = 0} ∩ H`` through two points p, q off H.

    A random 2-plane through p and q meets H in a line; two rational zeros
    p', q' of X on that line give the vertex v as the meet of lines pp' and
    qq'.  The cone is nonzero at ``o`` (a point of H off X).
    """
    F = X.field
    if X.degree < 2:
        raise PreconditionViolation("X must have degree >= 2")
    if h.degree != 1:
        raise PreconditionViolation("h must be a linear form")
    if not h.vanishes_at(o) or X.vanishes_at(o):
        raise PreconditionViolation("o must lie on H and off X")
    if h.vanishes_at(p) or h.vanishes_at(q) or p.coords == q.coords:
        raise PreconditionViolation("p, q must be distinct points off H")
    N = X.ambient_dim
    hp, hq = h.value_at(p), h.value_at(q)
    for attempt in range(1, max_retries + 1):
        r = random_point(F, N, rng)
        if span_rank([p, q, r]) < 3:
            continue
        hr = h.value_at(r)
        a = combine(F, [(hq, p), (F.neg(hp), q)])
        b = combine(F, [(hr, p), (F.neg(hp), r)])
        if a.coords == b.coords:
            continue
        line = restrict_to_line(X, a, b)
        if line.is_zero():
            continue
        roots = univariate_roots(line)
        if len(roots) < 2:
            continue
        i, j = rng.choice(len(roots), size=2, replace=False)
        pp = combine(F, [(roots[i].coords[0], a), (roots[i].coords[1], b)])
        qq = combine(F, [(roots[j].coords[0], a), (roots[j].coords[1], b)])
        try:
            v = _line_meet(F, p, pp, q, qq)
        except GenericityFailure:
            continue
        C = cone_from_vertex(X, h, v)
        if C.is_zero() or C.vanishes_at(o):
            continue
        if not (C.vanishes_at(p) and C.vanishes_at(q)):
            raise InvariantViolation("two-point cone misses p or q")
        return ConeResult(C, v, pp, qq, attempt)
    raise GenericityFailure(f"no plane with two rational zeros after {max_retries} draws")


# ------------------------------------------------------------ pair lines


def pair_lines(points: PointSet, p: ProjectivePoint, m: int) -> list[tuple[str, str]]:
    """Disjoint pairs of points whose joining lines miss p.

    Points on a common line through p cannot be paired.  Pairing greedily
    across the two largest such groups yields at least min(r - m, r // 2)
    pairs when no m + 1 points are collinear with p.
    """
    if p.coords in {pt.coords for pt in points}:
        raise PreconditionViolation("p must not be one of the points")
    proj = projection_from_point(p)
    groups: dict[tuple, list[int]] = {}
    for i, pt in enumerate(points):
        groups.setdefault(proj(pt).coords, []).append(i)
    largest = max((len(g) for g in groups.values()), default=0)
    if largest > m:
        raise PreconditionViolation(f"{largest} points are collinear with p (m = {m})")
    pools = [list(g) for g in groups.values()]
    pairs = []
    while True:
        pools = sorted((g for g in pools if g), key=len, reverse=True)
        if len(pools) < 2:
            break
        i, j = pools[0].pop(), pools[1].pop()
        if span_rank([points[i], points[j], p]) != 3:
            raise InvariantViolation("paired line passes through p")
        pairs.append((points.labels[i], points.labels[j]))
    return pairs


# ------------------------------------------------------- plus-two helper


def plus_two(D0: HomogeneousForm, vanishing, Lambda: PointSet, o: ProjectivePoint,
             p: ProjectivePoint, q: ProjectivePoint, rng) -> HomogeneousForm:
    """From D0 (zero on Lambda, nonzero at o) build a form of the same degree
    that also vanishes at p and q.

    ``vanishing`` are forms vanishing on Lambda and at o; for each of p, q
    one of them nonzero there is multiplied by a hyperplane through the other
    point and padded with hyperplanes.
    """
    k = D0.degree
    dq = []
    for t, u in ((p, q), (q, p)):
        D = next((f for f in vanishing if f.degree < k and not f.vanishes_at(t)), None)
        if D is None:
            raise PreconditionViolation(f"no vanishing form of degree < {k} is nonzero at {t}")
        Dt = D * hyperplane_through(D0.field, [u], [t], D0.ambient_dim, rng)
        dq.append((t, pad_to_degree(Dt, k, [t], rng)))
    Delta = PointSet([p, q], ["p", "q"], D0.field, D0.ambient_dim)
    return sweep(D0, dq, o, Lambda, Delta)


# -------------------------------------------------------------- pipeline


def _direct(points: PointSet, p: str, d: int, **_):
    form = separating_form(points, p, d)
    return SeparatorCertificate.for_point(points, p, form, "DirectLinearAlgebra")


def _projection_bese(points: PointSet, p: str, d: int, rng, budget: int, **_):
    seed = int(rng.integers(0, 2**63))
    prng = np.random.default_rng(seed)
    proj = random_projection(points.ambient_dim, points, prng)
    img = proj.image(points)
    ok, report = bese_condition(img, d, budget, prng)
    if not ok:
        raise NotSeparable("plane incidence criterion fails for the projected set")
    curve = bese_separator(img, p, d, condition=ok)
    form = cone_pullback(curve, proj)
    center = proj.center.spanning_points()
    if not all(form.vanishes_at(c) for c in center):
        raise InvariantViolation("cone does not vanish on the projection center")
    details = {"center": [c.to_json() for c in center], "bese": report,
               "plane_curve": curve.to_json()}
    return SeparatorCertificate.for_point(points, p, form, "ProjectionBeseCone",
                                          seed=seed, details=details)


def _hyperplane_coords(points: PointSet, h: HomogeneousForm) -> tuple[PointSet, list]:
    """Coordinates of points of H in a basis of H, and that basis."""
    F = points.field
    N = points.ambient_dim
    basis = [ProjectivePoint(F, tuple(v))
             for v in linalg.nullspace(F, [h.to_dense()], N + 1)]
    B = linalg.as_matrix(F, [[b.coords[i] for b in basis] for i in range(N + 1)])
    pts = [ProjectivePoint(F, tuple(linalg.solve(F, B, list(pt.coords)))) for pt in points]
    return PointSet(pts, points.labels, F, N - 1), basis


def _lift_from_hyperplane(form: HomogeneousForm, basis, h: HomogeneousForm, rng) -> HomogeneousForm:
    """A form on P^N restricting to ``form`` on H (a cone from a point off H)."""
    F = form.field
    N = h.ambient_dim
    w = None
    while w is None or h.vanishes_at(w):
        w = random_point(F, N, rng)
    # columns: basis of H then w; inverse gives coordinates along the basis
    M = linalg.as_matrix(F, [[b.coords[i] for b in basis] + [w.coords[i]] for i in range(N + 1)])
    rows = []
    for e in range(N + 1):
        rhs = [F.one if i == e else F.zero for i in range(N + 1)]
        rows.append(linalg.solve(F, M, rhs))
    # rows[e] holds the coefficients of unit vector e; transpose to linear forms
    forms = [[rows[e][i] for e in range(N + 1)] for i in range(N)]
    return substitute(form, forms)


def _sweep_composite(points: PointSet, p: str, d: int, rng, budget: int, use_cone=True, **_):
    seed = int(rng.integers(0, 2**63))
    crng = np.random.default_rng(seed)
    F, N = points.field, points.ambient_dim
    ip = points.index(p)
    target = points[ip]
    # hyperplane through p holding the most points
    best = None
    for span in rich_spans(F, points.matrix(), N, 1, budget):
        if ip in span and (best is None or len(span) > len(best)):
            best = span
    inside = points.subset(sorted(best))
    H = hyperplane_through(F, list(inside), [], N, crng) if span_rank(inside) < N + 1 else None
    if H is None:
        raise NotSeparable("no hyperplane through p")
    inside = points.subset([i for i, pt in enumerate(points) if H.vanishes_at(pt)])
    outside = points.subset([i for i, pt in enumerate(points) if not H.vanishes_at(pt)])
    # separator of p inside H, of the smallest degree that works
    local, basis = _hyperplane_coords(inside, H)
    Xh = None
    for d1 in range(1, d + 1):
        try:
            Xh = separating_form(local, p, d1)
            break
        except NotSeparable:
            continue
    if Xh is None:
        raise NotSeparable(f"{p} is not separable inside the chosen hyperplane")
    X = _lift_from_hyperplane(Xh, basis, H, crng)
    details = {"hyperplane": H.to_json(), "inside": len(inside), "outside": len(outside),
               "inner_degree": Xh.degree}
    Lambda = inside.without(p)
    Delta = outside
    if use_cone and len(outside) >= 2:
        if X.degree == 1:
            X = X * hyperplane_through(F, [], [target], N, crng)
        q1, q2 = outside[0], outside[1]
        cone = two_point_cone(X, H, target, q1, q2, crng)
        D0 = cone.form
        Lambda = PointSet(list(Lambda) + [q1, q2], list(Lambda.labels) + list(outside.labels[:2]),
                          F, N)
        Delta = outside.subset(range(2, len(outside)))
        details["cone_vertex"] = cone.vertex.to_json()
        details["cone_attempts"] = cone.attempts
    else:
        D0 = X
    if D0.degree > d:
        raise NotSeparable(f"inner separator has degree {D0.degree} > {d}")
    D0 = pad_to_degree(D0, d, [target], crng)
    dq = []
    for j, q in enumerate(Delta):
        others = [pt for i, pt in enumerate(Delta) if i != j]
        cover = [pt for pt in Lambda if not H.vanishes_at(pt)] + others
        if cover:
            cover_set = PointSet(cover, [f"c{i}" for i in range(len(cover))], F, N)
            pairs = pair_lines(cover_set, q, len(cover))
            used = {lab for pr in pairs for lab in pr}
            groups = [[cover_set.point(a), cover_set.point(b)] for a, b in pairs]
            groups += [[pt] for lab, pt in zip(cover_set.labels, cover_set) if lab not in used]
        else:
            groups = []
        if 1 + len(groups) > d:
            raise NotSeparable(f"sweep form for {Delta.labels[j]} would exceed degree {d}")
        Dq = H
        for g in groups:
            Dq = Dq * hyperplane_through(F, g, [q], N, crng)
        dq.append((q, pad_to_degree(Dq, d, [q], crng)))
    G = sweep(D0, dq, target, Lambda, Delta)
    details["sweep_points"] = list(Delta.labels)
    return SeparatorCertificate.for_point(points, p, G, "SweepComposite", seed=seed,
                                          details=details)


_BUILDERS = {"DirectLinearAlgebra": _direct, "ProjectionBeseCone": _projection_bese,
             "SweepComposite": _sweep_composite}


def separator_certificates(points: PointSet, p: str, d: int, rng: np.random.Generator,
                           methods=METHODS, budget: int = 20000) -> dict:
    """Try every method; map method name to a certificate or a failure reason.

    Geometric methods must never succeed where linear algebra fails.
    """
    out = {}
    for name in methods:
        try:
            out[name] = _BUILDERS[name](points, p, d, rng=rng, budget=budget)
        except (NotSeparable, GenericityFailure, PreconditionViolation, PointOnCenter,
                ZeroForm) as exc:
            out[name] = f"{type(exc).__name__}: {exc}"
    direct = out.get("DirectLinearAlgebra")
    if isinstance(direct, str):
        for name, res in out.items():
            if isinstance(res, SeparatorCertificate):
                raise InvariantViolation(f"{name} separated {p} although linear algebra cannot")
    return out


def separator_pipeline(inst, p: str, rng: np.random.Generator | None = None,
                       degree: int | None = None) -> SeparatorCertificate:
    """A verified degree-(2n-5) form through every node except ``p``."""
    d = 2 * inst.n - 5 if degree is None else degree
    rng = rng if rng is not None else np.random.default_rng(0)
    try:
        return _direct(inst.nodes, p, d)
    except NotSeparable:
        report = independent_conditions(inst.nodes, d, separability=False, witness=False)
        if report.defect == 0:
            raise InvariantViolation(f"{p} not separable although the nodes are {d}-normal")
        raise
