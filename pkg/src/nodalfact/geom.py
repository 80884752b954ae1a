"""Projective points, linear flats, incidence counting and linear projections."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from math import comb
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import linalg
from .errors import (
    BudgetExceeded,
    DimensionMismatch,
    DuplicatePoint,
    EmptySet,
    GenericityFailure,
    ParseError,
    PointOnCenter,
    PreconditionViolation,
)
from .scalar import Field, field_from_spec

DEFAULT_BUDGET = 10**7
_CHUNK = 20000


@dataclass(frozen=True)
class ProjectivePoint:
    """A point of P^N, stored with its first nonzero coordinate equal to 1."""

    field: Field
    coords: tuple

    def __post_init__(self):
        F = self.field
        raw = tuple(F(c) for c in self.coords)
        lead = next((c for c in raw if not F.is_zero(c)), None)
        if lead is None:
            raise ValueError("all homogeneous coordinates are zero")
        inv = F.inv(lead)
        object.__setattr__(self, "coords", tuple(F.mul(c, inv) for c in raw))

    @property
    def ambient_dim(self) -> int:
        return len(self.coords) - 1

    def __str__(self):
        return "(" + ":".join(self.field.to_str(c) for c in self.coords) + ")"

    def to_json(self) -> list[str]:
        return [self.field.to_str(c) for c in self.coords]


def point(field: Field, *coords) -> ProjectivePoint:
    if len(coords) == 1 and isinstance(coords[0], (list, tuple, np.ndarray)):
        coords = tuple(coords[0])
    return ProjectivePoint(field, tuple(coords))


def random_point(field: Field, N: int, rng: np.random.Generator) -> ProjectivePoint:
    while True:
        c = [field.random(rng) for _ in range(N + 1)]
        if any(not field.is_zero(x) for x in c):
            return ProjectivePoint(field, tuple(c))


def combine(field: Field, terms: Iterable[tuple[object, ProjectivePoint]]) -> ProjectivePoint:
    """The point with coordinates ``sum(c * pt.coords)``."""
    acc = None
    for c, pt in terms:
        v = [field.mul(c, x) for x in pt.coords]
        acc = v if acc is None else [field.add(a, b) for a, b in zip(acc, v)]
    return ProjectivePoint(field, tuple(acc))


class PointSet:
    """An ordered set of distinct points of one P^N, optionally labelled."""

    def __init__(self, points: Sequence[ProjectivePoint], labels: Sequence[str] | None = None,
                 field: Field | None = None, ambient_dim: int | None = None):
        points = list(points)
        if points:
            field = field or points[0].field
            ambient_dim = points[0].ambient_dim if ambient_dim is None else ambient_dim
        if field is None or ambient_dim is None:
            raise EmptySet("an empty PointSet needs an explicit field and ambient_dim")
        for pt in points:
            if pt.field != field:
                raise ValueError("points from different fields")
            if pt.ambient_dim != ambient_dim:
                raise DimensionMismatch("points live in different projective spaces")
        if labels is None:
            labels = [f"p{i}" for i in range(len(points))]
        labels = list(labels)
        if len(labels) != len(points):
            raise ValueError("labels and points differ in length")
        if len(set(labels)) != len(labels):
            raise DuplicatePoint("duplicate labels")
        seen = {}
        for lab, pt in zip(labels, points):
            if pt.coords in seen:
                raise DuplicatePoint(f"{lab} coincides with {seen[pt.coords]}")
            seen[pt.coords] = lab
        self.field = field
        self.ambient_dim = ambient_dim
        self.points = tuple(points)
        self.labels = tuple(labels)

    def __len__(self):
        return len(self.points)

    def __iter__(self) -> Iterator[ProjectivePoint]:
        return iter(self.points)

    def __getitem__(self, i) -> ProjectivePoint:
        return self.points[i]

    def __eq__(self, other):
        return (isinstance(other, PointSet) and self.field == other.field
                and self.points == other.points and self.labels == other.labels)

    def __repr__(self):
        return f"PointSet({len(self)} points in P^{self.ambient_dim} over {self.field.spec})"

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(label) from None

    def point(self, label: str) -> ProjectivePoint:
        return self.points[self.index(label)]

    def subset(self, idx: Iterable[int]) -> PointSet:
        idx = list(idx)
        return PointSet([self.points[i] for i in idx], [self.labels[i] for i in idx],
                        self.field, self.ambient_dim)

    def without(self, *labels: str) -> PointSet:
        drop = {self.index(lab) for lab in labels}
        return self.subset(i for i in range(len(self)) if i not in drop)

    def matrix(self):
        return linalg.as_matrix(self.field, [pt.coords for pt in self.points])

    def to_json(self) -> list[dict]:
        header = {"field": self.field.spec, "ambient_dim": self.ambient_dim}
        return [header] + [{"label": lab, "coords": pt.to_json()}
                           for lab, pt in zip(self.labels, self.points)]

    @classmethod
    def from_json(cls, data) -> PointSet:
        try:
            header, *rows = data
            field = field_from_spec(header["field"])
            dim = int(header["ambient_dim"])
            pts = [ProjectivePoint(field, tuple(field.parse(c) for c in r["coords"])) for r in rows]
            labels = [str(r["label"]) for r in rows]
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, DuplicatePoint):
                raise
            raise ParseError(f"malformed point set: {exc}") from exc
        if any(pt.ambient_dim != dim for pt in pts):
            raise ParseError("coordinate count does not match ambient_dim")
        return cls(pts, labels, field, dim)


@dataclass(frozen=True)
class LinearFlat:
    """The common zero set of independent linear forms (rows of ``cutting_forms``)."""

    field: Field
    ambient_dim: int
    cutting_forms: tuple

    def __post_init__(self):
        forms = tuple(tuple(self.field(x) for x in f) for f in self.cutting_forms)
        object.__setattr__(self, "cutting_forms", forms)
        if forms and linalg.rank(self.field, linalg.as_matrix(self.field, forms)) != len(forms):
            raise ValueError("cutting forms are linearly dependent")
        if not 0 < len(forms) <= self.ambient_dim:
            raise ValueError("a flat needs between 1 and N cutting forms")

    @property
    def dim(self) -> int:
        return self.ambient_dim - len(self.cutting_forms)

    @classmethod
    def through(cls, points: Sequence[ProjectivePoint]) -> LinearFlat:
        """The span of the given points."""
        F = points[0].field
        N = points[0].ambient_dim
        M = linalg.as_matrix(F, [pt.coords for pt in points])
        return cls(F, N, tuple(tuple(v) for v in linalg.nullspace(F, M)))

    def contains(self, pt: ProjectivePoint) -> bool:
        F = self.field
        return all(F.is_zero(linalg.dot(F, f, pt.coords)) for f in self.cutting_forms)

    def spanning_points(self) -> list[ProjectivePoint]:
        M = linalg.as_matrix(self.field, self.cutting_forms)
        return [ProjectivePoint(self.field, tuple(v)) for v in linalg.nullspace(self.field, M)]


@dataclass(frozen=True)
class Projection:
    """Linear projection P^N -> P^T given by T+1 independent linear forms."""

    field: Field
    source_dim: int
    forms: tuple
    center: LinearFlat = dc_field(compare=False)

    @property
    def target_dim(self) -> int:
        return len(self.forms) - 1

    @classmethod
    def from_forms(cls, field: Field, forms) -> Projection:
        forms = tuple(tuple(field(x) for x in f) for f in forms)
        N = len(forms[0]) - 1
        M = linalg.as_matrix(field, forms)
        if linalg.rank(field, M) != len(forms):
            raise ValueError("projection forms are dependent")
        return cls(field, N, forms, LinearFlat(field, N, forms))

    @classmethod
    def from_center(cls, center_points: Sequence[ProjectivePoint]) -> Projection:
        F = center_points[0].field
        M = linalg.as_matrix(F, [pt.coords for pt in center_points])
        return cls.from_forms(F, [tuple(v) for v in linalg.nullspace(F, M)])

    def image_coords(self, pt: ProjectivePoint) -> list:
        return [linalg.dot(self.field, f, pt.coords) for f in self.forms]

    def on_center(self, pt: ProjectivePoint) -> bool:
        return all(self.field.is_zero(v) for v in self.image_coords(pt))

    def __call__(self, pt: ProjectivePoint) -> ProjectivePoint:
        return project(self, pt)

    def then(self, other: Projection) -> Projection:
        """Composite ``other o self``."""
        F = self.field
        A = [[F(x) for x in row] for row in self.forms]
        B = [[F(x) for x in row] for row in other.forms]
        forms = [[_sum(F, (F.mul(B[i][k], A[k][j]) for k in range(len(A))))
                  for j in range(len(A[0]))] for i in range(len(B))]
        return Projection.from_forms(F, forms)

    def image(self, points: PointSet) -> PointSet:
        return PointSet([project(self, pt) for pt in points], points.labels,
                        self.field, self.target_dim)


def _sum(F: Field, values):
    acc = F.zero
    for v in values:
        acc = F.add(acc, v)
    return acc


def project(proj: Projection, pt: ProjectivePoint) -> ProjectivePoint:
    if pt.ambient_dim != proj.source_dim:
        raise DimensionMismatch(f"point in P^{pt.ambient_dim}, projection from P^{proj.source_dim}")
    img = proj.image_coords(pt)
    if all(proj.field.is_zero(v) for v in img):
        raise PointOnCenter(f"{pt} lies on the projection center")
    return ProjectivePoint(proj.field, tuple(img))


def span_rank(points: PointSet | Sequence[ProjectivePoint]) -> int:
    pts = list(points)
    if not pts:
        raise EmptySet("span_rank of an empty set")
    F = pts[0].field
    return linalg.rank(F, linalg.as_matrix(F, [pt.coords for pt in pts]))


def _iter_subset_chunks(s: int, r: int, chunk: int = _CHUNK) -> Iterator[np.ndarray]:
    it = itertools.combinations(range(s), r)
    while True:
        block = list(itertools.islice(it, chunk))
        if not block:
            return
        yield np.array(block, dtype=np.int64)


def _sample_subset_chunks(s: int, r: int, draws: int, rng: np.random.Generator,
                          chunk: int = _CHUNK) -> Iterator[np.ndarray]:
    left = draws
    while left > 0:
        b = min(chunk, left)
        yield np.argsort(rng.random((b, s)), axis=1)[:, :r]
        left -= b


def _closure_chunks(field: Field, vectors, r: int, chunks):
    """Yield, per chunk of r-subsets, a boolean (subsets x points) incidence
    matrix restricted to the independent subsets."""
    s, _ = linalg.shape(vectors)
    if field.kind == "fp":
        p = field.p
        V = np.asarray(vectors, dtype=np.int64)
        for idx in chunks:
            ok, K = linalg.batched_kernel(V[idx], p)
            if ok.any():
                yield (linalg.matmul_mod(K[ok], V.T, p) == 0).all(axis=1)
        return
    for idx in chunks:
        rows_inc = []
        for sub in idx:
            rows = [vectors[i] for i in sub]
            if linalg.rank(field, rows) < r:
                continue
            K = linalg.nullspace(field, rows)
            rows_inc.append([all(linalg.dot(field, k, vectors[i]) == 0 for k in K)
                             for i in range(s)])
        if rows_inc:
            yield np.array(rows_inc, dtype=bool)


def _subset_chunks(s: int, r: int, budget: int, rng):
    total = comb(s, r)
    if total <= budget:
        return _iter_subset_chunks(s, r), True
    if rng is None:
        raise BudgetExceeded(f"C({s},{r}) = {total} subsets exceeds budget {budget}")
    return _sample_subset_chunks(s, r, budget, rng), False


def max_span_closure(field: Field, vectors, r: int, budget: int = DEFAULT_BUDGET,
                     rng: np.random.Generator | None = None):
    """Largest number of ``vectors`` lying in the span of ``r`` independent ones.

    ``vectors`` is an ``s x m`` matrix (raw values, ``r < m``).  Every maximal
    answer is attained by the span of some independent ``r``-subset, so the
    search runs over ``r``-subsets.  If ``C(s, r)`` exceeds ``budget`` an
    ``rng`` must be supplied and ``budget`` random subsets are drawn instead.

    Returns ``(count, member_indices, exact)``.
    """
    s, m = linalg.shape(vectors)
    if r >= m:
        raise ValueError("r must be smaller than the vector length")
    if linalg.rank(field, vectors) <= r:
        return s, list(range(s)), True
    chunks, exact = _subset_chunks(s, r, budget, rng)
    best_count, best_members = 0, []
    for inc in _closure_chunks(field, vectors, r, chunks):
        counts = inc.sum(axis=1)
        j = int(np.argmax(counts))
        if counts[j] > best_count:
            best_count = int(counts[j])
            best_members = np.flatnonzero(inc[j]).tolist()
    return best_count, best_members, exact


def rich_spans(field: Field, vectors, r: int, at_least: int,
               budget: int = DEFAULT_BUDGET) -> list[frozenset[int]]:
    """All distinct spans of independent r-subsets holding >= ``at_least`` vectors."""
    s, _ = linalg.shape(vectors)
    if linalg.rank(field, vectors) <= r:
        return [frozenset(range(s))] if s >= at_least else []
    chunks, _ = _subset_chunks(s, r, budget, None)
    found: set[frozenset[int]] = set()
    for inc in _closure_chunks(field, vectors, r, chunks):
        for row in inc[inc.sum(axis=1) >= at_least]:
            found.add(frozenset(np.flatnonzero(row).tolist()))
    return sorted(found, key=lambda f: (-len(f), sorted(f)))


def flats_with_at_least(points: PointSet, k: int, at_least: int,
                        budget: int = DEFAULT_BUDGET) -> list[PointSet]:
    """Every k-flat spanned by the points that contains >= ``at_least`` of them."""
    spans = rich_spans(points.field, points.matrix(), k + 1, at_least, budget)
    return [points.subset(sorted(f)) for f in spans]


def max_points_in_flat(points: PointSet, k: int, budget: int = DEFAULT_BUDGET):
    """Maximum number of the points on a single k-flat, with a witness subset."""
    N = points.ambient_dim
    if not 1 <= k <= N - 1:
        raise PreconditionViolation(f"k must lie in [1, {N - 1}]")
    if len(points) < k + 1:
        raise PreconditionViolation(f"need at least {k + 1} points")
    count, members, _ = max_span_closure(points.field, points.matrix(), k + 1, budget)
    return count, points.subset(members)


def random_projection(N: int, avoid: PointSet | None, rng: np.random.Generator,
                      field: Field | None = None, max_retries: int = 100) -> Projection:
    """Projection P^N -> P^2 from a random (N-3)-flat.

    The center misses every point of ``avoid`` and the images of ``avoid`` are
    pairwise distinct; candidates failing either predicate are redrawn.
    """
    if N not in (3, 4):
        raise PreconditionViolation("projection source must be P^3 or P^4")
    if field is None:
        if avoid is None:
            raise ValueError("need a field when nothing is avoided")
        field = avoid.field
    for _ in range(max_retries):
        center = [random_point(field, N, rng) for _ in range(N - 2)]
        if span_rank(center) != N - 2:
            continue
        proj = Projection.from_center(center)
        if avoid is None or len(avoid) == 0:
            return proj
        if any(proj.on_center(pt) for pt in avoid):
            continue
        images = {project(proj, pt).coords for pt in avoid}
        if len(images) == len(avoid):
            return proj
    raise GenericityFailure(f"no valid projection after {max_retries} retries")


def projection_from_point(center: ProjectivePoint) -> Projection:
    """P^N -> P^(N-1) from a single point."""
    return Projection.from_center([center])
