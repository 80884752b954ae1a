"""Independent conditions imposed by points on forms of a given degree.

The rank ``I`` of the points-by-monomials evaluation matrix decides
d-normality (``defect = s - I``).  For the node set of a nodal hypersurface
of degree n in P^4 the rank of H_4 is ``s - I + 1`` with ``I`` taken at
degree ``2n - 5``, so the hypersurface is factorial exactly when the nodes
are (2n-5)-normal.
"""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field as dc_field

from . import linalg
from .errors import BudgetExceeded, NotSeparable
from .geom import DEFAULT_BUDGET, PointSet, ProjectivePoint
from .poly import HomogeneousForm, evaluation_matrix as _eval_rows, monomial_basis
from .scalar import DEFAULT_PRIME, GF, Field

FALLBACK_PRIMES = (DEFAULT_PRIME, 65519, 2147483647)


@dataclass
class EvaluationMatrix:
    points: PointSet
    degree: int
    entries: object

    @property
    def shape(self):
        return linalg.shape(self.entries)

    def row(self, i: int):
        return self.entries[i]

    def rank(self) -> int:
        return linalg.rank(self.points.field, self.entries)


def evaluation_matrix(points: PointSet, d: int) -> EvaluationMatrix:
    entries = _eval_rows(points.field, [pt.coords for pt in points], points.ambient_dim, d)
    return EvaluationMatrix(points, d, entries)


def conditions_rank(points: PointSet, d: int) -> int:
    if len(points) == 0:
        return 0
    return evaluation_matrix(points, d).rank()


@dataclass
class NormalityReport:
    degree: int
    s: int
    I: int
    field: str
    separable: list[bool] | None = None
    labels: list[str] = dc_field(default_factory=list)
    dependent_witness: list[str] | None = None
    columns: int = 0

    @property
    def defect(self) -> int:
        return self.s - self.I

    @property
    def d_normal(self) -> bool:
        return self.defect == 0

    def non_separable(self) -> list[str]:
        if self.separable is None:
            return []
        return [lab for lab, ok in zip(self.labels, self.separable) if not ok]

    def to_json(self) -> dict:
        out = asdict(self)
        out["defect"] = self.defect
        out["d_normal"] = self.d_normal
        out["dependent_witness_note"] = "dependent subset, minimal under single deletions"
        return out


def _dependent_witness(field: Field, M, labels) -> list[str] | None:
    """A dependent set of rows, shrunk until no single row can be dropped."""
    rows, _ = linalg.shape(M)
    prefix = None
    r = 0
    for j in range(rows):
        rj = linalg.rank(field, linalg.take_rows(M, range(j + 1)))
        if rj == r:
            prefix = list(range(j + 1))
            break
        r = rj
    if prefix is None:
        return None
    keep = list(prefix)
    for i in list(prefix):
        trial = [k for k in keep if k != i]
        if trial and linalg.rank(field, linalg.take_rows(M, trial)) < len(trial):
            keep = trial
    return [labels[i] for i in keep]


def independent_conditions(points: PointSet, d: int, separability: bool = True,
                           witness: bool = True) -> NormalityReport:
    """Rank of the degree-d evaluation matrix, plus per-point separability.

    Point i is separable iff dropping its row lowers the rank by one.
    """
    if len(points) == 0:
        raise ValueError("need at least one point")
    if d < 0:
        raise ValueError("degree must be nonnegative")
    F = points.field
    E = evaluation_matrix(points, d)
    I = E.rank()
    s = len(points)
    report = NormalityReport(d, s, I, F.spec, labels=list(points.labels), columns=E.shape[1])
    if separability:
        if I == s:
            report.separable = [True] * s
        else:
            flags = []
            for i in range(s):
                rest = linalg.take_rows(E.entries, [k for k in range(s) if k != i])
                flags.append(linalg.rank(F, rest) == I - 1)
            report.separable = flags
    if witness and I < s:
        report.dependent_witness = _dependent_witness(F, E.entries, points.labels)
    return report


def forms_through(points: PointSet, d: int) -> list[HomogeneousForm]:
    """Basis of the degree-d forms vanishing on all the points."""
    F, N = points.field, points.ambient_dim
    if len(points) == 0:
        cols = len(monomial_basis(N, d))
        return [HomogeneousForm.from_dense(F, N, d, [1 if i == j else 0 for i in range(cols)])
                for j in range(cols)]
    E = evaluation_matrix(points, d)
    return [HomogeneousForm.from_dense(F, N, d, v) for v in linalg.nullspace(F, E.entries)]


def separating_form(points: PointSet, p: str, d: int) -> HomogeneousForm:
    """A degree-d form vanishing on every point except ``p`` and nonzero at ``p``."""
    F, N = points.field, points.ambient_dim
    j = points.index(p)
    E = evaluation_matrix(points, d)
    target = [F.one if i == j else F.zero for i in range(len(points))]
    sol = linalg.solve(F, E.entries, target)
    if sol is None:
        raise NotSeparable(f"{p} imposes a dependent condition on degree-{d} forms")
    form = HomogeneousForm.from_dense(F, N, d, sol)
    for i, pt in enumerate(points):
        v = form.value_at(pt)
        if (i == j) == F.is_zero(v):
            raise AssertionError(f"separating form failed re-verification at {points.labels[i]}")
    return form


# --------------------------------------------------------------- fields


def reduce_mod_p(points: PointSet, p: int = DEFAULT_PRIME) -> PointSet:
    """Reduce a Q-rational point set modulo p (must stay distinct)."""
    if points.field.kind != "qq":
        raise ValueError("reduction needs rational points")
    Fp = GF(p)
    reduced = []
    for pt in points:
        coords = [Fp(c) for c in pt.coords]
        reduced.append(ProjectivePoint(Fp, tuple(coords)))
    return PointSet(reduced, points.labels, Fp, points.ambient_dim)


def cross_field_rank(points: PointSet, d: int, primes=FALLBACK_PRIMES) -> dict:
    """Compare the rank over Q with ranks of reductions mod several primes."""
    I_q = conditions_rank(points, d)
    mods = {}
    for p in primes:
        try:
            mods[p] = conditions_rank(reduce_mod_p(points, p), d)
        except (ZeroDivisionError, ValueError):
            mods[p] = None
    return {"qq": I_q, "fp": mods, "agree": all(v == I_q for v in mods.values() if v is not None)}


def _rank_for_verdict(points: PointSet, d: int, certified: bool, trace: list) -> int:
    F = points.field
    if F.kind == "fp":
        if certified:
            trace.append({"criterion": "certified", "note": "coordinates live in F_p; F_p rank is final"})
        return conditions_rank(points, d)
    if certified:
        trace.append({"criterion": "certified", "note": "rank computed over Q"})
        return conditions_rank(points, d)
    best = None
    for p in FALLBACK_PRIMES:
        try:
            red = reduce_mod_p(points, p)
        except (ZeroDivisionError, ValueError):
            continue
        r = conditions_rank(red, d)
        trace.append({"criterion": "reduction", "prime": p, "rank": r})
        best = r if best is None else max(best, r)
        if best == len(points):
            break
    if best is None:
        trace.append({"criterion": "reduction", "note": "no usable prime; computed over Q"})
        best = conditions_rank(points, d)
    return best


@dataclass
class FactorialityVerdict:
    n: int
    s: int
    I: int
    degree: int
    field: str
    trace: list = dc_field(default_factory=list)
    seconds: float = 0.0

    @property
    def h4_rank(self) -> int:
        return self.s - self.I + 1

    @property
    def defect(self) -> int:
        return self.s - self.I

    @property
    def factorial(self) -> bool:
        return self.h4_rank == 1

    def to_json(self) -> dict:
        out = asdict(self)
        out.update(h4_rank=self.h4_rank, defect=self.defect, factorial=self.factorial)
        return out


def h4_rank(inst, certified: bool = False, shortcuts: bool = True,
            budget: int = DEFAULT_BUDGET) -> FactorialityVerdict:
    """Rank of H_4 of the nodal hypersurface from its node set."""
    from .config import eisenbud_koh_check

    n = inst.n
    if n < 3:
        raise ValueError("need n >= 3 so that 2n-5 >= 1")
    d = 2 * n - 5
    pts = inst.nodes
    s = len(pts)
    t0 = time.perf_counter()
    trace: list = []
    I = _rank_for_verdict(pts, d, certified, trace)
    trace.insert(0, {"criterion": "direct-rank", "degree": d, "rank": I, "defect": s - I})
    if shortcuts:
        bound = (n - 1) ** 2 / 4
        entry = {"criterion": "count-bound", "bound": bound, "applies": s <= bound}
        if s <= bound:
            entry["agrees"] = I == s
        trace.append(entry)
        if d >= 2:
            try:
                ok, violation = eisenbud_koh_check(pts, d, budget=budget)
                entry = {"criterion": "eisenbud-koh", "degree": d, "passes": ok,
                         "violation": violation}
                if ok:
                    entry["agrees"] = I == s
                trace.append(entry)
            except BudgetExceeded as exc:
                trace.append({"criterion": "eisenbud-koh", "skipped": str(exc)})
    return FactorialityVerdict(n, s, I, d, pts.field.spec, trace, time.perf_counter() - t0)
