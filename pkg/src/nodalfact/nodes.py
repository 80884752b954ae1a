"""Node sets of hypersurfaces in P^4: generation, verification and file I/O."""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from pathlib import Path

import numpy as np

from . import linalg
from .errors import DuplicatePoint, GenericityFailure, InvariantViolation, ParseError
from .geom import PointSet, ProjectivePoint, max_points_in_flat
from .poly import HomogeneousForm, product
from .scalar import GF, Field, field_from_spec

PROVENANCES = ("Example11", "Ingested", "Synthetic")

OFF_PLANE_NOTE = ("only the nodes on the plane x0=x1=0 are listed; singular points "
                  "elsewhere are not searched for")


@dataclass
class NodalInstance:
    n: int
    nodes: PointSet
    form: HomogeneousForm | None = None
    provenance: str = "Synthetic"
    metadata: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")
        if self.nodes.ambient_dim != 4:
            raise ValueError("nodes must live in P^4")
        if self.form is not None and (self.form.degree != self.n or self.form.ambient_dim != 4):
            raise ValueError("form must be a degree-n form on P^4")

    @property
    def field(self) -> Field:
        return self.nodes.field

    @property
    def s(self) -> int:
        return len(self.nodes)

    def without(self, label: str) -> NodalInstance:
        meta = dict(self.metadata)
        meta["removed"] = meta.get("removed", []) + [label]
        return NodalInstance(self.n, self.nodes.without(label), self.form, self.provenance, meta)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "field": self.field.spec,
            "form": None if self.form is None else self.form.to_json(),
            "nodes": self.nodes.to_json(),
            "provenance": self.provenance,
            "metadata": self.metadata,
        }

    @classmethod
    def from_json(cls, data: dict) -> NodalInstance:
        try:
            field = field_from_spec(data["field"])
            nodes = PointSet.from_json(data["nodes"])
            if nodes.field != field:
                raise ParseError("node field differs from instance field")
            form = data.get("form")
            form = None if form is None else HomogeneousForm.from_json(form, field)
            provenance = data.get("provenance", "Ingested")
            return cls(int(data["n"]), nodes, form, provenance, dict(data.get("metadata", {})))
        except DuplicatePoint as exc:
            raise InvariantViolation(str(exc), str(exc).split()[0]) from exc
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, (ParseError, InvariantViolation)):
                raise
            raise ParseError(f"malformed instance: {exc}") from exc


class NodeChecker:
    """Precomputed first and second partials of one form."""

    def __init__(self, F: HomogeneousForm):
        if F.degree < 2:
            raise ValueError("a node needs degree >= 2")
        self.F = F
        self.grads = [F.partial(i) for i in range(F.ambient_dim + 1)]
        self.hess = [[g.partial(j) for j in range(F.ambient_dim + 1)] for g in self.grads]

    def hessian_rank(self, q: ProjectivePoint) -> int:
        H = [[h.value_at(q) for h in row] for row in self.hess]
        return linalg.rank(self.F.field, linalg.as_matrix(self.F.field, H))

    def is_singular(self, q: ProjectivePoint) -> bool:
        return self.F.vanishes_at(q) and all(g.vanishes_at(q) for g in self.grads)

    def __call__(self, q: ProjectivePoint) -> bool:
        return self.is_singular(q) and self.hessian_rank(q) == self.F.ambient_dim


def hessian_rank(F: HomogeneousForm, q: ProjectivePoint) -> int:
    return NodeChecker(F).hessian_rank(q)


def is_node(F: HomogeneousForm, q: ProjectivePoint) -> bool:
    """Ordinary double point: vanishing gradient and Hessian of corank one."""
    return NodeChecker(F)(q)


def _cross(F: Field, a, b):
    return (F.sub(F.mul(a[1], b[2]), F.mul(a[2], b[1])),
            F.sub(F.mul(a[2], b[0]), F.mul(a[0], b[2])),
            F.sub(F.mul(a[0], b[1]), F.mul(a[1], b[0])))


def example11(n: int, rng: np.random.Generator, field: Field | None = None,
              max_retries: int = 50) -> NodalInstance:
    """The hypersurface x0*g + x1*f = 0 with g, f products of n-1 linear forms.

    Its nodes on the plane x0=x1=0 are the (n-1)^2 points where a linear
    factor of g meets a linear factor of f.
    """
    if not 4 <= n <= 8:
        raise ValueError("example11 supports 4 <= n <= 8")
    field = field or GF()
    if field.kind != "fp":
        raise ValueError("example11 draws its factors over a prime field")
    x0 = HomogeneousForm.variable(field, 4, 0)
    x1 = HomogeneousForm.variable(field, 4, 1)
    for attempt in range(max_retries):
        g_lin = [[field.random(rng) for _ in range(5)] for _ in range(n - 1)]
        f_lin = [[field.random(rng) for _ in range(5)] for _ in range(n - 1)]
        pts, labels = [], []
        ok = True
        for i, a in enumerate(g_lin):
            for j, b in enumerate(f_lin):
                c = _cross(field, a[2:], b[2:])
                if all(field.is_zero(x) for x in c):
                    ok = False
                    break
                pts.append(ProjectivePoint(field, (0, 0) + c))
                labels.append(f"q{i}{j}")
            if not ok:
                break
        if not ok or len({pt.coords for pt in pts}) != len(pts):
            continue
        nodes = PointSet(pts, labels)
        g = product([HomogeneousForm.linear(field, a) for a in g_lin])
        f = product([HomogeneousForm.linear(field, b) for b in f_lin])
        F = x0 * g + x1 * f
        check = NodeChecker(F)
        if not all(check(q) for q in nodes):
            continue
        if max_points_in_flat(nodes, 1)[0] > n - 1:
            continue
        meta = {"attempts": attempt + 1, "note": OFF_PLANE_NOTE, "plane": "x0=x1=0"}
        return NodalInstance(n, nodes, F, "Example11", meta)
    raise GenericityFailure(f"example11({n}) failed after {max_retries} attempts")


def verify_instance(inst: NodalInstance, strict: bool = True) -> dict:
    """Re-check instance invariants; report per-node status.

    With ``strict`` the first failing node raises :class:`InvariantViolation`.
    """
    if len({pt.coords for pt in inst.nodes}) != len(inst.nodes):
        raise InvariantViolation("duplicate nodes")
    per_node = {}
    if inst.form is None:
        for lab in inst.nodes.labels:
            per_node[lab] = "unverified"
        return {"verified": False, "status": "unverified", "per_node": per_node,
                "reason": "no defining form supplied"}
    check = NodeChecker(inst.form)
    for lab, q in zip(inst.nodes.labels, inst.nodes):
        ok = check(q)
        per_node[lab] = "node" if ok else "not-a-node"
        if not ok and strict:
            raise InvariantViolation(f"{lab} is not a node of the form", lab)
    verified = all(v == "node" for v in per_node.values())
    return {"verified": verified, "status": "verified" if verified else "violations",
            "per_node": per_node}


def save_instance(inst: NodalInstance, path) -> None:
    Path(path).write_text(json.dumps(inst.to_json(), indent=1, sort_keys=True) + "\n")


def load_nodes(path, form_path=None) -> NodalInstance:
    """Read an instance file, or a bare point-set file (with an optional form file)."""
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    if isinstance(data, list):
        try:
            nodes = PointSet.from_json(data)
        except DuplicatePoint as exc:
            raise InvariantViolation(str(exc), str(exc).split()[0]) from exc
        form = None
        if form_path is not None:
            form = HomogeneousForm.from_json(json.loads(Path(form_path).read_text()), nodes.field)
        n = form.degree if form is not None else int(data[0].get("n", 0))
        if n < 3:
            raise ParseError("point-set file without form must carry 'n' in its header")
        return NodalInstance(n, nodes, form, "Ingested", {})
    if not isinstance(data, dict):
        raise ParseError("instance file must be a JSON object or point-set array")
    inst = NodalInstance.from_json(data)
    if form_path is not None:
        inst.form = HomogeneousForm.from_json(json.loads(Path(form_path).read_text()), inst.field)
    return inst
