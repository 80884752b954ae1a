"""Command-line front end.

Every command writes one JSON document (to ``--out`` or stdout) and a short
summary on stderr.  Exit codes: 0 factorial / success, 10 not factorial or
not separable, 20 fuzz found candidate violations, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass, field as dc_field
from pathlib import Path

import numpy as np

from .config import (
    bese_condition,
    configuration_profile,
    conjecture15_fuzz,
    eisenbud_koh_check,
    node_position_bounds,
)
from .construct import METHODS, SeparatorCertificate, separator_certificates
from .errors import (
    BudgetExceeded,
    DimensionMismatch,
    GenericityFailure,
    InvariantViolation,
    ParseError,
    PreconditionViolation,
)
from .geom import DEFAULT_BUDGET, PointSet
from .nodes import NodalInstance, example11, load_nodes, save_instance
from .normality import h4_rank, independent_conditions, reduce_mod_p
from .scalar import field_from_spec

SCHEMA = "report-v1"
EXIT_OK, EXIT_INPUT, EXIT_NOT_FACTORIAL, EXIT_FUZZ = 0, 2, 10, 20


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    field: str | None = None
    seed: int | None = None
    degree: int | None = None
    inputs: list[str] = dc_field(default_factory=list)
    out: str | None = None
    budget: int = DEFAULT_BUDGET
    certified: bool = False
    trials: int | None = None
    options: dict = dc_field(default_factory=dict)


def _summary(msg: str) -> None:
    print(msg, file=sys.stderr)


def _emit(doc, out: str | None) -> None:
    text = json.dumps(doc, indent=1, sort_keys=True, default=str) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _report(cfg: RunConfig, **body) -> dict:
    return {"schema": SCHEMA, "config": asdict(cfg), **body}


def _need_seed(args) -> int:
    if args.seed is None:
        raise InputError(f"{args.command} is randomized and needs --seed")
    return args.seed


def _load_points(path: str) -> tuple[PointSet, NodalInstance | None]:
    """A point-set array or an instance object."""
    try:
        data = json.loads(Path(path).read_text())
    except FileNotFoundError as exc:
        raise InputError(str(exc)) from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    if isinstance(data, list):
        return PointSet.from_json(data), None
    inst = load_nodes(path)
    return inst.nodes, inst


def _load_instance(path: str) -> NodalInstance:
    try:
        return load_nodes(path)
    except FileNotFoundError as exc:
        raise InputError(str(exc)) from exc


def _coerce_field(points: PointSet, spec: str | None) -> PointSet:
    if spec is None:
        return points
    target = field_from_spec(spec)
    if target == points.field:
        return points
    if points.field.kind == "qq" and target.kind == "fp":
        return reduce_mod_p(points, target.p)
    raise InputError(f"cannot move points from {points.field.spec} to {target.spec}")


def _coerce_instance(inst: NodalInstance, spec: str | None) -> NodalInstance:
    nodes = _coerce_field(inst.nodes, spec)
    if nodes is inst.nodes:
        return inst
    meta = dict(inst.metadata, reduced_from=inst.field.spec)
    return NodalInstance(inst.n, nodes, None, inst.provenance, meta)


# ---------------------------------------------------------------- commands


def cmd_example11(args, cfg: RunConfig) -> int:
    seed = _need_seed(args)
    if not 4 <= args.n <= 8:
        raise InputError("n must satisfy 4 <= n <= 8")
    field = field_from_spec(args.field or "fp:65521")
    inst = example11(args.n, np.random.default_rng(seed), field)
    inst.metadata["seed"] = seed
    if args.out:
        save_instance(inst, args.out)
    else:
        _emit(inst.to_json(), None)
    _summary(f"example11 n={args.n}: {inst.s} nodes on the plane x0=x1=0; "
             f"{inst.metadata['note']}")
    return EXIT_OK


def _factoriality_doc(inst: NodalInstance, args, cfg: RunConfig):
    verdict = h4_rank(inst, certified=args.certified, budget=args.budget)
    d = verdict.degree
    normality = independent_conditions(inst.nodes, d)
    try:
        profile = configuration_profile(inst.nodes, args.budget).to_json()
    except BudgetExceeded as exc:
        profile = {"skipped": str(exc)}
    certs = {}
    methods = METHODS if args.all_methods else ("DirectLinearAlgebra",)
    rng = np.random.default_rng(args.seed if args.seed is not None else 0)
    for lab in inst.nodes.labels:
        res = separator_certificates(inst.nodes, lab, d, rng, methods, budget=args.sample_budget)
        certs[lab] = {m: (r.to_json() if isinstance(r, SeparatorCertificate) else {"error": r})
                      for m, r in res.items()}
    separable = [lab for lab in inst.nodes.labels
                 if "error" not in certs[lab]["DirectLinearAlgebra"]]
    if (len(separable) == inst.s) != verdict.factorial:
        raise InvariantViolation("certificates disagree with the rank verdict")
    doc = {"verdict": verdict.to_json(), "normality": normality.to_json(),
           "profile": profile, "node_bounds": node_position_bounds(inst, args.budget),
           "certificates": certs, "certified_nodes": len(separable)}
    return verdict, doc


def cmd_factoriality(args, cfg: RunConfig) -> int:
    if args.all_methods:
        _need_seed(args)
    inst = _coerce_instance(_load_instance(args.instance), args.field)
    verdict, doc = _factoriality_doc(inst, args, cfg)
    _emit(_report(cfg, **doc), args.out)
    _summary(f"n={inst.n} s={verdict.s} I={verdict.I} (degree {verdict.degree}) "
             f"h4_rank={verdict.h4_rank} -> {'factorial' if verdict.factorial else 'not factorial'}; "
             f"{doc['certified_nodes']} separator certificates")
    return EXIT_OK if verdict.factorial else EXIT_NOT_FACTORIAL


def cmd_normality(args, cfg: RunConfig) -> int:
    points, inst = _load_points(args.points)
    points = _coerce_field(points, args.field)
    d = args.degree
    if d is None:
        if inst is None:
            raise InputError("--degree is required for a bare point set")
        d = 2 * inst.n - 5
    cfg.degree = d
    report = independent_conditions(points, d)
    _emit(_report(cfg, normality=report.to_json()), args.out)
    _summary(f"s={report.s} I={report.I} defect={report.defect} at degree {d}")
    return EXIT_OK


def cmd_config(args, cfg: RunConfig) -> int:
    points, inst = _load_points(args.points)
    points = _coerce_field(points, args.field)
    rng = np.random.default_rng(args.seed if args.seed is not None else 0)
    profile = configuration_profile(points, args.budget, rng=rng)
    doc = {"profile": profile.to_json()}
    if inst is not None and points is inst.nodes:
        doc["node_bounds"] = node_position_bounds(inst, args.budget)
    if args.degree is not None:
        if points.ambient_dim == 2 and args.degree >= 3:
            ok, rep = bese_condition(points, args.degree, args.budget, rng)
            doc["bese"] = rep
        if args.degree >= 2:
            ok, viol = eisenbud_koh_check(points, args.degree, args.budget)
            doc["eisenbud_koh"] = {"degree": args.degree, "passes": ok, "violation": viol}
    _emit(_report(cfg, **doc), args.out)
    _summary(f"max collinear {profile.max_collinear}, max in a 2-plane {profile.max_in_2plane}")
    return EXIT_OK


def cmd_separate(args, cfg: RunConfig) -> int:
    seed = _need_seed(args)
    points, inst = _load_points(args.points)
    points = _coerce_field(points, args.field)
    d = args.degree
    if d is None:
        if inst is None:
            raise InputError("--degree is required for a bare point set")
        d = 2 * inst.n - 5
    cfg.degree = d
    labels = [args.node] if args.node else list(points.labels)
    methods = tuple(args.methods.split(",")) if args.methods else METHODS
    unknown = set(methods) - set(METHODS)
    if unknown:
        raise InputError(f"unknown methods {sorted(unknown)}")
    rng = np.random.default_rng(seed)
    out, failures = {}, []
    for lab in labels:
        if lab not in points.labels:
            raise InputError(f"no point labelled {lab}")
        res = separator_certificates(points, lab, d, rng, methods, budget=args.sample_budget)
        out[lab] = {m: (r.to_json() if isinstance(r, SeparatorCertificate) else {"error": r})
                    for m, r in res.items()}
        if not any(isinstance(r, SeparatorCertificate) for r in res.values()):
            failures.append(lab)
    _emit(_report(cfg, degree=d, certificates=out, not_separable=failures), args.out)
    _summary(f"degree {d}: {len(labels) - len(failures)} of {len(labels)} points separated")
    return EXIT_NOT_FACTORIAL if failures else EXIT_OK


def cmd_fuzz15(args, cfg: RunConfig) -> int:
    seed = _need_seed(args)
    ks = tuple(int(k) for k in args.ks.split(","))
    field = field_from_spec(args.field) if args.field else None
    if field is not None and field.kind != "fp":
        raise InputError("the fuzzer works over a prime field")
    t0 = time.perf_counter()
    rep = conjecture15_fuzz(args.n, args.trials, np.random.default_rng(seed), ks,
                            args.budget, field=field)
    rep["seconds"] = time.perf_counter() - t0
    _emit(_report(cfg, fuzz=rep), args.out)
    _summary(f"n={args.n}, {args.trials} trials, k in {list(ks)}: "
             f"{rep['violations']} candidate violations, "
             f"{len(rep['special_centers'])} special projection centers")
    return EXIT_FUZZ if rep["violations"] else EXIT_OK


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nodalfact", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", help="qq or fp:<p>")
    common.add_argument("--seed", type=int)
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                        help="maximum number of subsets enumerated exactly")
    common.add_argument("--out", help="write the JSON report here instead of stdout")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("example11", parents=[common], help="generate an x0*g + x1*f instance")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_example11)

    p = sub.add_parser("factoriality", parents=[common], help="H_4 rank verdict of an instance")
    p.add_argument("instance")
    p.add_argument("--certified", action="store_true", help="compute ranks over Q")
    p.add_argument("--all-methods", action="store_true",
                   help="also try the geometric separator constructions")
    p.add_argument("--sample-budget", type=int, default=20000)
    p.set_defaults(func=cmd_factoriality)

    p = sub.add_parser("normality", parents=[common], help="independent conditions at a degree")
    p.add_argument("points")
    p.add_argument("--degree", type=int)
    p.set_defaults(func=cmd_normality)

    p = sub.add_parser("config", parents=[common], help="incidence profile of a point set")
    p.add_argument("points")
    p.add_argument("--degree", type=int)
    p.set_defaults(func=cmd_config)

    p = sub.add_parser("separate", parents=[common], help="separator certificates")
    p.add_argument("points")
    p.add_argument("--node")
    p.add_argument("--degree", type=int)
    p.add_argument("--methods", help="comma-separated subset of " + ",".join(METHODS))
    p.add_argument("--sample-budget", type=int, default=20000)
    p.set_defaults(func=cmd_separate)

    p = sub.add_parser("fuzz15", parents=[common], help="projection incidence fuzzer")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--ks", default="1,2")
    p.set_defaults(func=cmd_fuzz15)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    inputs = [getattr(args, k) for k in ("instance", "points") if getattr(args, k, None)]
    cfg = RunConfig(args.command, args.field, args.seed, getattr(args, "degree", None), inputs,
                    args.out, args.budget, getattr(args, "certified", False),
                    getattr(args, "trials", None),
                    {k: v for k, v in vars(args).items()
                     if k in ("n", "node", "methods", "ks", "all_methods", "sample_budget")})
    try:
        return args.func(args, cfg)
    except (InputError, ParseError, InvariantViolation, PreconditionViolation,
            DimensionMismatch, ValueError) as exc:
        _summary(f"input error: {exc}")
        return EXIT_INPUT
    except GenericityFailure as exc:
        _summary(f"generation failed: {exc}")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
