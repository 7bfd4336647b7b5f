"""Command-line front end.

Subcommands: validate, compare, post, catalog. All I/O is JSON. Exit codes:
0 = pass/Homotopic, 1 = violations/Distinguished, 2 = invalid input or
schema/IO error.
"""

import argparse
import sys

from .classify import (
    VERDICT_HOMOTOPIC,
    VERDICT_INVALID,
    catalog,
    classify_pair,
    classify_post_pair,
)
from .errors import NematicTopoError, SchemaError
from .field import Resolution, check_tangency
from .invariant import BoundaryLift, boundary_degree, edge_chain, face_sum_residuals
from .io import load_field, load_geometry, load_post_params, read_json, write_json
from .lift import LiftSeed


def _resolution(args):
    res = Resolution()
    if args.theta_max is not None:
        if args.theta_max <= 0:
            raise SchemaError("--theta-max must be positive")
        res.theta_max = args.theta_max
    if args.level is not None:
        if args.level < 0:
            raise SchemaError("--level must be nonnegative")
        res.level = args.level
    if args.max_depth is not None:
        if args.max_depth <= 0:
            raise SchemaError("--max-depth must be positive")
        res.max_depth = args.max_depth
    if args.grid is not None:
        if args.grid < 4:
            raise SchemaError("--grid must be at least 4")
        res.grid = args.grid
    return res


def _seed(args, domain=None):
    sign = -1 if args.seed_sign == "-" else 1
    anchor = getattr(domain, "anchor_edge", None)
    return LiftSeed(anchor_edge=anchor, sign=sign)


def _emit(doc, args):
    text = write_json(doc, args.out)
    if not args.out:
        print(text)


def _load_domain(args):
    if args.post_params:
        return load_post_params(read_json(args.post_params)), True
    if not args.geometry:
        raise SchemaError("provide --geometry or --post-params")
    return load_geometry(read_json(args.geometry)), False


def cmd_validate(args):
    domain, is_post = _load_domain(args)
    res = _resolution(args)
    cx = domain.complex if is_post else domain
    field = load_field(read_json(args.field[0]), domain, res)
    diagnostics = {"version": 1, "kind": "validation", "checks": {}}
    ok = True
    rep = check_tangency(field, cx, res=res,
                         face_ids=sorted(field.tangent_faces) or None)
    diagnostics["checks"]["tangency"] = {
        "ok": rep.ok,
        "violations": [
            {"cell": c, "angle": float(a)} for c, _, a in rep.violations[:16]
        ],
    }
    ok = ok and rep.ok
    try:
        seed = _seed(args, domain if is_post else None)
        bd = boundary_degree(field, cx, res=res, seed=seed)
        diagnostics["checks"]["boundary_degree"] = {"ok": bd == 0, "value": bd}
        ok = ok and bd == 0
    except NematicTopoError as exc:
        diagnostics["checks"]["boundary_degree"] = {"ok": False, "error": str(exc)}
        ok = False
    diagnostics["ok"] = ok
    _emit(diagnostics, args)
    return 0 if ok else 1


def cmd_compare(args):
    domain, is_post = _load_domain(args)
    if is_post:
        raise SchemaError("compare runs on polyhedral geometry; use `post`")
    res = _resolution(args)
    f0 = load_field(read_json(args.field[0]), domain, res)
    f1 = load_field(read_json(args.field[1]), domain, res)
    report = classify_pair(f0, f1, domain, res=res, seed=_seed(args))
    _emit(report.to_json(), args)
    if report.verdict == VERDICT_HOMOTOPIC:
        return 0
    if report.verdict == VERDICT_INVALID:
        return 2
    return 1


def cmd_post(args):
    if not args.post_params:
        raise SchemaError("post requires --post-params")
    if not args.mode:
        raise SchemaError("post requires --mode {N,T}")
    domain = load_post_params(read_json(args.post_params))
    res = _resolution(args)
    if args.grid is None:
        res.grid = 32
    f0 = load_field(read_json(args.field[0]), domain, res)
    f1 = load_field(read_json(args.field[1]), domain, res)
    report = classify_post_pair(
        f0, f1, domain, res=res, seed=_seed(args, domain), mode=args.mode
    )
    _emit(report.to_json(), args)
    if report.verdict == VERDICT_HOMOTOPIC:
        return 0
    if report.verdict == VERDICT_INVALID:
        return 2
    return 1


def cmd_catalog(args):
    domain, is_post = _load_domain(args)
    res = _resolution(args)
    if is_post and args.grid is None:
        res.grid = 32
    fields = [load_field(read_json(p), domain, res) for p in args.field]
    atlas = catalog(fields, domain, res=res,
                    seed=_seed(args, domain if is_post else None), mode=args.mode)
    atlas_doc = {"version": 1, "kind": "atlas", **atlas}
    _emit(atlas_doc, args)
    return 0


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="nematic-topo",
        description="Homotopy classification of boundary director fields",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn, nfields in (
        ("validate", cmd_validate, 1),
        ("compare", cmd_compare, 2),
        ("post", cmd_post, 2),
        ("catalog", cmd_catalog, "+"),
    ):
        sp = sub.add_parser(name)
        sp.add_argument("--geometry", help="polyhedron JSON document")
        sp.add_argument("--post-params", help="post-domain parameter document")
        sp.add_argument("--field", action="append", required=True,
                        help="field JSON document (repeatable)")
        sp.add_argument("--mode", choices=["N", "T"], help="top-plate mode")
        sp.add_argument("--theta-max", type=float)
        sp.add_argument("--level", type=int)
        sp.add_argument("--max-depth", type=int)
        sp.add_argument("--grid", type=int)
        sp.add_argument("--seed-sign", choices=["+", "-"], default="+")
        sp.add_argument("--out", help="write the JSON report here")
        sp.set_defaults(fn=fn, nfields=nfields)

    args = parser.parse_args(argv)
    want = args.nfields
    if want != "+" and len(args.field) != want:
        print(f"{args.command}: expected {want} --field argument(s)", file=sys.stderr)
        return 2
    try:
        return args.fn(args)
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NematicTopoError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
