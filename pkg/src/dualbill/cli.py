"""Command-line front end: ``dualbill <command> [options]``.

Every command prints one JSON report (or CSV/SVG for ``simulate``) carrying
``"schema": "1"``.  Exit status: 0 when all checks pass, 1 when a check fails
or the library raises, 2 on malformed input.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

import mpmath

from . import dualbilliard as db
from . import hessianlab as hl
from . import integrals as ig
from . import projbilliard as pb
from . import quasihomog as qh
from .errors import BilliardError
from .exactnum import format_scalar, parse_scalar, precision_bits, to_approx

SCHEMA = "1"


class ConfigError(Exception):
    pass


def _parse_json(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{what} is not valid JSON: {exc}") from exc


def _load_spec(text: str) -> db.BilliardSpec:
    """Inline JSON, or a path to a JSON file (optionally prefixed with @)."""
    path = text[1:] if text.startswith("@") else text
    if not text.lstrip().startswith("{") and os.path.exists(path):
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    data = _parse_json(text, "--spec")
    if not isinstance(data, dict):
        raise ConfigError("--spec must be a JSON object")
    try:
        return db.spec_from_json(data)
    except (BilliardError, KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad --spec: {exc}") from exc


def _load_field(text: str) -> pb.TransversalField:
    data = _parse_json(text, "--field")
    kind = data.get("field") if isinstance(data, dict) else None
    try:
        if kind == "a":
            return pb.FieldA(Fraction(str(data["rho"])))
        if kind in db.CATALOG_KINDS:
            return pb.CatalogField(kind)
        if kind == "pencil_dual":
            return pb.PencilDualField(db.spec_from_json(data["spec"]))
    except (BilliardError, KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad --field: {exc}") from exc
    raise ConfigError(f"unknown field {kind!r}")


def _pair(text: str) -> tuple:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2:
        raise ConfigError(f"expected two comma-separated values, got {text!r}")
    try:
        return tuple(parse_scalar(p) for p in parts)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _rho(text: str) -> Fraction:
    try:
        return Fraction(text)
    except ValueError as exc:
        raise ConfigError(f"rho must be rational, got {text!r}") from exc


def _approx_tree(obj):
    """Render exact scalar strings as decimals."""
    if isinstance(obj, dict):
        return {k: _approx_tree(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_approx_tree(v) for v in obj]
    if isinstance(obj, str):
        try:
            x = parse_scalar(obj)
        except (ValueError, BilliardError):
            return obj
        with mpmath.workprec(precision_bits()):
            return mpmath.nstr(to_approx(x), 30)
    return obj


# ---------------------------------------------------------------- commands


def cmd_catalog(args) -> tuple[dict, bool]:
    entries = []
    for spec in db.catalog_specs():
        entries.append(
            {
                "spec": db.spec_to_json(spec),
                "residues": db.residue_report(spec).to_json(),
                "integral": ig.catalog_integral(spec).to_str(),
            }
        )
    return {"command": "catalog", "entries": entries}, True


def cmd_verify(args) -> tuple[dict, bool]:
    spec = _load_spec(args.spec)
    plan = ig.SamplePlan(points=args.samples, values=args.values, height=args.height, seed=args.seed)
    report = ig.verify_invariance(ig.catalog_integral(spec), spec, plan)
    out = {"command": "verify", "spec": db.spec_to_json(spec), "report": report.to_json()}
    return out, report.passed


def cmd_residues(args) -> tuple[dict, bool]:
    spec = _load_spec(args.spec)
    rep = db.residue_report(spec)
    out = {"command": "residues", **rep.to_json()}
    return out, rep.total == 4


def cmd_classify(args) -> tuple[dict, bool]:
    rho = _rho(args.rho)
    closed = qh.classify_rho(rho)
    orbit = qh.classify_rho_by_orbit(rho)
    out = {"command": "classify", "rho": format_scalar(rho), **closed.to_json()}
    out["routes_agree"] = closed == orbit
    if args.build_primitive:
        prim = qh.build_primitive(rho)
        out["primitive"] = prim.to_json()
        out["primitive"]["quasi_invariant"] = qh.is_eta_quasi_invariant(prim.poly, rho)
        return out, closed == orbit and out["primitive"]["quasi_invariant"]
    return out, closed == orbit


def cmd_simulate(args):
    fld = _load_field(args.field)
    s0 = pb.FlowState(_pair(args.x), _pair(args.v))
    traj = pb.simulate(pb.TABLE, fld, s0, args.steps, approx=args.approx)
    ok = traj.psi_conserved() if traj.psi_start is not None else True
    if args.format == "csv":
        return traj.to_csv(), ok
    if args.format == "svg":
        return traj.to_svg(), ok
    out = {"command": "simulate", "field": pb.field_to_json(fld), "trajectory": traj.to_json()}
    return out, ok


def cmd_dualize(args) -> tuple[dict, bool]:
    if args.spec:
        spec = _load_spec(args.spec)
        if isinstance(spec, db.CatalogSpec):
            fld = pb.CatalogField(spec.kind)
        elif isinstance(spec, db.ExoticA):
            fld = pb.FieldA(spec.rho)
        else:
            fld = pb.PencilDualField(spec)
        psi = pb.psi_catalog(fld)
        const = pb.dual_constant(ig.catalog_integral(spec), psi)
        out = {
            "command": "dualize",
            "spec": db.spec_to_json(spec),
            "field": pb.field_to_json(fld),
            "psi": str(psi),
            "constant": None if const is None else format_scalar(const),
        }
        return out, const is not None
    if args.field:
        fld = _load_field(args.field)
        if isinstance(fld, pb.FieldA):
            spec = db.ExoticA.from_rho(fld.rho)
        elif isinstance(fld, pb.CatalogField):
            spec = db.CatalogSpec(fld.kind)
        else:
            spec = fld.spec
        return {"command": "dualize", "field": pb.field_to_json(fld), "spec": db.spec_to_json(spec)}, True
    raise ConfigError("dualize needs --spec or --field")


def _factored_g(text: str) -> hl.FactoredG:
    data = _parse_json(text, "--factors")
    try:
        return hl.FactoredG(
            int(data.get("p", 2)),
            int(data.get("q", 1)),
            Fraction(str(data.get("alpha", 0))),
            Fraction(str(data.get("beta", 0))),
            tuple((parse_scalar(str(c)), Fraction(str(mu))) for c, mu in data.get("primes", [])),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad --factors: {exc}") from exc


def cmd_hessian(args) -> tuple[dict, bool]:
    out: dict = {"command": "hessian"}
    ok = True
    if args.factors:
        res = hl.hessian_on_curve(_factored_g(args.factors))
        out["on_curve"] = res.to_json()
    if args.spec:
        spec = _load_spec(args.spec)
        out["spec"] = db.spec_to_json(spec)
        rep = db.residue_report(spec)
        origin = dict(rep.finite_poles).get(Fraction(0))
        if origin is not None:
            g = hl.germ_at_origin(spec)
            res = hl.hessian_on_curve(g)
            out["germ"] = str(g)
            out["on_curve"] = res.to_json()
            out["origin_residue"] = format_scalar(origin)
            ok = ok and hl.residue_from_hessian(res) == origin
        ode = hl.ode_check(spec)
        out["ode"] = ode.to_json()
        ok = ok and ode.passed
    if not args.factors and not args.spec:
        raise ConfigError("hessian needs --spec or --factors")
    return out, ok


def cmd_equiv(args) -> tuple[dict, bool]:
    rep = ig.equivalence_pullback_check(args.case, samples=args.samples, seed=args.seed)
    return {"command": "equiv", **rep}, rep["passed"]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dualbill", description="Exact checks for integrable dual and projective billiards.")
    p.add_argument("--approx", action="store_true", help="render scalars as decimals")
    p.add_argument("--output", "-o", help="write the report to this file instead of stdout")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("catalog", help="list catalog structures with residues and integrals")

    v = sub.add_parser("verify", help="exact invariance check of the catalog integral")
    v.add_argument("--spec", required=True)
    v.add_argument("--samples", type=int, default=32, help="boundary points")
    v.add_argument("--values", type=int, default=8, help="chart values per boundary point")
    v.add_argument("--height", type=int, default=10 ** 6)
    v.add_argument("--seed", type=int, default=0)

    r = sub.add_parser("residues", help="residue report of a structure")
    r.add_argument("--spec", required=True)

    c = sub.add_parser("classify", help="membership of rho in the admissible set")
    c.add_argument("--rho", required=True)
    c.add_argument("--build-primitive", action="store_true")

    s = sub.add_parser("simulate", help="projective billiard flow with integral tracking")
    s.add_argument("--field", required=True, help='e.g. {"field": "a", "rho": "4/3"}')
    s.add_argument("--x", required=True, help="start position, e.g. 1,1")
    s.add_argument("--v", required=True, help="start velocity, e.g. 3,0")
    s.add_argument("--steps", type=int, default=10)
    s.add_argument("--format", choices=("json", "csv", "svg"), default="json")

    d = sub.add_parser("dualize", help="structure <-> transversal field and its integral")
    d.add_argument("--spec")
    d.add_argument("--field")

    h = sub.add_parser("hessian", help="Hessian exponent, residue and ODE checks")
    h.add_argument("--spec")
    h.add_argument("--factors", help='e.g. {"p": 2, "q": 1, "primes": [["-8", "-2/3"]]}')

    e = sub.add_parser("equiv", help="projective equivalence pullbacks")
    e.add_argument("--case", choices=("b", "c"), required=True)
    e.add_argument("--samples", type=int, default=20)
    e.add_argument("--seed", type=int, default=0)
    return p


COMMANDS = {
    "catalog": cmd_catalog,
    "verify": cmd_verify,
    "residues": cmd_residues,
    "classify": cmd_classify,
    "simulate": cmd_simulate,
    "dualize": cmd_dualize,
    "hessian": cmd_hessian,
    "equiv": cmd_equiv,
}


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "samples", 1) < 1 or getattr(args, "steps", 1) < 1:
        _emit(_dump({"schema": SCHEMA, "error": {"type": "ConfigError", "message": "counts must be >= 1"}}), None)
        return 2
    try:
        result, ok = COMMANDS[args.command](args)
    except (ConfigError, OSError) as exc:
        _emit(_dump({"schema": SCHEMA, "error": {"type": type(exc).__name__, "message": str(exc)}}), None)
        return 2
    except (BilliardError, ValueError, ZeroDivisionError) as exc:
        _emit(_dump({"schema": SCHEMA, "error": {"type": type(exc).__name__, "message": str(exc)}}), None)
        return 1
    if isinstance(result, dict):
        result = {"schema": SCHEMA, "passed": ok, **result}
        if not ok:
            result["error"] = {"type": "CheckFailed", "message": f"{args.command} check failed"}
        if args.approx:
            result = _approx_tree(result)
        _emit(_dump(result), args.output)
    else:
        _emit(result, args.output)
        if not ok:
            sys.stderr.write(_dump({"schema": SCHEMA, "error": {"type": "CheckFailed", "message": "integral not conserved"}}))
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
