"""Command line interface.

    sesqui check --manifest field.json --expect map
    sesqui derive-ode --preset sol --delta1 1 --delta2 1
    sesqui classify-nil --delta1 1 --delta2 -1
    sesqui verify-family --family circle-C1 --delta1 1 --delta2 -1
    sesqui variation-test --preset nil --delta1 1 --delta2 1
    sesqui scan-same-sign --preset nil --delta1 1 --delta2 2

Exit codes: 0 computed and every assertion held, 1 computed but an assertion
failed, 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import sys
import warnings
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import __version__
from .algebra import AlgebraError, format_rational, parse_rational
from .cases import (
    NIL_FAMILIES,
    DegenerateExponentsWarning,
    derive_sol_ode,
    nil_systems,
    verify_sol_solution,
    verify_nil_families,
)
from .engine import DeltaPair, check, random_variation_suite, same_sign_scan, variation_test
from .frame import StructureError
from .manifest import Manifest, ManifestError, parse_manifest

__all__ = ["main", "run", "render"]

CONVENTIONS = {
    "curvature": "R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z",
    "laplacian": "lap X = sum_i (nabla_{nabla_{e_i} e_i} X - nabla_{e_i} nabla_{e_i} X)",
    "residuals": "residuals are the vanishing conditions; tau = (-horizontal)^h + (-vertical)^v",
    "indices": "frame indices are 1-based (e_1 .. e_m)",
}

EXPECTATIONS = ("none", "vector-field", "map", "not-vector-field", "not-map")


class InputError(ValueError):
    pass


def _q(x: Fraction) -> str:
    return format_rational(x)


def _field(v) -> list[str]:
    return [str(p) for p in v.coeffs]


def _rat_arg(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except AlgebraError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _manifest_from_args(args, default_preset: str | None = None) -> Manifest:
    if args.manifest:
        try:
            text = Path(args.manifest).read_text(encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot read manifest: {exc}") from None
        m = parse_manifest(text)
    else:
        data: dict[str, Any] = {"preset": getattr(args, "preset", None) or default_preset}
        if data["preset"] is None:
            raise InputError("give --manifest or --preset")
        m = parse_manifest(data)
    preset = getattr(args, "preset", None)
    if args.manifest and preset and preset != m.preset:
        raise InputError("--preset conflicts with the manifest")
    field = getattr(args, "field", None)
    if field is not None:
        d = m.to_dict()
        d["field"] = [s.strip() for s in field.split(",")]
        d.pop("symbols", None)
        m = parse_manifest(d)
    for key in ("delta1", "delta2"):
        v = getattr(args, key, None)
        if v is not None:
            setattr(m, key, v)
    for key in ("step", "tolerance"):
        v = getattr(args, key, None)
        if v is not None:
            if not v > 0:
                raise InputError(f"--{key} must be positive")
            setattr(m, key, v)
    return m


def _deltas(m: Manifest, required: bool = True) -> DeltaPair | None:
    if m.delta1 is None and m.delta2 is None and not required:
        return None
    try:
        return m.deltas()
    except ValueError as exc:
        raise InputError(str(exc)) from None


# -- commands -------------------------------------------------------------

def cmd_check(m: Manifest, args) -> tuple[dict, bool]:
    X = m.vector_field()
    d = _deltas(m)
    rep = check(X, d)
    expect = getattr(args, "expect", None) or m.options.get("expect", "none")
    if expect not in EXPECTATIONS:
        raise InputError(f"expect must be one of {EXPECTATIONS}")
    ok = {
        "none": True,
        "vector-field": rep.is_sesqui_vector_field,
        "map": rep.is_sesqui_map,
        "not-vector-field": not rep.is_sesqui_vector_field,
        "not-map": not rep.is_sesqui_map,
    }[expect]
    result = {
        "vertical_residual": _field(rep.vertical_residual),
        "horizontal_residual": _field(rep.horizontal_residual),
        "is_sesqui_vector_field": rep.is_sesqui_vector_field,
        "is_sesqui_map": rep.is_sesqui_map,
        "term_breakdown": {k: _field(v) for k, v in rep.term_breakdown.items()},
        "expect": expect,
    }
    return result, ok


def cmd_derive_ode(m: Manifest, args) -> tuple[dict, bool]:
    if m.preset != "sol":
        raise InputError("derive-ode works on the 'sol' preset")
    d = _deltas(m, required=False)
    order = getattr(args, "order", None) or m.options.get("order", 4)
    op = derive_sol_ode(order=order)
    result: dict[str, Any] = {
        "field": "f(z) e_3",
        "orientation": op.orientation,
        "coefficients": {n: str(c) for n, c in zip(["f", "f'", "f''", "f'''", "f''''"], op.coefficients)},
        "ode": str(op),
    }
    ok = True
    if d is not None:
        spec = op.specialise(d)
        result["specialised"] = str(spec)
        result["specialised_coefficients"] = [str(c) for c in spec.coefficients]
        if d.delta2 != 0 and (d.delta1 + 2 * d.delta2) / d.delta2 > 0:
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always", DegenerateExponentsWarning)
                good = verify_sol_solution(d)
            ratio = (d.delta1 + 2 * d.delta2) / d.delta2
            result["solution_check"] = {
                "lambda_squared": ["2", _q(ratio)],
                "exponentials_solve_ode": good,
                "degenerate": any(issubclass(w.category, DegenerateExponentsWarning) for w in caught),
            }
            ok = good
        else:
            result["solution_check"] = "skipped: (delta1 + 2 delta2)/delta2 is not positive"
    return result, ok


def _member_dict(mc) -> dict:
    return {
        "family": mc.family,
        "point": [_q(x) for x in mc.point],
        "vertical_system": [_q(x) for x in mc.vertical_system],
        "horizontal_system": [_q(x) for x in mc.horizontal_system],
        "in_regime": mc.in_regime,
        "vector_field": mc.vector_field,
        "map": mc.is_map,
        "stated_map_condition": mc.stated_map_condition,
        "stated_map_condition_holds": mc.stated_map_holds,
    }


def _family_report(d: DeltaPair, families=None) -> tuple[dict, bool]:
    try:
        rep = verify_nil_families(d, families)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    members = [_member_dict(mc) for mc in rep.members]
    ok = all(mc.vector_field == mc.in_regime for mc in rep.members) and rep.controls_fail
    result = {
        "t": None if rep.t is None else _q(rep.t),
        "members": members,
        "negative_controls": [_member_dict(c) for c in rep.controls],
        "map_condition_disagreements": [
            {"family": mc.family, "point": [_q(x) for x in mc.point]} for mc in rep.map_disagreements
        ],
    }
    return result, ok


def cmd_classify_nil(m: Manifest, args) -> tuple[dict, bool]:
    if m.preset not in (None, "nil"):
        raise InputError("classify-nil works on the 'nil' preset")
    d = _deltas(m)
    systems = nil_systems(d)
    result: dict[str, Any] = {
        "vertical_system": [str(p) for p in systems.vertical_system],
        "horizontal_system": [str(p) for p in systems.horizontal_system],
        "symbolic_vertical_system": [str(p) for p in nil_systems().vertical_system],
        "symbolic_horizontal_system": [str(p) for p in nil_systems().horizontal_system],
    }
    if d.same_sign:
        scan = same_sign_scan(m.frame() if m.preset else _nil(), d)
        result["same_sign"] = True
        result["solution_set"] = scan.describe()
        return result, scan.zero_only
    result["same_sign"] = False
    fam, ok = _family_report(d)
    result.update(fam)
    return result, ok


def _nil():
    from .frame import nil
    return nil()


def cmd_verify_family(m: Manifest, args) -> tuple[dict, bool]:
    family = getattr(args, "family", None) or m.options.get("family")
    if family not in NIL_FAMILIES:
        raise InputError(f"--family must be one of {list(NIL_FAMILIES)}")
    d = _deltas(m)
    fam = NIL_FAMILIES[family]
    result, ok = _family_report(d, [family])
    result["family"] = family
    result["description"] = fam.description
    result["constraints"] = list(fam.constraints)
    if not result["members"]:
        result["note"] = "no nonzero rational members for these deltas"
    return result, ok


def cmd_variation_test(m: Manifest, args) -> tuple[dict, bool]:
    fa = m.frame()
    if m.mode != "left_invariant":
        raise InputError("variation-test needs left_invariant mode")
    d = _deltas(m)
    step = m.step if m.step is not None else 1e-4
    tol = m.tolerance if m.tolerance is not None else 1e-6
    opts = m.options
    point = getattr(args, "point", None) or opts.get("point")
    direction = getattr(args, "direction", None) or opts.get("direction")
    try:
        if point is not None or direction is not None:
            if point is None or direction is None:
                raise InputError("give both point and direction")
            X = [float(parse_rational(x)) for x in _split(point)]
            V = [float(parse_rational(x)) for x in _split(direction)]
            cases = [(X, V, variation_test(fa, X, V, d, step))]
        else:
            n = getattr(args, "samples", None) or opts.get("samples", 20)
            seed = getattr(args, "seed", None)
            seed = opts.get("seed", 0) if seed is None else seed
            cases = random_variation_suite(fa, d, n=n, step=step, seed=seed)
    except (AlgebraError, FloatingPointError) as exc:
        raise InputError(str(exc)) from None
    rows = [
        {"X": [repr(x) for x in X], "V": [repr(v) for v in V],
         "lhs": repr(r.lhs), "rhs": repr(r.rhs), "rel_err": repr(r.rel_err)}
        for X, V, r in cases
    ]
    worst = max(r.rel_err for _, _, r in cases)
    result = {
        "step": repr(step),
        "tolerance": repr(tol),
        "cases": rows,
        "max_rel_err": repr(worst),
    }
    return result, worst < tol


def _split(value) -> list:
    if isinstance(value, str):
        return [s.strip() for s in value.split(",")]
    return list(value)


def cmd_scan_same_sign(m: Manifest, args) -> tuple[dict, bool]:
    d = _deltas(m)
    if m.mode != "left_invariant":
        raise InputError("scan-same-sign needs left_invariant mode")
    try:
        scan = same_sign_scan(m.frame(), d)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    result = {
        "zero_only": scan.zero_only,
        "solution_set": scan.describe(),
        "components": [
            {"variable": c.variable, "polynomial": str(c.polynomial),
             "cofactor": None if c.cofactor is None else str(c.cofactor), "sign": c.sign}
            for c in scan.components
        ],
    }
    return result, True


COMMANDS = {
    "check": cmd_check,
    "derive-ode": cmd_derive_ode,
    "classify-nil": cmd_classify_nil,
    "verify-family": cmd_verify_family,
    "variation-test": cmd_variation_test,
    "scan-same-sign": cmd_scan_same_sign,
}

DEFAULT_PRESET = {"derive-ode": "sol", "classify-nil": "nil", "verify-family": "nil"}


def run(command: str, manifest: Manifest, args=None) -> tuple[dict, int]:
    """Run one command on a validated manifest; returns (report, exit code)."""
    args = args or argparse.Namespace()
    try:
        result, ok = COMMANDS[command](manifest, args)
    except (InputError, ManifestError, AlgebraError, StructureError) as exc:
        return _error_report(command, str(exc), manifest), 2
    report = {
        "command": command,
        "version": __version__,
        "conventions": CONVENTIONS,
        "inputs": manifest.to_dict(),
        "result": result,
        "status": "pass" if ok else "fail",
    }
    return report, 0 if ok else 1


def _error_report(command: str, message: str, manifest: Manifest | None = None) -> dict:
    return {
        "command": command,
        "version": __version__,
        "inputs": manifest.to_dict() if manifest is not None else None,
        "error": message,
        "status": "input-error",
    }


def render(report: dict, fmt: str = "human") -> str:
    if fmt == "structured":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    lines: list[str] = []

    def nested(v):
        if isinstance(v, dict):
            return bool(v)
        return isinstance(v, list) and any(isinstance(x, (dict, list)) for x in v)

    def walk(obj, indent=0):
        pad = "  " * indent
        if isinstance(obj, dict):
            for k, v in obj.items():
                if nested(v):
                    lines.append(f"{pad}{k}:")
                    walk(v, indent + 1)
                else:
                    lines.append(f"{pad}{k}: {_scalar(v)}")
        elif isinstance(obj, list):
            for v in obj:
                if nested(v):
                    lines.append(f"{pad}-")
                    walk(v, indent + 1)
                else:
                    lines.append(f"{pad}- {_scalar(v)}")
        else:
            lines.append(f"{pad}{_scalar(obj)}")

    walk(report)
    return "\n".join(lines) + "\n"


def _scalar(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    if isinstance(v, dict):
        return "(none)"
    return str(v)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--manifest", help="JSON manifest path")
    common.add_argument("--output", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("human", "structured"), default="human")
    common.add_argument("--preset", help="built-in algebra (nil, sol, abelian)")
    common.add_argument("--delta1", type=_rat_arg)
    common.add_argument("--delta2", type=_rat_arg)

    ap = argparse.ArgumentParser(prog="sesqui", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="test both vanishing conditions")
    p.add_argument("--field", help="comma separated polynomial literals")
    p.add_argument("--expect", choices=EXPECTATIONS)

    p = sub.add_parser("derive-ode", parents=[common], help="ODE for f(z) e_3 on Sol")
    p.add_argument("--order", type=int)

    sub.add_parser("classify-nil", parents=[common], help="left-invariant fields on Nil")

    p = sub.add_parser("verify-family", parents=[common], help="check one Nil family")
    p.add_argument("--family", choices=list(NIL_FAMILIES))

    p = sub.add_parser("variation-test", parents=[common], help="finite-difference first variation")
    p.add_argument("--step", type=float)
    p.add_argument("--tolerance", type=float)
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--point", help="comma separated rationals")
    p.add_argument("--direction", help="comma separated rationals")

    sub.add_parser("scan-same-sign", parents=[common], help="same-sign rigidity scan")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        manifest = _manifest_from_args(args, DEFAULT_PRESET.get(args.command))
    except (InputError, ManifestError, AlgebraError, StructureError) as exc:
        report, code = _error_report(args.command, str(exc)), 2
    else:
        report, code = run(args.command, manifest, args)
    text = render(report, args.format)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if code == 2:
        print(f"error: {report.get('error')}", file=sys.stderr)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
