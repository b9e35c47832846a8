"""Command-line interface: JSON in, JSON out, deterministic output.

Exit codes: 0 when the command succeeds and nothing is violated, 1 when
a validation reports violations, 2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from dataclasses import dataclass
from typing import Optional

from .charts import CocycleError, check_cocycle, gluing_map
from .descent import DescentError, descent_from_json, glue, validate_descent
from .exactnum import NotCompletableError
from .geometry import (
    Cone,
    FanError,
    chart_bases,
    cone_key,
    dual_cone_smooth,
    fan_from_json,
    is_smooth,
    maximal_cones,
    validate_fan,
)
from .quivers import (
    arrangement_quiver,
    fan_quiver,
    hypercube_quiver,
    quiver_to_json,
)
from .reps import (
    ShapeError,
    are_isomorphic,
    hom_basis,
    rep_from_json,
    rep_to_json,
    validate_CDelta,
    validate_CSigma,
    validate_Cn,
)

OK = 0
VIOLATION = 1
ERROR = 2


@dataclass
class CommandResult:
    status: str  # "ok" | "violation" | "error"
    payload: dict

    @property
    def exit_code(self) -> int:
        return {"ok": OK, "violation": VIOLATION, "error": ERROR}[self.status]

    def to_json(self) -> dict:
        return {"status": self.status, **self.payload}


class ParseFailure(Exception):
    def __init__(self, detail: str):
        self.detail = detail
        super().__init__(detail)


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as exc:
        raise ParseFailure(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise ParseFailure(f"{path} is not valid JSON: {exc}")


def _load_fan(path: str):
    data = _load_json(path)
    try:
        return fan_from_json(data)
    except (ValueError, TypeError) as exc:
        raise ParseFailure(f"{path}: {exc}")


def _violations_payload(violations) -> dict:
    return {"violations": [v.to_json() for v in violations]}


def cmd_fan_validate(path: str) -> CommandResult:
    fan, overrides = _load_fan(path)
    try:
        validate_fan(fan)
    except FanError as exc:
        return CommandResult(
            "violation",
            {"violations": [{"condition": exc.axiom, "location": [], "detail": exc.detail}]},
        )
    smooth = {cone_key(c) or "0": is_smooth(fan, c) for c in fan.sorted_cones()}
    non_smooth = sorted(key for key, ok in smooth.items() if not ok)
    if non_smooth:
        return CommandResult(
            "violation",
            {
                "smooth": smooth,
                "violations": [
                    {"condition": "non-smooth", "location": [key], "detail": "cone is not smooth"}
                    for key in non_smooth
                ],
            },
        )
    return CommandResult("ok", {"smooth": smooth})


def cmd_fan_dual(path: str) -> CommandResult:
    fan, overrides = _load_fan(path)
    try:
        validate_fan(fan)
        bases = chart_bases(fan, overrides)
    except FanError as exc:
        return CommandResult(
            "violation",
            {"violations": [{"condition": exc.axiom, "location": [], "detail": exc.detail}]},
        )
    duals = {}
    for cone, basis in sorted(bases.items(), key=lambda kv: kv[0].ray_indices):
        g = dual_cone_smooth(basis.basis)
        duals[cone_key(cone) or "0"] = {
            "labels": list(basis.labels),
            "basis": basis.basis.to_rows(),
            "dual_generators": g.to_rows(),
        }
    return CommandResult("ok", {"duals": duals})


def cmd_fan_gluing(path: str) -> CommandResult:
    fan, overrides = _load_fan(path)
    try:
        validate_fan(fan)
        bases = chart_bases(fan, overrides)
        check_cocycle(fan, bases)
    except FanError as exc:
        return CommandResult(
            "violation",
            {"violations": [{"condition": exc.axiom, "location": [], "detail": exc.detail}]},
        )
    except CocycleError as exc:
        return CommandResult(
            "violation",
            {"violations": [{"condition": "cocycle", "location": [], "detail": str(exc)}]},
        )
    gluings = {}
    tops = maximal_cones(fan)
    for a, b in itertools.permutations(tops, 2):
        key = f"{cone_key(a) or '0'}|{cone_key(b) or '0'}"
        gluings[key] = gluing_map(bases[a], bases[b]).exponents.to_rows()
    return CommandResult("ok", {"gluings": gluings, "cocycle": "ok"})


def cmd_quiver_build(target: str, family: str) -> CommandResult:
    if family == "fan":
        fan, overrides = _load_fan(target)
        try:
            validate_fan(fan)
            quiver = fan_quiver(fan, chart_bases(fan, overrides))
        except FanError as exc:
            return CommandResult(
                "violation",
                {"violations": [{"condition": exc.axiom, "location": [], "detail": exc.detail}]},
            )
    else:
        try:
            n = int(target)
        except ValueError:
            raise ParseFailure(f"--family {family} expects an integer, got {target!r}")
        try:
            if family == "hypercube":
                quiver = hypercube_quiver(n)
            else:
                quiver = arrangement_quiver(n)
        except ValueError as exc:
            raise ParseFailure(str(exc))
    return CommandResult("ok", {"quiver": quiver_to_json(quiver)})


def _load_rep(path: str, quiver=None):
    data = _load_json(path)
    try:
        return rep_from_json(data, quiver=quiver)
    except ShapeError:
        raise
    except (ValueError, TypeError) as exc:
        raise ParseFailure(f"{path}: {exc}")


def cmd_rep_validate(path: str, category: str, fan_path: Optional[str]) -> CommandResult:
    if category == "cdelta":
        if fan_path is None:
            raise ParseFailure("--category cdelta requires --fan")
        fan, overrides = _load_fan(fan_path)
        validate_fan(fan)
        bases = chart_bases(fan, overrides)
        data = _load_json(path)
        quiver = fan_quiver(fan, bases)
        try:
            rep = (
                rep_from_json(data, quiver=quiver)
                if "quiver" not in data
                else rep_from_json(data)
            )
        except ShapeError as exc:
            return CommandResult("error", {"error": "shape", "detail": str(exc)})
        except (ValueError, TypeError) as exc:
            raise ParseFailure(f"{path}: {exc}")
        violations = validate_CDelta(rep, fan, bases)
    else:
        try:
            rep = _load_rep(path)
        except ShapeError as exc:
            return CommandResult("error", {"error": "shape", "detail": str(exc)})
        validator = {"cn": validate_Cn, "csigma": validate_CSigma}[category]
        violations = validator(rep)
    if violations:
        return CommandResult("violation", _violations_payload(violations))
    return CommandResult("ok", {})


def cmd_rep_hom(path_a: str, path_b: str) -> CommandResult:
    try:
        a = _load_rep(path_a)
        b = _load_rep(path_b)
    except ShapeError as exc:
        return CommandResult("error", {"error": "shape", "detail": str(exc)})
    if a.quiver != b.quiver:
        raise ParseFailure("representations live on different quivers")
    basis = hom_basis(a, b)
    return CommandResult(
        "ok", {"dim": len(basis), "basis": [mor.to_json() for mor in basis]}
    )


def cmd_rep_iso(path_a: str, path_b: str, seed: int, max_attempts: int) -> CommandResult:
    try:
        a = _load_rep(path_a)
        b = _load_rep(path_b)
    except ShapeError as exc:
        return CommandResult("error", {"error": "shape", "detail": str(exc)})
    if a.quiver != b.quiver:
        raise ParseFailure("representations live on different quivers")
    result = are_isomorphic(a, b, seed=seed, max_attempts=max_attempts)
    payload = {"verdict": result.verdict, "reason": result.reason}
    if result.witness is not None:
        payload["witness"] = result.witness.to_json()
    return CommandResult("ok", payload)


def _load_descent(path: str):
    data = _load_json(path)
    try:
        return descent_from_json(data)
    except DescentError:
        raise
    except (ValueError, TypeError) as exc:
        raise ParseFailure(f"{path}: {exc}")


def cmd_descent_check(path: str) -> CommandResult:
    try:
        datum = _load_descent(path)
    except DescentError as exc:
        return CommandResult("error", {"error": "descent-structure", "detail": str(exc)})
    violations = validate_descent(datum)
    if violations:
        return CommandResult("violation", _violations_payload(violations))
    return CommandResult("ok", {})


def cmd_descent_glue(path: str) -> CommandResult:
    try:
        datum = _load_descent(path)
    except DescentError as exc:
        return CommandResult("error", {"error": "descent-structure", "detail": str(exc)})
    violations = validate_descent(datum)
    if violations:
        return CommandResult("violation", _violations_payload(violations))
    glued = glue(datum)
    self_check = validate_CDelta(glued, datum.fan, datum.bases)
    return CommandResult(
        "ok",
        {
            "representation": rep_to_json(glued),
            "validation": "ok" if not self_check else [v.to_json() for v in self_check],
        },
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fanrep",
        description="Quiver-representation categories over fans, arrangements, "
        "and normal crossings.",
    )
    sub = parser.add_subparsers(dest="group", required=True)

    fan = sub.add_parser("fan", help="fan validation, duality, gluing")
    fan_sub = fan.add_subparsers(dest="command", required=True)
    for name in ("validate", "dual", "gluing"):
        p = fan_sub.add_parser(name)
        p.add_argument("path", help="fan JSON file")

    quiver = sub.add_parser("quiver", help="quiver construction")
    quiver_sub = quiver.add_subparsers(dest="command", required=True)
    build = quiver_sub.add_parser("build")
    build.add_argument("target", help="fan JSON file, or n for the other families")
    build.add_argument(
        "--family",
        choices=["fan", "hypercube", "arrangement"],
        default="fan",
    )

    rep = sub.add_parser("rep", help="representation validation and Hom")
    rep_sub = rep.add_subparsers(dest="command", required=True)
    validate = rep_sub.add_parser("validate")
    validate.add_argument("path", help="representation JSON file")
    validate.add_argument("--category", choices=["cn", "csigma", "cdelta"], required=True)
    validate.add_argument("--fan", help="fan JSON file (required for cdelta)")
    hom = rep_sub.add_parser("hom")
    hom.add_argument("path_a")
    hom.add_argument("path_b")
    iso = rep_sub.add_parser("iso")
    iso.add_argument("path_a")
    iso.add_argument("path_b")
    iso.add_argument("--seed", type=int, default=0)
    iso.add_argument("--max-attempts", type=int, default=200)

    descent = sub.add_parser("descent", help="descent data checking and gluing")
    descent_sub = descent.add_subparsers(dest="command", required=True)
    for name in ("check", "glue"):
        p = descent_sub.add_parser(name)
        p.add_argument("path", help="descent JSON file")

    return parser


def run(argv=None) -> CommandResult:
    args = build_parser().parse_args(argv)
    try:
        if args.group == "fan":
            return {
                "validate": cmd_fan_validate,
                "dual": cmd_fan_dual,
                "gluing": cmd_fan_gluing,
            }[args.command](args.path)
        if args.group == "quiver":
            return cmd_quiver_build(args.target, args.family)
        if args.group == "rep":
            if args.command == "validate":
                return cmd_rep_validate(args.path, args.category, args.fan)
            if args.command == "hom":
                return cmd_rep_hom(args.path_a, args.path_b)
            return cmd_rep_iso(args.path_a, args.path_b, args.seed, args.max_attempts)
        if args.group == "descent":
            if args.command == "check":
                return cmd_descent_check(args.path)
            return cmd_descent_glue(args.path)
    except ParseFailure as exc:
        return CommandResult("error", {"error": "parse", "detail": exc.detail})
    except (FanError, NotCompletableError) as exc:
        return CommandResult("error", {"error": "fan", "detail": str(exc)})
    except ValueError as exc:
        # wrong quiver family for a validator, malformed structures, ...
        return CommandResult("error", {"error": "invalid-input", "detail": str(exc)})
    raise AssertionError("unreachable command dispatch")


def main(argv=None) -> int:
    result = run(argv)
    print(json.dumps(result.to_json(), sort_keys=True, indent=2))
    return result.exit_code


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
