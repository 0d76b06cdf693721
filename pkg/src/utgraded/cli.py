"""Command line interface: validate, decompose, verify-iso, generate, sweep.

All file input and output is versioned JSON; identical inputs and flags give
byte-identical outputs.  Domain errors exit 1 with a machine-readable error
object on stderr; usage errors exit 2.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

from . import serial
from .decompose import decompose
from .errors import AlgebraError, InvalidInput
from .verify import (GradedLinearMap, InstancePlan, check_graded_iso,
                     generate_instance, radical_gradedness_sweep)


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except AlgebraError as exc:
        sys.stderr.write(serial.dumps({"error": exc.to_json()}))
        return 1
    except FileNotFoundError as exc:
        sys.stderr.write(serial.dumps(
            {"error": {"code": "UsageError", "message": str(exc)}}))
        return 2


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="utgraded",
        description="Canonical forms for group gradings on upper block "
                    "triangular matrix algebras")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a grading file")
    p.add_argument("-i", "--input", required=True)
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("decompose", help="compute the canonical form")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--check", action="store_true",
                   help="re-verify the isomorphism with the independent checker")
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("verify-iso", help="check a graded isomorphism")
    p.add_argument("-a", "--source", required=True)
    p.add_argument("-b", "--target", required=True)
    p.add_argument("-m", "--map", dest="map_file",
                   help="map file; defaults to the source file's psi_matrix "
                        "when the source is a canonical form")
    p.set_defaults(func=_cmd_verify_iso)

    p = sub.add_parser("generate", help="generate an instance from a plan")
    p.add_argument("--plan", required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--plant", help="also write the planted canonical form")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("sweep", help="radical gradedness sweep over plans")
    p.add_argument("--plans", required=True, help="directory of plan files")
    p.add_argument("--report", required=True)
    p.set_defaults(func=_cmd_sweep)
    return parser


def _load_grading(path):
    obj = serial.read_file(path)
    if obj.get("kind") != "ut_grading":
        raise InvalidInput(f"expected a ut_grading file, got {obj.get('kind')!r}")
    return serial.grading_from_json(obj)


def _cmd_validate(args):
    grading = _load_grading(args.input)
    group = grading.group
    sys.stdout.write(serial.dumps({
        "format": serial.FORMAT,
        "valid": True,
        "dim": grading.dim,
        "blocks": list(grading.blocks.sizes),
        "components": [
            {"degree": group.element_to_json(d), "dim": len(ix)}
            for d, ix in grading.components.items()],
    }))
    return 0


def _cmd_decompose(args):
    grading = _load_grading(args.input)
    form = decompose(grading)
    certificate = dict(form.certificate)
    if args.check:
        ok, witness = check_graded_iso(GradedLinearMap(
            source=form.algebra, target=grading, matrix=form.psi_matrix))
        certificate["checked"] = ok
        if not ok:
            certificate["check_witness"] = witness
    form.certificate = certificate
    serial.write_file(args.output, serial.canonical_form_to_json(form))
    sys.stdout.write(serial.dumps({
        "format": serial.FORMAT,
        "ok": True,
        "blocks_prime": list(form.blocks_prime),
        "division_dim": form.division.dim,
        "certificate": certificate,
    }))
    return 0


def _cmd_verify_iso(args):
    source, source_obj = serial.load_algebra_file(args.source)
    target, _ = serial.load_algebra_file(args.target)
    field = target.field
    if args.map_file:
        map_obj = serial.read_file(args.map_file)
        if map_obj.get("kind") != "graded_map":
            raise InvalidInput("map file must have kind graded_map")
        matrix = serial.map_from_json(map_obj, field)
    elif source_obj.get("kind") == "canonical_form":
        matrix = serial.map_from_json({"matrix": source_obj["psi_matrix"]},
                                      field)
    else:
        raise InvalidInput("a map file is required unless the source is a "
                           "canonical form")
    ok, witness = check_graded_iso(GradedLinearMap(
        source=source, target=target, matrix=matrix))
    if ok:
        sys.stdout.write(serial.dumps({"format": serial.FORMAT, "iso": True}))
        return 0
    sys.stderr.write(serial.dumps(
        {"error": {"code": "NotGradedIso", **(witness or {})}}))
    return 1


def _cmd_generate(args):
    plan_obj = serial.read_file(args.plan)
    if plan_obj.get("kind") != "plan":
        raise InvalidInput(f"expected a plan file, got {plan_obj.get('kind')!r}")
    plan = InstancePlan.from_json(plan_obj)
    grading, planted = generate_instance(plan)
    serial.write_file(args.output, serial.grading_to_json(grading))
    if args.plant:
        serial.write_file(args.plant, serial.canonical_form_to_json(planted))
    sys.stdout.write(serial.dumps({
        "format": serial.FORMAT,
        "ok": True,
        "dim": grading.dim,
        "blocks": list(grading.blocks.sizes),
    }))
    return 0


def _cmd_sweep(args):
    names = sorted(n for n in os.listdir(args.plans) if n.endswith(".json"))
    started = time.monotonic()
    items = []
    for name in names:
        plan_obj = serial.read_file(os.path.join(args.plans, name))
        if plan_obj.get("kind") != "plan":
            raise InvalidInput(f"{name} is not a plan file")
        plan = InstancePlan.from_json(plan_obj)
        grading, _ = generate_instance(plan)
        items.append((name, grading))
    report = radical_gradedness_sweep(items)
    serial.write_file(args.report, {"format": serial.FORMAT,
                                    "kind": "sweep_report", **report})
    # timings go to stderr so the report file stays byte-deterministic
    sys.stderr.write(f"sweep: {len(items)} instances in "
                     f"{time.monotonic() - started:.2f}s\n")
    sys.stdout.write(serial.dumps({
        "format": serial.FORMAT,
        "ok": report["failures"] == 0,
        "total": report["total"],
        "failures": report["failures"],
    }))
    return 0 if report["failures"] == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
