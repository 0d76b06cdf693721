"""Versioned JSON file formats ("format": 1) and canonical byte-stable dumps.

File kinds: ut_grading, canonical_form, plan, graded_map, sweep_report.
All writers go through :func:`dumps`, which fixes key order and separators so
identical inputs always produce identical bytes.
"""

from __future__ import annotations

import json

from .decompose import tensor_block_algebra
from .algebras import GradedDivisionAlgebra
from .errors import InvalidInput
from .fields import field_from_json
from .grading import BlockStructure, validate_grading
from .groups import group_from_json
from .matrices import Matrix

FORMAT = 1


def dumps(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def write_file(path, obj):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(obj))


def read_file(path):
    with open(path, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    if not isinstance(obj, dict):
        raise InvalidInput("top-level JSON must be an object")
    if obj.get("format") != FORMAT:
        raise InvalidInput(f"unsupported format {obj.get('format')!r}")
    return obj


def grading_to_json(grading):
    return {"format": FORMAT, "kind": "ut_grading", **grading.to_json()}


def grading_from_json(obj):
    field = field_from_json(obj["field"])
    group = group_from_json(obj["group"])
    blocks = BlockStructure([int(v) for v in obj["blocks"]])
    basis = []
    for entry in obj["basis"]:
        deg = group.element_from_json(entry["degree"])
        rows = entry["matrix"]
        mat = Matrix(field, [[field.parse(v) for v in row] for row in rows])
        basis.append((mat, deg))
    return validate_grading(field, group, blocks, basis)


def canonical_form_to_json(form):
    return {"format": FORMAT, "kind": "canonical_form",
            "field": form.source.field.to_json(),
            "group": form.source.group.to_json(),
            **form.to_json()}


def canonical_algebra_from_json(obj):
    """Rebuild the canonical tensor algebra UT(p) (x) D from a form file."""
    field = field_from_json(obj["field"])
    group = group_from_json(obj["group"])
    division = GradedDivisionAlgebra.from_json(
        {**obj["division_algebra"], "field": obj["field"], "group": obj["group"]},
        field=field, group=group)
    division.validate(check_associativity=True)
    eta = [group.element_from_json(g) for g in obj["eta"]]
    return tensor_block_algebra(field, group,
                                [int(v) for v in obj["blocks_prime"]],
                                eta, division)


def map_to_json(field, matrix):
    return {"format": FORMAT, "kind": "graded_map",
            "matrix": [[field.serialize(v) for v in row] for row in matrix.rows]}


def map_from_json(obj, field):
    rows = obj["matrix"]
    return Matrix(field, [[field.parse(v) for v in row] for row in rows])


def plan_to_json(plan):
    return {"format": FORMAT, "kind": "plan", **plan.to_json()}


def load_algebra_file(path):
    """Read an algebra file: a grading or a canonical form's tensor algebra."""
    obj = read_file(path)
    kind = obj.get("kind")
    if kind == "ut_grading":
        return grading_from_json(obj), obj
    if kind == "canonical_form":
        return canonical_algebra_from_json(obj), obj
    raise InvalidInput(f"not an algebra file kind: {kind!r}")
