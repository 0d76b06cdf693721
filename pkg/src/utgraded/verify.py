"""Independent oracles: graded-isomorphism checking, seeded instance
generation with planted canonical forms, and radical-gradedness sweeps.

The instance generator uses Python's Mersenne Twister (``random.Random``)
seeded from the plan; the draw order is documented in the README so equal
plan bytes always give equal instance bytes.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .construct import (division_realization_2x2, labelled_basis_algebra,
                        pauli_cocycle, quadratic_realization_2x2,
                        tensor_grading)
from .decompose import CanonicalForm, tensor_block_algebra
from .errors import (AlgebraError, DimensionMismatch, PlanInconsistent)
from .fields import field_from_json
from .grading import (BlockStructure, UTGrading, apply_inner_automorphism,
                      is_subspace_graded, radical_subspace, sparse_by_row,
                      sparse_product)
from .groups import group_from_json, klein_four_group
from .matrices import Matrix, inverse, Singular


@dataclass
class GradedLinearMap:
    """Linear map between two graded algebras, as a matrix over their bases."""

    source: object   # UTGrading or AbstractGradedAlgebra
    target: object
    matrix: Matrix   # target-dim x source-dim


class _Ops:
    """Uniform product/degree access for the two algebra representations."""

    def __init__(self, alg):
        self.alg = alg
        self.is_grading = isinstance(alg, UTGrading)
        self.dim = alg.dim
        self.degrees = alg.degrees
        self.components = alg.components
        self.field = alg.field

    def basis_product(self, i, j):
        if self.is_grading:
            coeffs = self.alg.basis_product_coeffs(i, j)
            f = self.field
            return [(k, v) for k, v in enumerate(coeffs) if not f.is_zero(v)]
        return self.alg.basis_product(i, j)

    def rep_of_coeffs(self, coeffs):
        if self.is_grading:
            return self.alg.combo_sparse(coeffs)
        f = self.field
        return {k: v for k, v in enumerate(coeffs) if not f.is_zero(v)}

    def rep_mul(self, a, b_by_row_or_rep):
        if self.is_grading:
            return sparse_product(self.field, a, b_by_row_or_rep)
        return self.alg.mul_sparse(a, b_by_row_or_rep)

    def rep_second(self, rep):
        """Pre-processed right operand (row-grouped for matrix sparses)."""
        if self.is_grading:
            return sparse_by_row(rep)
        return rep

    def combine_reps(self, terms, reps):
        f = self.field
        out = {}
        for k, v in terms:
            for pos, val in reps[k].items():
                prev = out.get(pos)
                term = f.mul(v, val)
                out[pos] = term if prev is None else f.add(prev, term)
        return {k: v for k, v in out.items() if not f.is_zero(v)}


def check_graded_iso(gmap):
    """True iff the map is invertible, multiplicative on all ordered basis
    pairs, and degree preserving on every basis element.

    Returns (flag, witness); the witness names the first failing check.
    """
    src = _Ops(gmap.source)
    tgt = _Ops(gmap.target)
    if gmap.matrix.nrows != tgt.dim or gmap.matrix.ncols != src.dim:
        raise DimensionMismatch("map matrix shape does not match the algebras",
                                rows=gmap.matrix.nrows, cols=gmap.matrix.ncols)
    f = tgt.field
    try:
        inverse(gmap.matrix)
    except Singular:
        return False, {"check": "bijective"}

    cols = [[gmap.matrix.rows[i][j] for i in range(tgt.dim)]
            for j in range(src.dim)]
    images = [tgt.rep_of_coeffs(c) for c in cols]
    seconds = [tgt.rep_second(rep) for rep in images]

    for i in range(src.dim):
        for j in range(src.dim):
            lhs = tgt.rep_mul(images[i], seconds[j])
            rhs = tgt.combine_reps(src.basis_product(i, j), images)
            if lhs != rhs:
                return False, {"check": "multiplicative", "witness": [i, j]}

    for j in range(src.dim):
        deg = src.degrees[j]
        allowed = set(tgt.components.get(deg, ()))
        support = _support_indices(tgt, cols[j])
        if not support <= allowed:
            return False, {"check": "degree", "basis": j}
    return True, None


def _support_indices(ops, coeffs):
    f = ops.field
    return {k for k, v in enumerate(coeffs) if not f.is_zero(v)}


def compose_with_inverse(planted, recovered):
    """Map recovered.algebra -> planted.algebra, psi_P^{-1} o psi_R."""
    inv_p = inverse(planted.psi_matrix)
    return GradedLinearMap(source=recovered.algebra, target=planted.algebra,
                           matrix=inv_p.mul(recovered.psi_matrix))


# ---------------------------------------------------------------------------
# instance plans


@dataclass
class InstancePlan:
    seed: int
    field: object
    group: object
    blocks_prime: list
    eta: list
    division: dict
    scramble_block_diagonal: bool = True
    scramble_strict_upper: bool = True

    def to_json(self):
        return {
            "seed": self.seed,
            "field": self.field.to_json(),
            "group": self.group.to_json(),
            "blocks_prime": list(self.blocks_prime),
            "eta": [self.group.element_to_json(g) for g in self.eta],
            "division": _division_to_json(self.field, self.group, self.division),
            "scramble": {
                "block_diagonal": self.scramble_block_diagonal,
                "strict_upper": self.scramble_strict_upper,
            },
        }

    @classmethod
    def from_json(cls, obj):
        field = field_from_json(obj["field"])
        group = group_from_json(obj["group"])
        division = _division_from_json(field, group, obj["division"])
        scramble = obj.get("scramble", {})
        return cls(
            seed=int(obj["seed"]), field=field, group=group,
            blocks_prime=[int(v) for v in obj["blocks_prime"]],
            eta=[group.element_from_json(g) for g in obj["eta"]],
            division=division,
            scramble_block_diagonal=bool(scramble.get("block_diagonal", True)),
            scramble_strict_upper=bool(scramble.get("strict_upper", True)),
        )


def _division_to_json(field, group, division):
    kind = division["kind"]
    out = {"kind": kind}
    if kind == "pauli_m2":
        out["a"] = group.element_to_json(division["a"])
        out["b"] = group.element_to_json(division["b"])
    elif kind == "z2_quadratic":
        out["a"] = group.element_to_json(division["a"])
        out["c"] = field.serialize(division["c"])
    elif kind != "K":
        raise PlanInconsistent(f"unknown division kind {kind!r}")
    return out


def _division_from_json(field, group, obj):
    kind = obj.get("kind")
    if kind == "K":
        return {"kind": "K"}
    if kind == "pauli_m2":
        return {"kind": "pauli_m2",
                "a": group.element_from_json(obj["a"]),
                "b": group.element_from_json(obj["b"])}
    if kind == "z2_quadratic":
        return {"kind": "z2_quadratic",
                "a": group.element_from_json(obj["a"]),
                "c": field.parse(obj["c"])}
    raise PlanInconsistent(f"unknown division kind {kind!r}")


def _division_realization(plan):
    """Degree-labelled spanning basis of M_s with degrees in the plan group."""
    field, group = plan.field, plan.group
    spec = plan.division
    kind = spec["kind"]
    if kind == "K":
        return [(Matrix.identity(field, 1), group.identity)]
    if kind == "pauli_m2":
        a, b = spec["a"], spec["b"]
        e = group.identity
        ab = group.mul(a, b)
        if (group.mul(a, a) != e or group.mul(b, b) != e
                or group.mul(b, a) != ab or len({e, a, b, ab}) != 4):
            raise PlanInconsistent(
                "pauli_m2 needs a Klein four subgroup embedding",
                a=group.element_to_json(a), b=group.element_to_json(b))
        try:
            labelled = division_realization_2x2(
                field, pauli_cocycle(field, klein_four_group()))
        except AlgebraError as exc:
            raise PlanInconsistent("pauli_m2 realization failed",
                                   cause=exc.code) from exc
        relabel = {0: e, 1: a, 2: b, 3: ab}
        return [(m, relabel[d]) for m, d in labelled]
    if kind == "z2_quadratic":
        a = spec["a"]
        e = group.identity
        if a == e or group.mul(a, a) != e:
            raise PlanInconsistent("z2_quadratic needs an order-2 element",
                                   a=group.element_to_json(a))
        try:
            labelled = quadratic_realization_2x2(field, spec["c"])
        except AlgebraError as exc:
            raise PlanInconsistent("z2_quadratic realization failed",
                                   cause=exc.code) from exc
        relabel = {0: e, 1: a}
        return [(m, relabel[d]) for m, d in labelled]
    raise PlanInconsistent(f"unknown division kind {kind!r}")


def generate_instance(plan):
    """Build the planted tensor grading, then scramble it by a seeded
    conjugation.  Returns (grading, planted CanonicalForm).

    Draw order (Mersenne Twister, ``random.Random(seed)``): for each diagonal
    block in order, the block-diagonal entries row-major, redrawing the whole
    block until invertible; then the strict-upper entries in ambient cell
    order.  Rationals draw integers in [-2, 2]; GF(p) draws uniformly.
    """
    field, group = plan.field, plan.group
    if len(plan.eta) != sum(plan.blocks_prime):
        raise PlanInconsistent("eta length must equal the sum of block sizes",
                               expected=sum(plan.blocks_prime),
                               got=len(plan.eta))
    for g in plan.eta:
        group.check_element(g)
    labelled = _division_realization(plan)
    try:
        base = tensor_grading(field, group, plan.blocks_prime, plan.eta,
                              labelled)
    except AlgebraError as exc:
        raise PlanInconsistent("planted grading construction failed",
                               cause=exc.code) from exc

    rng = random.Random(plan.seed)
    conj = _sample_conjugator(rng, plan, base.blocks)
    grading = base if conj is None else apply_inner_automorphism(base, conj)
    # the scrambled basis is the conjugated tensor basis in the same order,
    # so the planted isomorphism is the identity matrix w.r.t. the two bases
    psi = Matrix.identity(field, base.dim)

    dalg = labelled_basis_algebra(field, group, labelled)
    algebra = tensor_block_algebra(field, group,
                                   BlockStructure(plan.blocks_prime),
                                   plan.eta, dalg)
    planted = CanonicalForm(
        blocks_prime=list(plan.blocks_prime),
        eta=list(plan.eta),
        shifts=[group.identity] * len(plan.blocks_prime),
        division=dalg,
        algebra=algebra,
        psi_matrix=psi,
        certificate={"planted": True},
        source=grading)
    return grading, planted


def _sample_conjugator(rng, plan, blocks):
    field = plan.field
    if not (plan.scramble_block_diagonal or plan.scramble_strict_upper):
        return None

    def draw():
        if field.characteristic == 0:
            return field.from_int(rng.randint(-2, 2))
        return field.from_int(rng.randrange(field.characteristic))

    n = blocks.n
    conj = Matrix.identity(field, n)
    if plan.scramble_block_diagonal:
        for b, size in enumerate(blocks.sizes):
            off = blocks.offsets[b]
            for _ in range(1000):
                rows = [[draw() for _ in range(size)] for _ in range(size)]
                block = Matrix(field, rows)
                try:
                    inverse(block)
                except Singular:
                    continue
                for a in range(size):
                    for c in range(size):
                        conj.rows[off + a][off + c] = rows[a][c]
                break
            else:
                raise PlanInconsistent("could not sample an invertible block",
                                       block=b)
    if plan.scramble_strict_upper:
        upper = Matrix.identity(field, n)
        for idx in blocks.strict_upper:
            r, c = blocks.cells[idx]
            upper.rows[r][c] = draw()
        conj = conj.mul(upper)
    return conj


def radical_gradedness_sweep(named_gradings):
    """Check radical gradedness over a corpus; failures are findings."""
    from .fields import char_precondition
    instances = []
    failures = 0
    for name, grading in named_gradings:
        j_space = radical_subspace(grading)
        ok, dims = is_subspace_graded(grading, j_space)
        if not ok:
            failures += 1
        instances.append({
            "plan": name,
            "radical_graded": ok,
            "radical_dim": j_space.dim,
            "radical_component_dims": [
                [grading.group.element_to_json(d), n] for d, n in dims],
            "char_ok": char_precondition(grading.field, grading.dim),
        })
    return {"instances": instances, "failures": failures,
            "total": len(instances)}
