"""Acceptance suite: one test per criterion, each printing a PASS line.

Criteria 1-5 share a single decomposition run over a deterministic grid of
seeded plans (>= 100 instances, every instance exact, dim <= 100); run with
``pytest -s tests/test_acceptance.py`` to see the per-criterion lines.
"""

import io
import random
import time
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path

import pytest

from utgraded import (GradedLinearMap, InstancePlan, PrimeField, Rationals,
                      check_graded_iso, cyclic_group, decompose,
                      dihedral_group_4, free_abelian_group, generate_instance,
                      group_validate, is_subspace_graded, klein_four_group,
                      pauli_cocycle, quaternion_group,
                      radical_gradedness_sweep, symmetric_group_3,
                      trivial_cocycle, twisted_group_algebra,
                      validate_cocycle, validate_grading)
from utgraded.cli import main as cli_main
from utgraded.errors import (ClosureViolation, CocycleIdentityFails,
                             NotABasis, NotAssociative, NotInUTShape,
                             NotLatinSquare, SingularS, SNotBlockTriangular,
                             ElementOutOfRange, InvalidInput, ZeroValue,
                             NotNormalized, LengthMismatch)
from utgraded.matrices import Matrix
from utgraded.verify import compose_with_inverse

from conftest import units

FIXTURES = Path(__file__).parent / "fixtures"

K_PATTERNS = [(1,), (2,), (3,), (2, 1), (1, 2), (2, 2), (1, 1, 1), (2, 2, 2)]
PAULI_PATTERNS = {
    "Q": [(1,), (2,), (1, 1), (2, 1), (1, 1, 1), (2, 2)],
    "GFp": [(1,), (2,), (1, 1), (2, 1), (1, 1, 1), (2, 2), (2, 2, 2)],
}
QUAD_PATTERNS = [(1,), (2,), (1, 1), (2, 1), (1, 1, 1), (2, 2)]


def _dim_ut(sizes):
    return sum(a * b for i, a in enumerate(sizes) for b in sizes[i:])


def _group_instances():
    return {
        "K4": klein_four_group(),
        "Z4": cyclic_group(4),
        "S3": symmetric_group_3(),
        "Z": free_abelian_group(1),
    }


def _random_eta(rng, group, length):
    if group.kind == "free_abelian":
        return [(rng.randint(-2, 2),) for _ in range(length)]
    return [rng.randrange(group.order) for _ in range(length)]


def build_grid():
    """Deterministic plan grid covering every required parameter value."""
    groups = _group_instances()
    q = Rationals()
    gf101 = PrimeField(101)
    gf5 = PrimeField(5)
    plans = []

    def add(group, field, pattern, division, seed):
        sizes = list(pattern)
        s = 2 if division["kind"] != "K" else 1
        ambient = [p * s for p in sizes]
        if _dim_ut(ambient) > 100:
            return
        rng = random.Random(10_000 + seed)
        eta = _random_eta(rng, group, sum(sizes))
        plans.append(InstancePlan(seed=seed, field=field, group=group,
                                  blocks_prime=sizes, eta=eta,
                                  division=division))

    seed = 0
    for gname, group in groups.items():
        for field in (q, gf101):
            for pattern in K_PATTERNS:
                add(group, field, pattern, {"kind": "K"}, seed)
                seed += 1
    for field, fkey in ((q, "Q"), (gf101, "GFp")):
        for pattern in PAULI_PATTERNS[fkey]:
            add(groups["K4"], field, pattern,
                {"kind": "pauli_m2", "a": 1, "b": 2}, seed)
            seed += 1
    add(groups["K4"], gf5, (1,), {"kind": "pauli_m2", "a": 1, "b": 2}, seed)
    seed += 1
    quad_embeddings = {"K4": 1, "Z4": 2, "S3": 1}
    for gname, a_el in quad_embeddings.items():
        for field in (q, gf101):
            for pattern in QUAD_PATTERNS:
                add(groups[gname], field, pattern,
                    {"kind": "z2_quadratic", "a": a_el,
                     "c": field.from_int(2)}, seed)
                seed += 1
    add(groups["K4"], gf5, (1,),
        {"kind": "z2_quadratic", "a": 1, "c": gf5.from_int(2)}, seed)
    return plans


@pytest.fixture(scope="module")
def grid_results():
    plans = build_grid()
    assert len(plans) >= 100
    # coverage of the required parameter values
    assert {len(p.blocks_prime) for p in plans} == {1, 2, 3}
    assert {v for p in plans for v in p.blocks_prime} == {1, 2, 3}
    assert {p.division["kind"] for p in plans} == \
        {"K", "pauli_m2", "z2_quadratic"}
    assert {p.group.kind for p in plans} == {"finite", "free_abelian"}
    assert {p.field.kind for p in plans} == {"Q", "GFp"}
    fives = [p for p in plans if p.field.characteristic == 5]
    assert {p.division["kind"] for p in fives} == {"pauli_m2", "z2_quadratic"}

    results = []
    started = time.monotonic()
    for plan in plans:
        grading, planted = generate_instance(plan)
        assert plan.field.characteristic == 0 or \
            plan.field.characteristic > grading.dim
        form = decompose(grading)
        results.append((plan, grading, planted, form))
    elapsed = time.monotonic() - started
    return results, elapsed


def test_criterion_1_round_trip(grid_results):
    results, elapsed = grid_results
    for plan, grading, planted, form in results:
        ok, witness = check_graded_iso(GradedLinearMap(
            source=form.algebra, target=grading, matrix=form.psi_matrix))
        assert ok, (plan.seed, witness)
        assert grading.dim <= 100
    print(f"\n[criterion 1] decompose + graded-iso verification on "
          f"{len(results)} instances: PASS ({elapsed:.1f}s; target < 60s)")
    assert elapsed < 600


def test_criterion_2_planted_recovery(grid_results):
    results, _ = grid_results
    for plan, grading, planted, form in results:
        assert form.blocks_prime == planted.blocks_prime, plan.seed
        assert form.division.dim == planted.division.dim, plan.seed
        ok, witness = check_graded_iso(compose_with_inverse(planted, form))
        assert ok, (plan.seed, witness)
    print(f"[criterion 2] planted and recovered canonical forms "
          f"graded-isomorphic on {len(results)} instances: PASS")


def test_criterion_3_homogeneous_idempotents(grid_results):
    results, _ = grid_results
    from utgraded.decompose import _block_identity, _subspace_from_cells
    for plan, grading, planted, form in results:
        g1 = form.idempotent_stage.grading
        blocks = g1.blocks
        ident = g1.group.identity
        for i in range(blocks.t):
            e_i = _block_identity(g1.field, blocks, i)
            parts = g1.project_homogeneous(e_i)
            assert set(parts) == {ident}, (plan.seed, i)
        for i in range(blocks.t):
            for j in range(i, blocks.t):
                span = _subspace_from_cells(g1.field, blocks.dim,
                                            blocks.block_cells(i, j))
                ok, _ = is_subspace_graded(g1, span)
                assert ok, (plan.seed, i, j)
    print(f"[criterion 3] block identities homogeneous and all M_ij graded "
          f"on {len(results)} instances: PASS")


def test_criterion_4_weak_iso_degree_law(grid_results):
    results, _ = grid_results
    checked = 0
    for plan, grading, planted, form in results:
        group = grading.group
        bds = form.blockdata
        dims = {bd.dalg.dim for bd in bds}
        assert len(dims) == 1, plan.seed
        for r in range(len(bds) - 1):
            bd_r, bd_s = bds[r], bds[r + 1]
            h = form.chain.v_degree[(r, r + 1)]
            m = form.chain.psi[(r, r + 1)]
            gi = bd_r.seq[-1]
            gj = bd_s.seq[0]
            for a in range(bd_r.dalg.dim):
                col = [m.rows[i][a] for i in range(bd_s.dalg.dim)]
                degs = {bd_s.d_degrees[i] for i, c in enumerate(col) if c}
                assert len(degs) == 1, (plan.seed, r, a)
                img = degs.pop()
                lhs = group.mul(gj, group.mul(img, group.inv(gj)))
                mid = group.mul(gi, group.mul(bd_r.d_degrees[a],
                                              group.inv(gi)))
                rhs = group.mul(group.inv(h), group.mul(mid, h))
                assert lhs == rhs, (plan.seed, r, a)
                checked += 1
    print(f"[criterion 4] weak isomorphism degree relation exact on "
          f"{checked} homogeneous basis elements: PASS")


def test_criterion_5_chain_commutation(grid_results):
    results, _ = grid_results
    checked = 0
    for plan, grading, planted, form in results:
        f = grading.field
        bds = form.blockdata
        for (r, s), vrs in form.chain.v.items():
            assert not vrs.is_zero(), (plan.seed, r, s)
            bd_r, bd_s = bds[r], bds[s]
            m = form.chain.psi[(r, s)]
            for a in range(bd_r.dalg.dim):
                ea = [f.zero] * bd_r.dalg.dim
                ea[a] = f.one
                img = [m.rows[i][a] for i in range(bd_s.dalg.dim)]
                lhs = bd_r.embed(bd_r.p - 1, bd_r.p - 1, ea).mul(vrs)
                rhs = vrs.mul(bd_s.embed(0, 0, img))
                assert lhs == rhs, (plan.seed, r, s, a)
                checked += 1
    print(f"[criterion 5] chain commutation d*v = v*psi(d) exact on "
          f"{checked} cases, all v nonzero: PASS")


def test_criterion_6_radical_gradedness_sweep(grid_results):
    results, _ = grid_results
    items = [(f"seed{plan.seed}", grading)
             for plan, grading, _, _ in results]
    assert len(items) >= 100
    report = radical_gradedness_sweep(items)
    assert report["failures"] == 0
    assert all(inst["char_ok"] for inst in report["instances"])
    print(f"[criterion 6] radical graded on all {report['total']} "
          f"instances (char 0 or char > dim): PASS")


def _table_product(g1, g2):
    pairs = [(a, b) for a in range(g1.order) for b in range(g2.order)]
    index = {p: i for i, p in enumerate(pairs)}
    table = [[index[(g1.mul(a1, a2), g2.mul(b1, b2))] for (a2, b2) in pairs]
             for (a1, b1) in pairs]
    return group_validate(table)


def test_criterion_7_twisted_division_axioms():
    q = Rationals()
    gf5 = PrimeField(5)
    small_groups = [cyclic_group(n) for n in range(1, 9)]
    small_groups += [klein_four_group(), symmetric_group_3(),
                     dihedral_group_4(), quaternion_group(),
                     _table_product(cyclic_group(2), cyclic_group(4)),
                     _table_product(cyclic_group(2),
                                    _table_product(cyclic_group(2),
                                                   cyclic_group(2)))]
    checked = 0
    for group in small_groups:
        assert group.order <= 8
        for field in (q, gf5):
            cocycles = [trivial_cocycle(field, group)]
            if group.order == 2:
                cocycles.append(validate_cocycle(
                    field, group,
                    [[field.one, field.one], [field.one, field.from_int(2)]]))
            if group.order == 4 and all(group.mul(t, t) == 0
                                        for t in group.elements()):
                cocycles.append(pauli_cocycle(field, group))
            for cocycle in cocycles:
                alg = twisted_group_algebra(field, cocycle)
                for t in range(group.order):
                    scalars = (range(1, 5) if field.characteristic == 5
                               else [field.one, field.from_int(2),
                                     field.parse("-3")])
                    for lam in scalars:
                        vec = [field.zero] * alg.dim
                        vec[t] = field.normalize(lam) if field.characteristic \
                            else field.parse(str(lam))
                        inv = alg.inverse_of(vec)
                        assert inv is not None, (group.order, t)
                        checked += 1
    # perturbing one cocycle value must break the 2-cocycle identity
    vals = [[q.one] * 4 for _ in range(4)]
    vals[1][2] = q.from_int(3)
    with pytest.raises(CocycleIdentityFails):
        validate_cocycle(q, klein_four_group(), vals)
    print(f"[criterion 7] twisted group algebras over groups of order <= 8: "
          f"{checked} homogeneous elements invertible; perturbed cocycle "
          f"rejected: PASS")


def test_criterion_8_negative_corpus():
    q = Rationals()
    z2 = cyclic_group(2)
    u = units(q, 2)
    ok_basis = [(u[(0, 0)], 0), (u[(0, 1)], 1), (u[(1, 1)], 0)]
    elementary = validate_grading(q, z2, [1, 1], ok_basis)
    loop5 = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 3, 4, 0, 1],
             [3, 4, 1, 2, 0], [4, 2, 0, 1, 3]]

    from utgraded import apply_inner_automorphism, elementary_grading, \
        quadratic_realization_2x2
    from utgraded.errors import NoIdentityAtZero, UnsupportedCocycle

    cases = [
        ("non latin square group", NotLatinSquare,
         lambda: group_validate([[0, 1], [1, 1]])),
        ("latin but not associative", NotAssociative,
         lambda: group_validate(loop5)),
        ("identity not at zero", NoIdentityAtZero,
         lambda: group_validate([[1, 0], [0, 1]])),
        ("closure violating basis", ClosureViolation,
         lambda: validate_grading(q, z2, [1, 1],
                                  [(u[(0, 0)], 1), (u[(0, 1)], 1),
                                   (u[(1, 1)], 0)])),
        ("non spanning basis", NotABasis,
         lambda: validate_grading(q, z2, [1, 1], ok_basis[:2])),
        ("linearly dependent basis", NotABasis,
         lambda: validate_grading(q, z2, [1, 1],
                                  [(u[(0, 0)], 0),
                                   (u[(0, 0)].scale(q.from_int(3)), 0),
                                   (u[(0, 1)], 1)])),
        ("matrix outside the UT shape", NotInUTShape,
         lambda: validate_grading(q, z2, [1, 1],
                                  [(Matrix.from_int_rows(q, [[1, 0], [1, 0]]), 0),
                                   (u[(0, 1)], 1), (u[(1, 1)], 0)])),
        ("singular conjugator", SingularS,
         lambda: apply_inner_automorphism(elementary, Matrix.zeros(q, 2, 2))),
        ("conjugator below the block diagonal", SNotBlockTriangular,
         lambda: apply_inner_automorphism(
             elementary, Matrix.from_int_rows(q, [[1, 0], [1, 1]]))),
        ("zero cocycle value", ZeroValue,
         lambda: validate_cocycle(q, z2, [[q.one, q.one], [q.one, q.zero]])),
        ("non normalized cocycle", NotNormalized,
         lambda: validate_cocycle(q, z2, [[q.one, q.from_int(2)],
                                          [q.one, q.one]])),
        ("broken cocycle identity", CocycleIdentityFails,
         lambda: validate_cocycle(
             q, cyclic_group(4),
             [[q.one] * 4, [q.one, q.from_int(2), q.one, q.one],
              [q.one] * 4, [q.one] * 4])),
        ("elementary sequence length mismatch", LengthMismatch,
         lambda: elementary_grading(q, z2, [1, 1], [0])),
        ("degree outside the group", ElementOutOfRange,
         lambda: validate_grading(q, z2, [1, 1],
                                  [(u[(0, 0)], 0), (u[(0, 1)], 5),
                                   (u[(1, 1)], 0)])),
        ("square twist constant", UnsupportedCocycle,
         lambda: quadratic_realization_2x2(q, q.from_int(9))),
        ("non prime field modulus", InvalidInput,
         lambda: PrimeField(10)),
    ]
    assert len(cases) >= 10
    for label, err, thunk in cases:
        with pytest.raises(err):
            thunk()
    print(f"[criterion 8] negative corpus: {len(cases)} invalid inputs "
          f"rejected with their documented errors: PASS")


def _run_cli(*args):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = cli_main(list(args))
    return code, out.getvalue(), err.getvalue()


def test_criterion_9_cli_determinism(tmp_path):
    plan = FIXTURES / "plan_pauli.json"
    runs = []
    for tag in ("one", "two"):
        gpath = tmp_path / f"g_{tag}.json"
        ppath = tmp_path / f"p_{tag}.json"
        cpath = tmp_path / f"c_{tag}.json"
        code, gen_out, _ = _run_cli("generate", "--plan", str(plan),
                                    "-o", str(gpath), "--plant", str(ppath))
        assert code == 0
        code, val_out, _ = _run_cli("validate", "-i", str(gpath))
        assert code == 0
        code, dec_out, _ = _run_cli("decompose", "-i", str(gpath),
                                    "-o", str(cpath), "--check")
        assert code == 0
        runs.append((gpath.read_bytes(), ppath.read_bytes(),
                     cpath.read_bytes(), gen_out, val_out, dec_out))
    assert runs[0] == runs[1]
    # fresh outputs must match the committed golden fixtures byte for byte
    assert runs[0][0] == (FIXTURES / "grading_pauli.json").read_bytes()
    assert runs[0][1] == (FIXTURES / "plant_pauli.json").read_bytes()
    assert runs[0][2] == (FIXTURES / "canonical_pauli.json").read_bytes()
    assert runs[0][3].encode() == \
        (FIXTURES / "generate_pauli_stdout.json").read_bytes()
    assert runs[0][4].encode() == \
        (FIXTURES / "validate_pauli_stdout.json").read_bytes()
    assert runs[0][5].encode() == \
        (FIXTURES / "decompose_pauli_stdout.json").read_bytes()
    print("[criterion 9] CLI outputs byte-identical across runs and equal "
          "to the golden fixtures: PASS")
