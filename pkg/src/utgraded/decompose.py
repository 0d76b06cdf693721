"""Decomposition of a validated grading with graded radical into its
canonical form: an elementary-graded block triangular algebra tensored with a
graded division algebra, joined to the input by an explicit verified graded
isomorphism.

Stages: make every block identity homogeneous by conjugations (each step uses
the homogeneous left unit of the right annihilator of the corner radical);
split each diagonal block as p x p matrices over a graded division algebra via
a primitive idempotent of its identity component; connect adjacent blocks by
weak isomorphisms; assemble the elementary sequence and the isomorphism.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .algebras import AbstractGradedAlgebra, GradedDivisionAlgebra
from .errors import (BlockNotGraded, ChainElementZero, ComponentNotLeftUnit,
                     EndomorphismNotDivision, NoLeftUnit,
                     NoNonzeroHomogeneous, PsiDegreeMismatch,
                     PsiNotBijective, PsiNotMultiplicative, RadicalNotGraded,
                     SolveFailed)
from .grading import (BlockStructure, UTGrading, apply_inner_automorphism,
                      is_subspace_graded, radical_subspace, right_annihilator,
                      sparse_by_row, sparse_product)
from .matrices import Matrix, Subspace, inverse, rref, solve, Singular
from .semisimple import primitive_idempotent


# ---------------------------------------------------------------------------
# helpers


def _unit_matrix(field, n, r, c):
    m = Matrix.zeros(field, n, n)
    m.rows[r][c] = field.one
    return m


def _block_identity(field, blocks, i):
    m = Matrix.zeros(field, blocks.n, blocks.n)
    off = blocks.offsets[i]
    for a in range(blocks.sizes[i]):
        m.rows[off + a][off + a] = field.one
    return m


def _subspace_from_cells(field, dim, cells):
    vecs = []
    for idx in cells:
        v = [field.zero] * dim
        v[idx] = field.one
        vecs.append(v)
    return Subspace(field, dim, vecs)


class _ColumnSolver:
    """Repeated exact solves of  columns * x = rhs  with full column rank."""

    def __init__(self, field, columns, ambient):
        self.field = field
        self.columns = columns
        self.ambient = ambient
        mat = Matrix(field, [[col[i] for col in columns] for i in range(ambient)])
        ech, pivots = rref(field, [list(r) for r in zip(*mat.rows)])
        if len(ech) != len(columns):
            raise SolveFailed("solver columns are linearly dependent",
                              expected=len(columns), rank=len(ech))
        self.pivot_rows = pivots
        sub = Matrix(field, [[columns[j][r] for j in range(len(columns))]
                             for r in pivots])
        self.sub_inv = inverse(sub)
        self.mat = mat

    def solve(self, rhs, check=True):
        x = self.sub_inv.mul_vec([rhs[r] for r in self.pivot_rows])
        if check:
            f = self.field
            recon = self.mat.mul_vec(x)
            if recon != list(rhs):
                raise SolveFailed("vector outside the solver column span")
        return x


# ---------------------------------------------------------------------------
# stage 1: homogeneous block identities


@dataclass
class IdempotentCertificate:
    conjugator: Matrix
    conjugator_inv: Matrix
    grading: UTGrading
    steps: list
    identity_degrees_ok: bool = True
    block_gradedness: dict = dc_field(default_factory=dict)


def homogeneous_left_unit(grading, subspace, known_unit=None):
    """Homogeneous (degree e) left unit of a graded subspace with a left unit.

    The degree-e part of any left unit is itself a left unit when the
    subspace is graded; the result is verified to act as a left unit and to
    be idempotent.
    """
    basis_mats = [grading.matrix_of(v) for v in subspace.basis]
    if known_unit is None:
        known_unit = _solve_left_unit(grading, subspace, basis_mats)
    parts = grading.project_homogeneous(known_unit)
    u = parts.get(grading.group.identity)
    if u is None:
        raise ComponentNotLeftUnit("left unit has no degree-e part")
    for idx, x in enumerate(basis_mats):
        if u.mul(x) != x:
            raise ComponentNotLeftUnit("degree-e part is not a left unit",
                                       witness=idx)
    if u.mul(u) != u:
        raise ComponentNotLeftUnit("degree-e part is not idempotent")
    return u


def _solve_left_unit(grading, subspace, basis_mats):
    f = grading.field
    if not subspace.basis:
        raise NoLeftUnit("zero subspace has no left unit")
    cols = []
    for u_cand in basis_mats:
        col = []
        for x in basis_mats:
            col.extend(v for row in u_cand.mul(x).rows for v in row)
        cols.append(col)
    rhs = []
    for x in basis_mats:
        rhs.extend(v for row in x.rows for v in row)
    mat = Matrix(f, [[cols[j][i] for j in range(len(cols))]
                     for i in range(len(rhs))])
    sol = solve(mat, rhs)
    if sol is None:
        raise NoLeftUnit("subspace admits no left unit")
    u = Matrix.zeros(f, grading.n, grading.n)
    for c, m in zip(sol, basis_mats):
        if not f.is_zero(c):
            u = u.add(m.scale(c))
    return u


def homogenize_idempotents(grading):
    """Conjugate the grading until every block identity is homogeneous.

    Each step conjugates by 1 + w where u = E_i + w is the homogeneous left
    unit of the right annihilator of the current corner radical; w lies in
    the strict part of the corner's first block row, so w^2 = 0 and the
    inverse is 1 - w.  Afterwards every block M_ij is a graded subspace.
    """
    f = grading.field
    blocks = grading.blocks
    group = grading.group
    current = grading
    s_total = Matrix.identity(f, blocks.n)
    steps = []
    for i in range(blocks.t - 1):
        corner_cells = [idx for idx, (r, c) in enumerate(blocks.cells)
                        if blocks.block_of(r) >= i]
        corner = _subspace_from_cells(f, blocks.dim, corner_cells)
        rad_cells = [idx for idx in blocks.strict_upper
                     if blocks.block_of(blocks.cells[idx][0]) >= i]
        corner_radical = _subspace_from_cells(f, blocks.dim, rad_cells)
        ok, dims = is_subspace_graded(current, corner_radical)
        if not ok:
            raise RadicalNotGraded(
                "corner radical is not graded",
                block=i, component_dims=_dims_json(group, dims))
        ann = right_annihilator(current, corner_radical).intersection(corner)
        ok, _ = is_subspace_graded(current, ann)
        if not ok:
            raise SolveFailed("annihilator of a graded subspace is not graded",
                              block=i)
        e_cur = _block_identity(f, blocks, i)
        u = homogeneous_left_unit(current, ann, known_unit=e_cur)
        w = u.sub(e_cur)
        _check_strict_row(f, blocks, w, i)
        if not w.mul(e_cur).is_zero():
            raise SolveFailed("left unit correction does not kill E_i")
        if not w.mul(w).is_zero():
            raise SolveFailed("left unit correction is not square-zero")
        if w.is_zero():
            steps.append({"block": i, "trivial": True})
            continue
        t_mat = Matrix.identity(f, blocks.n).add(w)
        current = apply_inner_automorphism(current, t_mat)
        s_total = t_mat.mul(s_total)
        steps.append({"block": i, "trivial": False})
    # verify every block identity is homogeneous of degree e
    ident = group.identity
    for i in range(blocks.t):
        e_i = _block_identity(f, blocks, i)
        coeffs = current.project_coords(current.coords_of(e_i))
        for k, c in enumerate(coeffs):
            if not f.is_zero(c) and current.degrees[k] != ident:
                raise SolveFailed("block identity is not homogeneous of "
                                  "degree e after conjugation", block=i)
    block_cert = {}
    for i in range(blocks.t):
        for j in range(i, blocks.t):
            span = _subspace_from_cells(f, blocks.dim, blocks.block_cells(i, j))
            ok, dims = is_subspace_graded(current, span)
            if not ok:
                raise SolveFailed("block subspace is not graded", block=[i, j])
            block_cert[(i, j)] = _dims_json(group, dims)
    return IdempotentCertificate(
        conjugator=s_total, conjugator_inv=inverse(s_total), grading=current,
        steps=steps, block_gradedness=block_cert)


def _check_strict_row(field, blocks, w, i):
    for r in range(blocks.n):
        for c in range(blocks.n):
            if field.is_zero(w.rows[r][c]):
                continue
            if blocks.block_of(r) != i or blocks.block_of(c) <= i:
                raise SolveFailed("left unit correction outside the strict "
                                  "first block row", block=i, position=[r, c])


def _dims_json(group, dims):
    return [[group.element_to_json(d), n] for d, n in dims]


# ---------------------------------------------------------------------------
# stage 2: block decomposition


@dataclass
class BlockDecomposition:
    index: int
    p: int
    s: int
    seq: list
    dalg: GradedDivisionAlgebra
    d_mats: list                 # D basis as full-size matrices
    d_degrees: list
    v_mats: list                 # homogeneous module basis, full-size
    f_idem: Matrix
    phi: Matrix                  # block cell coords -> M_p(D) coords
    phi_inv: Matrix
    block_cells: list
    n_local: int
    grading: UTGrading

    def embed(self, row, col, d_coeffs):
        """Full-size matrix of e_{row,col} (x) d under the identification."""
        f = self.grading.field
        s2 = self.dalg.dim
        vec = [f.zero] * (self.p * self.p * s2)
        base = (row * self.p + col) * s2
        for m, c in enumerate(d_coeffs):
            vec[base + m] = c
        local = self.phi_inv.mul_vec(vec)
        out = Matrix.zeros(f, self.grading.n, self.grading.n)
        for idx, v in zip(self.block_cells, local):
            if not f.is_zero(v):
                r, c = self.grading.blocks.cells[idx]
                out.rows[r][c] = v
        return out

    def embed_idem(self, j):
        return self.embed(j, j, self.dalg.unity)

    def to_mpd(self, mat):
        """M_p(D) coordinates of a block element (full-size matrix)."""
        coords = self.grading.coords_of(mat)
        local = [coords[idx] for idx in self.block_cells]
        return self.phi.mul_vec(local)


def _local_matrix(field, n_local, vec):
    return Matrix(field, [[vec[r * n_local + c] for c in range(n_local)]
                          for r in range(n_local)])


def _full_from_local(field, grading, block_cells, local_mat):
    out = Matrix.zeros(field, grading.n, grading.n)
    n_local = local_mat.nrows
    for a in range(n_local):
        for b in range(n_local):
            v = local_mat.rows[a][b]
            if not field.is_zero(v):
                r, c = grading.blocks.cells[block_cells[a * n_local + b]]
                out.rows[r][c] = v
    return out


def decompose_block(grading, i):
    """Split diagonal block i as p x p matrices over a graded division algebra.

    A primitive idempotent f of the (semisimple) identity component generates
    a minimal graded left ideal V = A f; D = f A f acts on V on the right by
    plain multiplication, a homogeneous free module basis of V gives the
    elementary sequence, and the action matrices give the identification.
    """
    f = grading.field
    group = grading.group
    blocks = grading.blocks
    n_local = blocks.sizes[i]
    block_cells = blocks.block_cells(i, i)
    cell_pos = {idx: k for k, idx in enumerate(block_cells)}
    dim_local = n_local * n_local
    span = _subspace_from_cells(f, blocks.dim, block_cells)

    comp_local = {}
    total = 0
    for deg, space in grading.component_spaces.items():
        inter = space.intersection(span)
        if inter.dim == 0:
            continue
        local_vecs = []
        for vec in inter.basis:
            lv = [f.zero] * dim_local
            for idx, v in enumerate(vec):
                if not f.is_zero(v):
                    lv[cell_pos[idx]] = v
            local_vecs.append(lv)
        comp_local[deg] = Subspace(f, dim_local, local_vecs)
        total += inter.dim
    if total != dim_local:
        raise BlockNotGraded("diagonal block is not graded", block=i,
                             graded_dim=total, expected=dim_local)

    ident_deg = group.identity
    a_e = comp_local.get(ident_deg)
    if a_e is None:
        raise BlockNotGraded("identity component of block is empty", block=i)
    a_e_mats = [_local_matrix(f, n_local, v) for v in a_e.basis]
    e_local = Matrix.identity(f, n_local)
    if not a_e.contains([v for row in e_local.rows for v in row]):
        raise SolveFailed("block identity missing from identity component",
                          block=i)
    _semisimple_precheck(f, a_e_mats, i)

    f_idem = primitive_idempotent(f, a_e_mats, e_local)

    # V = A f, spanned by the unit matrices times f
    v_vectors = []
    for r in range(n_local):
        for c in range(n_local):
            m = _unit_matrix(f, n_local, r, c).mul(f_idem)
            v_vectors.append([v for row in m.rows for v in row])
    v_space = Subspace(f, dim_local, v_vectors)

    # D = f A f
    d_vectors = []
    for r in range(n_local):
        for c in range(n_local):
            m = f_idem.mul(_unit_matrix(f, n_local, r, c)).mul(f_idem)
            d_vectors.append([v for row in m.rows for v in row])
    d_space = Subspace(f, dim_local, d_vectors)

    d_basis_local = []
    d_degrees = []
    for deg, space in comp_local.items():
        inter = d_space.intersection(space)
        for vec in inter.basis:
            d_basis_local.append(_local_matrix(f, n_local, vec))
            d_degrees.append(deg)
    if len(d_basis_local) != d_space.dim:
        raise EndomorphismNotDivision("endomorphism algebra is not graded",
                                      block=i)
    s2 = d_space.dim
    s = _int_sqrt(s2)
    if s is None or n_local % s != 0:
        raise EndomorphismNotDivision(
            "endomorphism algebra dimension is not compatible",
            block=i, dim=s2, block_size=n_local)
    p = n_local // s
    if v_space.dim != p * s2:
        raise EndomorphismNotDivision(
            "minimal ideal dimension mismatch", block=i,
            ideal_dim=v_space.dim, expected=p * s2)

    dalg = _division_algebra_from_mats(f, group, d_basis_local, d_degrees, f_idem)

    # homogeneous free module basis of V over D
    v_mats_local = []
    v_degrees = []
    span_vectors = []
    span_space = Subspace(f, dim_local, [])
    for deg, space in comp_local.items():
        inter = v_space.intersection(space)
        for vec in inter.basis:
            if span_space.contains(vec):
                continue
            vm = _local_matrix(f, n_local, vec)
            v_mats_local.append(vm)
            v_degrees.append(deg)
            for dm in d_basis_local:
                prod = vm.mul(dm)
                span_vectors.append([v for row in prod.rows for v in row])
            span_space = Subspace(f, dim_local, span_vectors)
            if span_space.dim == v_space.dim:
                break
        if span_space.dim == v_space.dim:
            break
    if len(v_mats_local) != p or span_space.dim != v_space.dim:
        raise EndomorphismNotDivision(
            "module basis selection failed", block=i,
            found=len(v_mats_local), expected=p)

    # identification: a . v_j = sum_k v_k d_kj
    vd_columns = []
    for vm in v_mats_local:
        for dm in d_basis_local:
            prod = vm.mul(dm)
            vd_columns.append([v for row in prod.rows for v in row])
    vd_solver = _ColumnSolver(f, vd_columns, dim_local)

    phi_cols = []
    for a in range(n_local):
        for b in range(n_local):
            unit = _unit_matrix(f, n_local, a, b)
            col = [f.zero] * (p * p * s2)
            for j, vj in enumerate(v_mats_local):
                rhs = unit.mul(vj)
                sol = vd_solver.solve([v for row in rhs.rows for v in row])
                for k in range(p):
                    for m in range(s2):
                        col[(k * p + j) * s2 + m] = sol[k * s2 + m]
            phi_cols.append(col)
    phi = Matrix(f, [[phi_cols[c][r] for c in range(dim_local)]
                     for r in range(p * p * s2)])
    try:
        phi_inv = inverse(phi)
    except Singular as exc:
        raise EndomorphismNotDivision("block identification is not bijective",
                                      block=i) from exc

    bd = BlockDecomposition(
        index=i, p=p, s=s, seq=v_degrees, dalg=dalg,
        d_mats=[_full_from_local(f, grading, block_cells, m) for m in d_basis_local],
        d_degrees=d_degrees,
        v_mats=[_full_from_local(f, grading, block_cells, m) for m in v_mats_local],
        f_idem=_full_from_local(f, grading, block_cells, f_idem),
        phi=phi, phi_inv=phi_inv, block_cells=block_cells,
        n_local=n_local, grading=grading)
    _verify_block_identification(bd, comp_local, cell_pos)
    return bd


def _semisimple_precheck(field, mats, block):
    if field.characteristic and field.characteristic <= mats[0].nrows:
        return
    k = len(mats)
    gram = Matrix(field, [[mats[a].mul(mats[b]).trace() for b in range(k)]
                          for a in range(k)])
    from .matrices import kernel_basis
    if kernel_basis(gram):
        raise EndomorphismNotDivision(
            "identity component has a nonzero radical", block=block)


def _int_sqrt(n):
    r = int(n ** 0.5)
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand * cand == n:
            return cand
    return None


def _division_algebra_from_mats(field, group, d_mats, d_degrees, unity_mat):
    flat = [[v for row in m.rows for v in row] for m in d_mats]
    solver = _ColumnSolver(field, flat, len(flat[0]))
    table = {}
    dim = len(d_mats)
    for a in range(dim):
        for b in range(dim):
            prod = d_mats[a].mul(d_mats[b])
            coeffs = solver.solve([v for row in prod.rows for v in row])
            terms = [(k, v) for k, v in enumerate(coeffs) if not field.is_zero(v)]
            if terms:
                table[(a, b)] = terms
    unity = solver.solve([v for row in unity_mat.rows for v in row])
    alg = GradedDivisionAlgebra(field, group, d_degrees, table, unity)
    alg.validate(check_associativity=True)
    alg.verify_division()
    return alg


def _verify_block_identification(bd, comp_local, cell_pos):
    """Exhaustive check: the identification is a degree-preserving iso."""
    f = bd.grading.field
    group = bd.grading.group
    p, s2 = bd.p, bd.dalg.dim
    hom_basis = []
    for deg, space in comp_local.items():
        for vec in space.basis:
            hom_basis.append((_local_matrix(f, bd.n_local, vec), deg))
    local_phi = lambda m: bd.phi.mul_vec(
        [m.rows[r][c] for r in range(bd.n_local) for c in range(bd.n_local)])
    images = [(local_phi(m), deg) for m, deg in hom_basis]
    for (xc, xd) in images:
        for k in range(p):
            for j in range(p):
                base = (k * p + j) * s2
                for m in range(s2):
                    if f.is_zero(xc[base + m]):
                        continue
                    expect = group.mul(bd.seq[k],
                                       group.mul(bd.d_degrees[m],
                                                 group.inv(bd.seq[j])))
                    if expect != xd:
                        raise SolveFailed(
                            "block identification violates degrees",
                            block=bd.index)
    for (xm, _), (xc, _) in zip(hom_basis, images):
        for (ym, _), (yc, _) in zip(hom_basis, images):
            prod = local_phi(xm.mul(ym))
            if prod != _mpd_mul(bd.dalg, p, xc, yc):
                raise SolveFailed("block identification not multiplicative",
                                  block=bd.index)


def _mpd_mul(dalg, p, x, y):
    """Product in M_p(D) coordinates."""
    f = dalg.field
    s2 = dalg.dim
    out = [f.zero] * (p * p * s2)
    for k in range(p):
        for j in range(p):
            xe = x[(k * p + j) * s2:(k * p + j) * s2 + s2]
            if all(f.is_zero(v) for v in xe):
                continue
            for l in range(p):
                ye = y[(j * p + l) * s2:(j * p + l) * s2 + s2]
                if all(f.is_zero(v) for v in ye):
                    continue
                prod = dalg.mul_coords(xe, ye)
                base = (k * p + l) * s2
                for m, v in enumerate(prod):
                    out[base + m] = f.add(out[base + m], v)
    return out


# ---------------------------------------------------------------------------
# stage 3: weak isomorphisms and chain data


@dataclass
class WeakIsomorphism:
    r: int
    v: Matrix
    degree: object
    matrix: Matrix  # D_r coords -> D_{r+1} coords


@dataclass
class ChainData:
    v: dict        # (r, s) -> Matrix
    v_degree: dict
    psi: dict      # (r, s) -> Matrix over the field


def weak_iso(grading, bd_r, bd_s):
    """Weak isomorphism D_r -> D_{r+1} through V = (e_pp (x) 1) U (e_11 (x) 1)."""
    f = grading.field
    fl = bd_r.embed_idem(bd_r.p - 1)
    fr = bd_s.embed_idem(0)
    v = None
    v_deg = None
    v_vectors = []
    for bm, bdeg in grading.basis:
        w = fl.mul(bm).mul(fr)
        if not w.is_zero():
            v_vectors.append([vv for row in w.rows for vv in row])
            if v is None:
                v = w
                v_deg = bdeg
    if v is None:
        raise NoNonzeroHomogeneous("connecting bimodule is zero",
                                   blocks=[bd_r.index, bd_s.index])
    v_dim = len(rref(f, v_vectors)[0])
    if not (v_dim == bd_r.dalg.dim == bd_s.dalg.dim):
        raise SolveFailed("bimodule dimension law violated",
                          v_dim=v_dim, dim_dr=bd_r.dalg.dim,
                          dim_ds=bd_s.dalg.dim)

    s2 = bd_s.dalg.dim
    cols = []
    for m in range(s2):
        em = [f.zero] * s2
        em[m] = f.one
        prod = v.mul(bd_s.embed(0, 0, em))
        cols.append([vv for row in prod.rows for vv in row])
    solver = _ColumnSolver(f, cols, grading.n * grading.n)

    images = []
    for m in range(bd_r.dalg.dim):
        em = [f.zero] * bd_r.dalg.dim
        em[m] = f.one
        lhs = bd_r.embed(bd_r.p - 1, bd_r.p - 1, em).mul(v)
        images.append(solver.solve([vv for row in lhs.rows for vv in row]))
    psi = Matrix(f, [[images[j][i] for j in range(len(images))]
                     for i in range(s2)])
    _verify_weak_iso(grading, bd_r, bd_s, v, v_deg, psi)
    return WeakIsomorphism(r=bd_r.index, v=v, degree=v_deg, matrix=psi)


def _verify_weak_iso(grading, bd_r, bd_s, v, v_deg, psi):
    f = grading.field
    group = grading.group
    try:
        inverse(psi)
    except Singular as exc:
        raise SolveFailed("weak isomorphism is not bijective") from exc
    dr, ds = bd_r.dalg, bd_s.dalg
    cols = [[psi.rows[i][j] for i in range(ds.dim)] for j in range(dr.dim)]
    for a in range(dr.dim):
        for b in range(dr.dim):
            prod = dr.mul_coords(dr._unit_vector(a), dr._unit_vector(b))
            lhs = _apply_columns(f, cols, prod, ds.dim)
            rhs = ds.mul_coords(cols[a], cols[b])
            if lhs != rhs:
                raise SolveFailed("weak isomorphism not multiplicative",
                                  pair=[a, b])
    gi = bd_r.seq[bd_r.p - 1]
    gj = bd_s.seq[0]
    for m in range(dr.dim):
        img_deg = _homogeneous_degree(f, ds, cols[m])
        if img_deg is None:
            raise SolveFailed("weak isomorphism image not homogeneous", index=m)
        lhs = group.mul(gj, group.mul(img_deg, group.inv(gj)))
        mid = group.mul(gi, group.mul(bd_r.d_degrees[m], group.inv(gi)))
        rhs = group.mul(group.inv(v_deg), group.mul(mid, v_deg))
        if lhs != rhs:
            raise SolveFailed("weak isomorphism degree relation failed",
                              index=m)


def _apply_columns(field, cols, coeffs, out_dim):
    out = [field.zero] * out_dim
    for j, c in enumerate(coeffs):
        if field.is_zero(c):
            continue
        for i in range(out_dim):
            out[i] = field.add(out[i], field.mul(c, cols[j][i]))
    return out


def _homogeneous_degree(field, alg, coeffs):
    deg = None
    for i, c in enumerate(coeffs):
        if field.is_zero(c):
            continue
        if deg is None:
            deg = alg.degrees[i]
        elif alg.degrees[i] != deg:
            return None
    return deg


def compose_chain(grading, blockdatas, weak_isos):
    """All v^{rs} and psi_{rs} for r < s, with the commutation law verified."""
    f = grading.field
    group = grading.group
    t = len(blockdatas)
    v = {}
    v_degree = {}
    psi = {}
    for w in weak_isos:
        r = w.r
        v[(r, r + 1)] = w.v
        v_degree[(r, r + 1)] = w.degree
        psi[(r, r + 1)] = w.matrix
    for gap in range(2, t):
        for r in range(0, t - gap):
            s = r + gap
            mid = blockdatas[s - 1]
            connector = mid.embed(0, mid.p - 1, mid.dalg.unity)
            vrs = v[(r, s - 1)].mul(connector).mul(v[(s - 1, s)])
            if vrs.is_zero():
                raise ChainElementZero("composed chain element vanished",
                                       pair=[r, s])
            v[(r, s)] = vrs
            conn_deg = group.mul(mid.seq[0], group.inv(mid.seq[mid.p - 1]))
            v_degree[(r, s)] = group.mul(
                v_degree[(r, s - 1)], group.mul(conn_deg, v_degree[(s - 1, s)]))
            psi[(r, s)] = psi[(s - 1, s)].mul(psi[(r, s - 1)])
    chain = ChainData(v=v, v_degree=v_degree, psi=psi)
    _verify_chain(grading, blockdatas, chain)
    return chain


def _verify_chain(grading, blockdatas, chain):
    f = grading.field
    group = grading.group
    for (r, s), vrs in chain.v.items():
        # v^{rs} is nonzero and homogeneous of the recorded degree
        coeffs = grading.project_coords(grading.coords_of(vrs))
        deg = chain.v_degree[(r, s)]
        for k, c in enumerate(coeffs):
            if not f.is_zero(c) and grading.degrees[k] != deg:
                raise ChainElementZero("chain element is not homogeneous",
                                       pair=[r, s])
        # commutation: d * v = v * psi(d) for every basis d of D_r
        bd_r, bd_s = blockdatas[r], blockdatas[s]
        m = chain.psi[(r, s)]
        cols = [[m.rows[i][j] for i in range(bd_s.dalg.dim)]
                for j in range(bd_r.dalg.dim)]
        for a in range(bd_r.dalg.dim):
            ea = [f.zero] * bd_r.dalg.dim
            ea[a] = f.one
            lhs = bd_r.embed(bd_r.p - 1, bd_r.p - 1, ea).mul(vrs)
            rhs = vrs.mul(bd_s.embed(0, 0, cols[a]))
            if lhs != rhs:
                raise ChainElementZero("chain commutation law failed",
                                       pair=[r, s], basis=a)


# ---------------------------------------------------------------------------
# stage 4: eta and the isomorphism


def build_eta(group, blockdatas, chain):
    """Shifts u_i and the elementary sequence eta of length sum p_i."""
    t = len(blockdatas)
    shifts = [group.identity]
    for i in range(1, t):
        g1 = blockdatas[i].seq[0]
        h = chain.v_degree[(0, i)]
        u = group.mul(group.inv(g1),
                      group.mul(group.inv(h), blockdatas[0].seq[-1]))
        shifts.append(u)
    eta = []
    for i, bd in enumerate(blockdatas):
        for g in bd.seq:
            eta.append(group.mul(g, shifts[i]))
    return shifts, eta


def tensor_block_algebra(field, group, blocks_prime, eta, dalg):
    """The canonical algebra: UT(p_1,...,p_t) tensor D with elementary eta."""
    if not isinstance(blocks_prime, BlockStructure):
        blocks_prime = BlockStructure(blocks_prime)
    s2 = dalg.dim
    degrees = []
    for (r, c) in blocks_prime.cells:
        for m in range(s2):
            degrees.append(group.mul(eta[r], group.mul(dalg.degrees[m],
                                                       group.inv(eta[c]))))
    table = {}
    cell_index = blocks_prime.cell_index
    for ci, (r, c) in enumerate(blocks_prime.cells):
        for cj, (r2, c2) in enumerate(blocks_prime.cells):
            if c != r2:
                continue
            target_cell = cell_index.get((r, c2))
            if target_cell is None:
                continue
            for m in range(s2):
                for m2 in range(s2):
                    terms = dalg.basis_product(m, m2)
                    if not terms:
                        continue
                    out = [(target_cell * s2 + k, val) for k, val in terms]
                    table[(ci * s2 + m, cj * s2 + m2)] = out
    unity = [field.zero] * (blocks_prime.dim * s2)
    for d in range(blocks_prime.n):
        cell = cell_index[(d, d)]
        for m, cval in enumerate(dalg.unity):
            unity[cell * s2 + m] = cval
    alg = AbstractGradedAlgebra(field, group, degrees, table, unity)
    alg.validate(check_associativity=False)
    return alg


@dataclass
class CanonicalForm:
    blocks_prime: list
    eta: list
    shifts: list
    division: GradedDivisionAlgebra
    algebra: AbstractGradedAlgebra
    psi_matrix: Matrix           # canonical basis -> input homogeneous basis
    certificate: dict
    source: UTGrading
    idempotent_stage: IdempotentCertificate = None
    blockdata: list = None
    chain: ChainData = None

    def to_json(self):
        f = self.source.field
        group = self.source.group
        return {
            "blocks_prime": list(self.blocks_prime),
            "eta": [group.element_to_json(g) for g in self.eta],
            "shifts": [group.element_to_json(g) for g in self.shifts],
            "division_algebra": self.division.to_json(),
            "psi_matrix": [[f.serialize(v) for v in row]
                           for row in self.psi_matrix.rows],
            "certificate": dict(self.certificate),
        }


def build_psi(grading0, idem_stage, blockdatas, chain, shifts, eta):
    """The canonical algebra and the verified isomorphism onto the input."""
    f = grading0.field
    group = grading0.group
    t = len(blockdatas)
    blocks_prime = BlockStructure([bd.p for bd in blockdatas])
    d1 = blockdatas[0].dalg
    s2 = d1.dim
    algebra = tensor_block_algebra(f, group, blocks_prime, eta, d1)

    psi_maps = {0: Matrix.identity(f, s2)}
    for l in range(1, t):
        psi_maps[l] = chain.psi[(0, l)]

    sinv = idem_stage.conjugator_inv
    s_mat = idem_stage.conjugator
    images = []
    for ci, (r, c) in enumerate(blocks_prime.cells):
        k = blocks_prime.block_of(r)
        l = blocks_prime.block_of(c)
        ri = r - blocks_prime.offsets[k]
        cj = c - blocks_prime.offsets[l]
        for m in range(s2):
            em = [f.zero] * s2
            em[m] = f.one
            mapped = psi_maps[k].mul_vec(em) if k else list(em)
            if k == l:
                img = blockdatas[k].embed(ri, cj, mapped)
            else:
                left = blockdatas[k].embed(ri, blockdatas[k].p - 1, mapped)
                right = blockdatas[l].embed(0, cj, blockdatas[l].dalg.unity)
                img = left.mul(chain.v[(k, l)]).mul(right)
            images.append(sinv.mul(img).mul(s_mat))

    dim = grading0.dim
    cols = []
    sparse_images = []
    for img in images:
        coords = grading0.coords_of(img)
        cols.append(grading0.project_coords(coords))
        sparse_images.append({grading0.blocks.cells[ix]: v
                              for ix, v in enumerate(coords)
                              if not f.is_zero(v)})
    psi_matrix = Matrix(f, [[cols[j][i] for j in range(dim)] for i in range(dim)])

    certificate = _verify_psi(grading0, algebra, psi_matrix, cols, sparse_images)
    return algebra, psi_matrix, certificate


def _verify_psi(grading, algebra, psi_matrix, cols, sparse_images):
    f = grading.field
    try:
        inverse(psi_matrix)
    except Singular as exc:
        raise PsiNotBijective("canonical map is not bijective") from exc
    # degree preservation: column support must match the component
    components = grading.components
    for j in range(algebra.dim):
        deg = algebra.degrees[j]
        allowed = set(components.get(deg, ()))
        for k, c in enumerate(cols[j]):
            if not f.is_zero(c) and k not in allowed:
                raise PsiDegreeMismatch("image has the wrong degree", witness=j)
    by_row = [sparse_by_row(sp) for sp in sparse_images]
    dim = algebra.dim
    for i in range(dim):
        for j in range(dim):
            lhs = sparse_product(f, sparse_images[i], by_row[j])
            rhs = {}
            for k, v in algebra.basis_product(i, j):
                for pos, val in sparse_images[k].items():
                    prev = rhs.get(pos)
                    term = f.mul(v, val)
                    rhs[pos] = term if prev is None else f.add(prev, term)
            rhs = {kk: vv for kk, vv in rhs.items() if not f.is_zero(vv)}
            if lhs != rhs:
                raise PsiNotMultiplicative("canonical map not multiplicative",
                                           witness=[i, j])
    return {
        "psi_bijective": True,
        "psi_graded": True,
        "psi_hom": True,
    }


def decompose(grading):
    """Full pipeline: canonical form plus verified isomorphism certificate."""
    j_space = radical_subspace(grading)
    ok, dims = is_subspace_graded(grading, j_space)
    if not ok:
        raise RadicalNotGraded(
            "Jacobson radical is not a graded subspace",
            radical_dim=j_space.dim,
            component_dims=_dims_json(grading.group, dims))

    idem_stage = homogenize_idempotents(grading)
    grading1 = idem_stage.grading
    blockdatas = [decompose_block(grading1, i)
                  for i in range(grading.blocks.t)]
    dims_d = {bd.dalg.dim for bd in blockdatas}
    if len(dims_d) > 1:
        raise SolveFailed("division algebra dimensions differ across blocks",
                          dims=sorted(dims_d))
    weak_isos = [weak_iso(grading1, blockdatas[r], blockdatas[r + 1])
                 for r in range(grading.blocks.t - 1)]
    chain = compose_chain(grading1, blockdatas, weak_isos)
    shifts, eta = build_eta(grading.group, blockdatas, chain)
    algebra, psi_matrix, certificate = build_psi(
        grading, idem_stage, blockdatas, chain, shifts, eta)
    certificate = {
        "radical_graded": True,
        "weakiso_checked": True,
        "eqcom_checked": True,
        **certificate,
    }
    return CanonicalForm(
        blocks_prime=[bd.p for bd in blockdatas],
        eta=eta, shifts=shifts,
        division=blockdatas[0].dalg,
        algebra=algebra,
        psi_matrix=psi_matrix,
        certificate=certificate,
        source=grading,
        idempotent_stage=idem_stage,
        blockdata=blockdatas,
        chain=chain)
