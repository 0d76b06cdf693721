"""Builders for standard gradings: elementary gradings, twisted group
algebras K^sigma T, small division-graded realizations inside M_2, and
tensor-product gradings e_ij (x) d with degree g_i deg(d) g_j^{-1}.
"""

from __future__ import annotations

from .algebras import GradedDivisionAlgebra
from .errors import (CocycleIdentityFails, InvalidInput, LengthMismatch,
                     NotABasis, NotNormalized, UnsupportedCocycle, ZeroValue)
from .grading import BlockStructure, validate_grading
from .matrices import Matrix, Singular, inverse, rref


def elementary_grading(field, group, blocks, sequence):
    """Elementary grading on UT(n1,...,nt): deg e_ij = g_i g_j^{-1}."""
    if not isinstance(blocks, BlockStructure):
        blocks = BlockStructure(blocks)
    sequence = list(sequence)
    if len(sequence) != blocks.n:
        raise LengthMismatch(
            f"sequence length {len(sequence)} != matrix size {blocks.n}",
            expected=blocks.n, got=len(sequence))
    for g in sequence:
        group.check_element(g)
    basis = []
    for (r, c) in blocks.cells:
        m = Matrix.zeros(field, blocks.n, blocks.n)
        m.rows[r][c] = field.one
        deg = group.mul(sequence[r], group.inv(sequence[c]))
        basis.append((m, deg))
    return validate_grading(field, group, blocks, basis)


class Cocycle:
    """Normalized 2-cocycle on a finite group T with values in K^x."""

    def __init__(self, field, group, values, _checked=False):
        self.field = field
        self.group = group
        self.values = [list(row) for row in values]
        if not _checked:
            _check_cocycle(field, group, self.values)

    def __call__(self, a, b):
        return self.values[a][b]

    def to_json(self):
        f = self.field
        return {
            "support_group": self.group.to_json(),
            "values": [[f.serialize(v) for v in row] for row in self.values],
        }

    @classmethod
    def from_json(cls, obj, field):
        from .groups import group_from_json
        group = group_from_json(obj["support_group"])
        values = [[field.parse(v) for v in row] for row in obj["values"]]
        return validate_cocycle(field, group, values)


def _check_cocycle(field, group, values):
    m = group.order
    if len(values) != m or any(len(row) != m for row in values):
        raise InvalidInput("cocycle table must be order x order")
    for a in range(m):
        for b in range(m):
            if field.is_zero(values[a][b]):
                raise ZeroValue("cocycle values must be nonzero", pair=[a, b])
    for g in range(m):
        if values[0][g] != field.one or values[g][0] != field.one:
            raise NotNormalized("cocycle must satisfy s(e,.) = s(.,e) = 1",
                                element=g)
    for a in range(m):
        for b in range(m):
            ab = group.mul(a, b)
            for c in range(m):
                lhs = field.mul(values[a][b], values[ab][c])
                rhs = field.mul(values[b][c], values[a][group.mul(b, c)])
                if lhs != rhs:
                    raise CocycleIdentityFails("2-cocycle identity fails",
                                               triple=[a, b, c])


def validate_cocycle(field, group, values):
    """Verify the 2-cocycle identity on all |T|^3 triples and normalization."""
    if group.kind != "finite":
        raise InvalidInput("cocycles need a finite support group")
    _check_cocycle(field, group, values)
    return Cocycle(field, group, values, _checked=True)


def trivial_cocycle(field, group):
    one = field.one
    return Cocycle(field, group, [[one] * group.order for _ in range(group.order)],
                   _checked=True)


def twisted_group_algebra(field, cocycle):
    """K^sigma T: basis u_t, deg u_t = t, u_a u_b = sigma(a,b) u_{ab}.

    The division property is verified exhaustively: the two-sided inverse of
    u_t is sigma(t, t^{-1})^{-1} u_{t^{-1}}.
    """
    group = cocycle.group
    m = group.order
    table = {}
    for a in range(m):
        for b in range(m):
            table[(a, b)] = [(group.mul(a, b), cocycle(a, b))]
    unity = [field.zero] * m
    unity[0] = field.one
    alg = GradedDivisionAlgebra(field, group, list(range(m)), table, unity,
                                labels=[f"u{group.element_name(t)}" for t in range(m)])
    alg.validate(check_associativity=True)
    for t in range(m):
        tinv = group.inv(t)
        cand = [field.zero] * m
        cand[tinv] = field.inv(cocycle(t, tinv))
        ut = alg._unit_vector(t)
        if alg.mul_coords(ut, cand) != unity or alg.mul_coords(cand, ut) != unity:
            raise UnsupportedCocycle("twisted basis element is not invertible",
                                     element=t)
    alg.verify_division()
    return alg


def matrix_realization(algebra):
    """Left regular representation: basis element -> left-multiplication matrix.

    Returns a degree-labelled list [(Matrix, degree), ...] in M_m, m = dim.
    The map is unital, multiplicative and injective; all three properties are
    checked exhaustively on the basis.
    """
    f = algebra.field
    mats = []
    for i in range(algebra.dim):
        mats.append(algebra.left_mult_matrix(algebra._unit_vector(i)))
    unity_mat = Matrix.zeros(f, algebra.dim, algebra.dim)
    for i, c in enumerate(algebra.unity):
        if f.is_zero(c):
            continue
        for k, row in enumerate(mats[i].rows):
            for j, v in enumerate(row):
                unity_mat.rows[k][j] = f.add(unity_mat.rows[k][j], f.mul(c, v))
    if unity_mat != Matrix.identity(f, algebra.dim):
        raise InvalidInput("regular representation is not unital")
    for i in range(algebra.dim):
        for j in range(algebra.dim):
            prod = mats[i].mul(mats[j])
            expect = Matrix.zeros(f, algebra.dim, algebra.dim)
            for k, v in algebra.basis_product(i, j):
                for r in range(algebra.dim):
                    for c in range(algebra.dim):
                        expect.rows[r][c] = f.add(expect.rows[r][c],
                                                  f.mul(v, mats[k].rows[r][c]))
            if prod != expect:
                raise InvalidInput("regular representation not multiplicative",
                                   pair=[i, j])
    flat = [[v for row in m.rows for v in row] for m in mats]
    if len(rref(f, flat)[0]) != algebra.dim:
        raise InvalidInput("regular representation is not injective")
    return [(m, algebra.degrees[i]) for i, m in enumerate(mats)]


def pauli_cocycle(field, group):
    """The Klein four-group cocycle s(a^x b^y, a^z b^w) = (-1)^(y z).

    ``group`` must be the Klein table with elements ordered e, a, b, ab.
    """
    coords = {0: (0, 0), 1: (1, 0), 2: (0, 1), 3: (1, 1)}
    one, neg = field.one, field.neg(field.one)
    values = []
    for i in range(4):
        _, y = coords[i]
        row = []
        for j in range(4):
            z, _ = coords[j]
            row.append(neg if (y and z) else one)
        values.append(row)
    return validate_cocycle(field, group, values)


def _is_pauli_type(field, cocycle):
    group = cocycle.group
    if group.order != 4:
        return False
    for g in range(4):
        if group.mul(g, g) != 0:
            return False
    expected = pauli_cocycle(field, group)
    return expected.values == cocycle.values


def division_realization_2x2(field, cocycle):
    """Faithful realization of the Pauli-type Klein cocycle inside M_2.

    Returns the degree-labelled basis [I -> e, diag(1,-1) -> a,
    offdiag(1,1) -> b, product -> ab]; every nonzero homogeneous element of
    the induced grading on M_2 is invertible.
    """
    if field.characteristic == 2:
        raise UnsupportedCocycle("needs characteristic different from 2")
    if not _is_pauli_type(field, cocycle):
        raise UnsupportedCocycle("only the Pauli-type Klein cocycle is supported")
    one, neg = field.one, field.neg(field.one)
    zero = field.zero
    x = Matrix(field, [[one, zero], [zero, neg]])
    y = Matrix(field, [[zero, one], [one, zero]])
    return [(Matrix.identity(field, 2), 0), (x, 1), (y, 2), (x.mul(y), 3)]


def quadratic_realization_2x2(field, c):
    """Division grading on M_2 with support Z_2 and 2-dimensional components.

    The identity component is the regular realization of K^sigma Z_2 with
    sigma(a, a) = c: span{I, u} with u = [[0, c], [1, 0]], u^2 = c.  The other
    component is span{w, uw} with w = diag(1, -1).  Division holds iff c is
    not a square in the field.  Degrees are 0 (identity) and 1 in Z_2.
    """
    if field.characteristic == 2:
        raise UnsupportedCocycle("needs characteristic different from 2")
    if field.is_zero(c):
        raise ZeroValue("twist constant must be nonzero")
    if field.is_square(c):
        raise UnsupportedCocycle("twist constant must be a non-square",
                                 c=field.serialize(c))
    one, zero = field.one, field.zero
    u = Matrix(field, [[zero, c], [one, zero]])
    w = Matrix(field, [[one, zero], [zero, field.neg(one)]])
    return [(Matrix.identity(field, 2), 0), (u, 0), (w, 1), (u.mul(w), 1)]


def labelled_basis_algebra(field, group, labelled):
    """Abstract algebra spanned by a degree-labelled matrix basis of M_s."""
    mats = [m for m, _ in labelled]
    degrees = [d for _, d in labelled]
    s = mats[0].nrows
    flat = [[v for row in m.rows for v in row] for m in mats]
    basis_matrix = Matrix(field, [list(col) for col in zip(*flat)])
    try:
        binv = inverse(basis_matrix)
    except Singular as exc:
        raise NotABasis("labelled matrices are linearly dependent") from exc
    def coords_of(m):
        vec = [v for row in m.rows for v in row]
        return binv.mul_vec(vec)
    table = {}
    for i, a in enumerate(mats):
        for j, b in enumerate(mats):
            coeffs = coords_of(a.mul(b))
            terms = [(k, v) for k, v in enumerate(coeffs) if not field.is_zero(v)]
            if terms:
                table[(i, j)] = terms
    unity = coords_of(Matrix.identity(field, s))
    alg = GradedDivisionAlgebra(field, group, degrees, table, unity)
    alg.validate(check_associativity=True)
    alg.verify_division()
    return alg


def tensor_grading(field, group, blocks, sequence, labelled_division):
    """Grading on UT(n1*s,...,nt*s) by e_ij (x) d_k, degree g_i deg(d_k) g_j^{-1}.

    ``labelled_division`` is a degree-labelled basis of M_s whose elements are
    homogeneous and invertible (e.g. the identity alone, the Pauli basis, or a
    quadratic 2x2 realization).  Labels must live in ``group``.
    """
    if not isinstance(blocks, BlockStructure):
        blocks = BlockStructure(blocks)
    sequence = list(sequence)
    if len(sequence) != blocks.n:
        raise LengthMismatch(
            f"sequence length {len(sequence)} != base size {blocks.n}",
            expected=blocks.n, got=len(sequence))
    for g in sequence:
        group.check_element(g)
    mats = [m for m, _ in labelled_division]
    degs = [d for _, d in labelled_division]
    for d in degs:
        group.check_element(d)
    s = mats[0].nrows
    for m in mats:
        if m.nrows != s or m.ncols != s:
            raise InvalidInput("division basis matrices must share a size")
    flat = [[v for row in m.rows for v in row] for m in mats]
    if len(mats) != s * s or len(rref(field, flat)[0]) != s * s:
        raise NotABasis("division basis must span the full matrix algebra",
                        size=s, got=len(mats))
    ambient = BlockStructure([n * s for n in blocks.sizes])
    basis = []
    for (r, c) in blocks.cells:
        unit = Matrix.zeros(field, blocks.n, blocks.n)
        unit.rows[r][c] = field.one
        for dm, dd in zip(mats, degs):
            deg = group.mul(sequence[r], group.mul(dd, group.inv(sequence[c])))
            basis.append((unit.kron(dm), deg))
    return validate_grading(field, group, ambient, basis)
