"""Group gradings on upper block triangular matrix algebras UT(n1,...,nt).

A grading is stored as a degree-labelled homogeneous basis of exact matrices.
Validation checks the UT shape, that the matrices form a basis, and the
closure law: the product of degree-g and degree-h basis elements must lie in
the span of the degree-gh basis elements.
"""

from __future__ import annotations

from .errors import (ClosureViolation, InvalidInput, NotABasis, NotInUTShape,
                     SingularS, SNotBlockTriangular)
from .matrices import Matrix, Subspace, inverse, kernel_basis, Singular


class BlockStructure:
    """Block sizes (n1,...,nt) plus the derived UT cell layout.

    Cells are the matrix positions (r, c) allowed in the UT shape, ordered
    row-major; every coordinate vector in this module is indexed by them.
    """

    def __init__(self, sizes):
        sizes = list(sizes)
        if not sizes or any((not isinstance(s, int)) or s < 1 for s in sizes):
            raise InvalidInput(f"block sizes must be positive ints, got {sizes!r}")
        self.sizes = sizes
        self.t = len(sizes)
        self.n = sum(sizes)
        self.offsets = []
        acc = 0
        for s in sizes:
            self.offsets.append(acc)
            acc += s
        block_of = []
        for b, s in enumerate(sizes):
            block_of.extend([b] * s)
        self._block_of = block_of
        self.cells = [(r, c) for r in range(self.n) for c in range(self.n)
                      if block_of[r] <= block_of[c]]
        self.cell_index = {rc: i for i, rc in enumerate(self.cells)}
        self.strict_upper = [i for i, (r, c) in enumerate(self.cells)
                             if block_of[r] < block_of[c]]
        self.diagonal = [self.cell_index[(i, i)] for i in range(self.n)]
        self.dim = len(self.cells)

    def block_of(self, row):
        return self._block_of[row]

    def is_cell(self, r, c):
        return (r, c) in self.cell_index

    def block_cells(self, bi, bj):
        """Cell indices of the (bi, bj) block."""
        if bi > bj:
            return []
        r0, c0 = self.offsets[bi], self.offsets[bj]
        return [self.cell_index[(r0 + a, c0 + b)]
                for a in range(self.sizes[bi]) for b in range(self.sizes[bj])]

    def __eq__(self, other):
        return isinstance(other, BlockStructure) and self.sizes == other.sizes

    def __repr__(self):
        return f"BlockStructure({self.sizes})"


def matrix_to_coords(blocks, matrix, field):
    """Coordinates of a matrix over the UT cells; rejects non-UT entries."""
    if matrix.nrows != blocks.n or matrix.ncols != blocks.n:
        raise NotInUTShape(f"expected {blocks.n}x{blocks.n} matrix",
                           rows=matrix.nrows, cols=matrix.ncols)
    coords = [field.zero] * blocks.dim
    for r in range(blocks.n):
        row = matrix.rows[r]
        for c in range(blocks.n):
            v = row[c]
            if field.is_zero(v):
                continue
            idx = blocks.cell_index.get((r, c))
            if idx is None:
                raise NotInUTShape("nonzero entry below the block diagonal",
                                   position=[r, c])
            coords[idx] = v
    return coords


def coords_to_matrix(blocks, coords, field):
    m = Matrix.zeros(field, blocks.n, blocks.n)
    for idx, v in enumerate(coords):
        if field.is_zero(v):
            continue
        r, c = blocks.cells[idx]
        m.rows[r][c] = v
    return m


def sparse_of_coords(blocks, coords, field):
    return {blocks.cells[i]: v for i, v in enumerate(coords)
            if not field.is_zero(v)}


def sparse_by_row(sparse):
    by_row = {}
    for (r, c), v in sparse.items():
        by_row.setdefault(r, []).append((c, v))
    return by_row


def sparse_product(field, x_sparse, y_by_row):
    """Product of UT matrices given sparsely; y is pre-grouped by row.

    Accumulates with raw scalar arithmetic and normalizes once at the end
    (exact for rationals; deferred reduction mod p for prime fields).
    """
    out = {}
    get = out.get
    for (a, b), va in x_sparse.items():
        hits = y_by_row.get(b)
        if not hits:
            continue
        for c, vb in hits:
            key = (a, c)
            out[key] = get(key, 0) + va * vb
    norm = field.normalize
    zero = field.zero
    result = {}
    for k, v in out.items():
        nv = norm(v)
        if nv != zero:
            result[k] = nv
    return result


class UTGrading:
    """A validated G-grading on UT(n1,...,nt).

    Construct via :func:`validate_grading`; instances are immutable after
    validation and safe to share.
    """

    def __init__(self, field, group, blocks, basis, _token=None):
        if _token is not _VALIDATED:
            raise InvalidInput("use validate_grading() to build a UTGrading")
        self.field = field
        self.group = group
        self.blocks = blocks
        self.basis = basis            # list of (Matrix, degree)
        self.degrees = [d for _, d in basis]
        # filled by validate_grading:
        self.basis_coords = None      # list of cell-coordinate vectors
        self.basis_sparse = None      # list of {(r, c): value}
        self.basis_by_row = None      # list of {row: [(col, value), ...]}
        self.binv_cols = None         # cell index -> column of B^-1
        self.binv_cols_sparse = None  # same, nonzero (index, value) pairs
        self.components = None        # degree -> [basis indices] (ordered)
        self.component_spaces = None  # degree -> Subspace

    @property
    def dim(self):
        return self.blocks.dim

    @property
    def n(self):
        return self.blocks.n

    def identity_matrix(self):
        return Matrix.identity(self.field, self.n)

    def component(self, degree):
        """Subspace spanned by basis elements of the given degree."""
        sp = self.component_spaces.get(degree)
        if sp is None:
            return Subspace(self.field, self.dim, [])
        return sp

    def dims_by_degree(self):
        return {d: len(ix) for d, ix in self.components.items()}

    def coords_of(self, matrix):
        return matrix_to_coords(self.blocks, matrix, self.field)

    def matrix_of(self, coords):
        return coords_to_matrix(self.blocks, coords, self.field)

    def project_sparse(self, sparse):
        """Coefficients over the homogeneous basis of a sparse UT matrix."""
        f = self.field
        coeffs = [0] * len(self.basis)
        for pos, v in sparse.items():
            for k, ck in self.binv_cols_sparse[self.blocks.cell_index[pos]]:
                coeffs[k] += v * ck
        norm = f.normalize
        return [norm(c) for c in coeffs]

    def project_coords(self, coords):
        f = self.field
        sparse = {self.blocks.cells[i]: v for i, v in enumerate(coords)
                  if not f.is_zero(v)}
        return self.project_sparse(sparse)

    def project_homogeneous(self, matrix):
        """Split a UT matrix into its homogeneous parts, degree -> Matrix."""
        coeffs = self.project_coords(self.coords_of(matrix))
        f = self.field
        parts = {}
        for k, c in enumerate(coeffs):
            if f.is_zero(c):
                continue
            deg = self.degrees[k]
            part = parts.get(deg)
            add = self.basis_coords[k]
            if part is None:
                parts[deg] = [f.mul(c, a) for a in add]
            else:
                parts[deg] = [f.add(p, f.mul(c, a)) for p, a in zip(part, add)]
        return {deg: self.matrix_of(vec) for deg, vec in parts.items()}

    def basis_product_coeffs(self, i, j):
        """Structure constants: coefficients of basis[i] * basis[j]."""
        sp = sparse_product(self.field, self.basis_sparse[i], self.basis_by_row[j])
        return self.project_sparse(sp)

    def combo_sparse(self, coeffs):
        """Sparse cell form of a linear combination of basis elements."""
        f = self.field
        out = {}
        get = out.get
        for k, c in enumerate(coeffs):
            if not c:
                continue
            for pos, v in self.basis_sparse[k].items():
                out[pos] = get(pos, 0) + c * v
        norm = f.normalize
        zero = f.zero
        return {k: nv for k, v in out.items() if (nv := norm(v)) != zero}

    def matrix_of_basis_coeffs(self, coeffs):
        f = self.field
        m = Matrix.zeros(f, self.n, self.n)
        for pos, v in self.combo_sparse(coeffs).items():
            m.rows[pos[0]][pos[1]] = v
        return m

    def to_json(self):
        f = self.field
        return {
            "field": f.to_json(),
            "group": self.group.to_json(),
            "blocks": list(self.blocks.sizes),
            "basis": [{"degree": self.group.element_to_json(d),
                       "matrix": [[f.serialize(v) for v in row] for row in m.rows]}
                      for m, d in self.basis],
        }


_VALIDATED = object()


def validate_grading(field, group, blocks, basis):
    """Validate a candidate grading and return the UTGrading.

    ``blocks`` is a BlockStructure or a list of sizes; ``basis`` is a list of
    (Matrix, group element) pairs whose order is significant.
    """
    if not isinstance(blocks, BlockStructure):
        blocks = BlockStructure(blocks)
    basis = list(basis)
    for m, d in basis:
        group.check_element(d)
        if m.field != field:
            raise InvalidInput("basis matrix over the wrong field")
    g = UTGrading(field, group, blocks, basis, _token=_VALIDATED)

    coords = [matrix_to_coords(blocks, m, field) for m, _ in basis]
    d = blocks.dim
    if len(basis) != d:
        raise NotABasis(f"expected {d} basis elements, got {len(basis)}",
                        expected=d, got=len(basis))
    bmat = Matrix(field, [[coords[k][cell] for k in range(d)] for cell in range(d)])
    try:
        binv = inverse(bmat)
    except Singular as exc:
        raise NotABasis("basis matrices are linearly dependent",
                        rank=exc.payload.get("rank")) from exc

    g.basis_coords = coords
    g.basis_sparse = [sparse_of_coords(blocks, v, field) for v in coords]
    g.basis_by_row = [sparse_by_row(sp) for sp in g.basis_sparse]
    g.binv_cols = [[binv.rows[k][cell] for k in range(d)] for cell in range(d)]
    g.binv_cols_sparse = [
        [(k, v) for k, v in enumerate(col) if not field.is_zero(v)]
        for col in g.binv_cols]

    components = {}
    for k, (_, deg) in enumerate(basis):
        components.setdefault(deg, []).append(k)
    g.components = components
    g.component_spaces = {
        deg: Subspace(field, d, [coords[k] for k in idxs])
        for deg, idxs in components.items()
    }

    # closure: each product must land in the span of its target component
    is_zero = field.is_zero
    for i in range(d):
        deg_i = g.degrees[i]
        xi = g.basis_sparse[i]
        for j in range(d):
            prod = sparse_product(field, xi, g.basis_by_row[j])
            if not prod:
                continue
            target = group.mul(deg_i, g.degrees[j])
            coeffs = g.project_sparse(prod)
            allowed = components.get(target)
            if allowed is None:
                raise ClosureViolation(
                    "product lands outside every component",
                    g=group.element_to_json(deg_i),
                    h=group.element_to_json(g.degrees[j]), witness=[i, j])
            allowed_set = set(allowed)
            for k, c in enumerate(coeffs):
                if not is_zero(c) and k not in allowed_set:
                    raise ClosureViolation(
                        "product leaves the degree g*h component",
                        g=group.element_to_json(deg_i),
                        h=group.element_to_json(g.degrees[j]), witness=[i, j])
    return g


def homogeneous_component(grading, degree):
    """Subspace spanned by the basis elements of the given degree."""
    return grading.component(degree)


def project_homogeneous(grading, matrix):
    """Split a UT matrix into homogeneous parts, degree -> Matrix."""
    return grading.project_homogeneous(matrix)


def jacobson_radical(field, blocks):
    """Jacobson radical of UT(n1,...,nt): the strictly-upper-block subspace."""
    if not isinstance(blocks, BlockStructure):
        blocks = BlockStructure(blocks)
    vectors = []
    for idx in blocks.strict_upper:
        v = [field.zero] * blocks.dim
        v[idx] = field.one
        vectors.append(v)
    return Subspace(field, blocks.dim, vectors)


def radical_subspace(grading):
    return jacobson_radical(grading.field, grading.blocks)


def is_subspace_graded(grading, subspace):
    """True iff the component intersections exhaust the subspace.

    Returns (flag, dims) where dims lists (degree, dim of intersection) in
    component order; the dims act as a certificate either way.
    """
    total = 0
    dims = []
    for deg, space in grading.component_spaces.items():
        inter = subspace.intersection(space)
        if inter.dim:
            dims.append((deg, inter.dim))
            total += inter.dim
    return total == subspace.dim, dims


def right_annihilator(grading, subspace):
    """{x in UT : w x = 0 for all w in the subspace}."""
    f = grading.field
    blocks = grading.blocks
    rows = {}
    for widx, w in enumerate(subspace.basis):
        wsp = sparse_of_coords(blocks, w, f)
        for (a, r), v in wsp.items():
            for c in range(blocks.n):
                in_idx = blocks.cell_index.get((r, c))
                if in_idx is None:
                    continue
                key = (widx, a, c)
                row = rows.get(key)
                if row is None:
                    row = [f.zero] * blocks.dim
                    rows[key] = row
                row[in_idx] = f.add(row[in_idx], v)
    if not rows:
        vecs = []
        for i in range(blocks.dim):
            v = [f.zero] * blocks.dim
            v[i] = f.one
            vecs.append(v)
        return Subspace(f, blocks.dim, vecs)
    mat = Matrix(f, list(rows.values()))
    return Subspace(f, blocks.dim, kernel_basis(mat))


def apply_inner_automorphism(grading, s):
    """Conjugate the whole grading by an invertible UT-shaped matrix."""
    f = grading.field
    blocks = grading.blocks
    # shape check doubles as a UT membership test
    try:
        matrix_to_coords(blocks, s, f)
    except NotInUTShape as exc:
        raise SNotBlockTriangular("conjugator must be block upper triangular",
                                  **exc.payload) from exc
    try:
        sinv = inverse(s)
    except Singular as exc:
        raise SingularS("conjugator is singular", **exc.payload) from exc
    new_basis = [(s.mul(m).mul(sinv), deg) for m, deg in grading.basis]
    return validate_grading(f, grading.group, blocks, new_basis)


def subspace_from_matrices(grading, mats):
    return Subspace(grading.field, grading.dim,
                    [grading.coords_of(m) for m in mats])
