"""Exact dense linear algebra over a Field: Gaussian elimination, kernels,
inverses, Kronecker products, and echelon-basis subspaces.

Pivoting is fixed (leftmost column, lowest row index) so every echelon form,
kernel basis and solution vector is byte-deterministic.
"""

from __future__ import annotations

from .errors import DimensionMismatch, FieldMismatch, Singular


class Matrix:
    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field, rows):
        self.field = field
        self.rows = [list(r) for r in rows]
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        for r in self.rows:
            if len(r) != self.ncols:
                raise DimensionMismatch("ragged rows")

    @classmethod
    def zeros(cls, field, nrows, ncols):
        z = field.zero
        return cls(field, [[z] * ncols for _ in range(nrows)])

    @classmethod
    def identity(cls, field, n):
        m = cls.zeros(field, n, n)
        for i in range(n):
            m.rows[i][i] = field.one
        return m

    @classmethod
    def from_int_rows(cls, field, rows):
        return cls(field, [[field.from_int(v) for v in r] for r in rows])

    def copy(self):
        return Matrix(self.field, self.rows)

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.field == other.field
                and self.rows == other.rows)

    def __hash__(self):
        return hash((self.nrows, self.ncols, tuple(map(tuple, self.rows))))

    def __repr__(self):
        return f"Matrix({self.nrows}x{self.ncols}, {self.rows!r})"

    def is_zero(self):
        z = self.field.is_zero
        return all(z(v) for row in self.rows for v in row)

    def add(self, other):
        self._check_shape(other)
        f = self.field
        return Matrix(f, [[f.add(a, b) for a, b in zip(r1, r2)]
                          for r1, r2 in zip(self.rows, other.rows)])

    def sub(self, other):
        self._check_shape(other)
        f = self.field
        return Matrix(f, [[f.sub(a, b) for a, b in zip(r1, r2)]
                          for r1, r2 in zip(self.rows, other.rows)])

    def neg(self):
        f = self.field
        return Matrix(f, [[f.neg(a) for a in r] for r in self.rows])

    def scale(self, c):
        f = self.field
        return Matrix(f, [[f.mul(c, a) for a in r] for r in self.rows])

    def mul(self, other):
        if self.field != other.field:
            raise FieldMismatch("matrix product across fields")
        if self.ncols != other.nrows:
            raise DimensionMismatch(
                f"cannot multiply {self.nrows}x{self.ncols} by {other.nrows}x{other.ncols}")
        f = self.field
        bt = list(zip(*other.rows))
        return Matrix(f, [[_dot(f, r, c) for c in bt] for r in self.rows])

    def mul_vec(self, vec):
        if self.ncols != len(vec):
            raise DimensionMismatch("matrix/vector size mismatch")
        f = self.field
        return [_dot(f, r, vec) for r in self.rows]

    def transpose(self):
        return Matrix(self.field, [list(c) for c in zip(*self.rows)]) \
            if self.rows else Matrix(self.field, [])

    def trace(self):
        f = self.field
        s = f.zero
        for i in range(min(self.nrows, self.ncols)):
            s = f.add(s, self.rows[i][i])
        return s

    def kron(self, other):
        if self.field != other.field:
            raise FieldMismatch("kronecker product across fields")
        f = self.field
        out = Matrix.zeros(f, self.nrows * other.nrows, self.ncols * other.ncols)
        for i, row in enumerate(self.rows):
            for j, a in enumerate(row):
                if f.is_zero(a):
                    continue
                for k, brow in enumerate(other.rows):
                    target = out.rows[i * other.nrows + k]
                    off = j * other.ncols
                    for l, b in enumerate(brow):
                        target[off + l] = f.mul(a, b)
        return out

    def _check_shape(self, other):
        if self.nrows != other.nrows or self.ncols != other.ncols:
            raise DimensionMismatch("shape mismatch")


def _dot(field, r, c):
    s = 0
    for a, b in zip(r, c):
        if a and b:
            s += a * b
    return field.normalize(s)


def kronecker(a, b):
    return a.kron(b)


def rref(field, rows):
    """Reduced row echelon form of a list of vectors.

    Returns (echelon_rows, pivot_columns); zero rows are dropped.  Pivot scan
    is column-major with the lowest available row index, pivots normalized to 1.
    """
    work = [list(r) for r in rows]
    nrows = len(work)
    ncols = len(work[0]) if work else 0
    inv, norm, one = field.inv, field.normalize, field.one
    pivots = []
    prow = 0
    for col in range(ncols):
        sel = None
        for r in range(prow, nrows):
            if work[r][col]:
                sel = r
                break
        if sel is None:
            continue
        work[prow], work[sel] = work[sel], work[prow]
        piv = work[prow]
        if piv[col] != one:
            c = inv(piv[col])
            for j in range(col, ncols):
                if piv[j]:
                    piv[j] = norm(c * piv[j])
        for r in range(nrows):
            if r == prow:
                continue
            rowr = work[r]
            factor = rowr[col]
            if not factor:
                continue
            for j in range(col, ncols):
                pj = piv[j]
                if pj:
                    rowr[j] = norm(rowr[j] - factor * pj)
        pivots.append(col)
        prow += 1
        if prow == nrows:
            break
    return work[:prow], pivots


def rank(matrix):
    rows, _ = rref(matrix.field, matrix.rows)
    return len(rows)


def solve(matrix, rhs):
    """One exact solution of A x = b, or None if inconsistent.

    Free variables are set to zero, so the returned solution is deterministic.
    """
    if matrix.nrows != len(rhs):
        raise DimensionMismatch("rhs length must match row count")
    f = matrix.field
    aug = [row + [b] for row, b in zip(matrix.rows, rhs)]
    ech, pivots = rref(f, aug)
    n = matrix.ncols
    for row, col in zip(ech, pivots):
        if col == n:
            return None
    x = [f.zero] * n
    for row, col in zip(ech, pivots):
        x[col] = row[n]
    return x


def kernel_basis(matrix):
    """Basis of the right kernel, each vector normalized to leading entry 1."""
    f = matrix.field
    ech, pivots = rref(f, matrix.rows)
    n = matrix.ncols
    pivot_set = set(pivots)
    free = [j for j in range(n) if j not in pivot_set]
    basis = []
    for fc in free:
        v = [f.zero] * n
        v[fc] = f.one
        for row, pc in zip(ech, pivots):
            if not f.is_zero(row[fc]):
                v[pc] = f.neg(row[fc])
        lead = next(j for j in range(n) if not f.is_zero(v[j]))
        if v[lead] != f.one:
            c = f.inv(v[lead])
            v = [f.mul(c, a) for a in v]
        basis.append(v)
    return basis


def inverse(matrix):
    if matrix.nrows != matrix.ncols:
        raise DimensionMismatch("inverse needs a square matrix")
    f = matrix.field
    n = matrix.nrows
    ident = Matrix.identity(f, n)
    aug = [row + irow for row, irow in zip(matrix.rows, ident.rows)]
    ech, pivots = rref(f, aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise Singular("matrix is singular", rank=len([p for p in pivots if p < n]))
    return Matrix(f, [row[n:] for row in ech[:n]])


def invert_or_rank(matrix):
    """Exact inverse when full rank, otherwise the rank as an int."""
    try:
        return inverse(matrix)
    except Singular as exc:
        return exc.payload["rank"]


class Subspace:
    """Subspace of F^n held as a reduced-echelon basis (rows).

    Echelon bases are canonical, so subspace equality is plain row equality.
    """

    __slots__ = ("field", "ambient", "basis", "pivots")

    def __init__(self, field, ambient, vectors):
        self.field = field
        self.ambient = ambient
        for v in vectors:
            if len(v) != ambient:
                raise DimensionMismatch("vector length must match ambient dim")
        self.basis, self.pivots = rref(field, vectors) if vectors else ([], [])

    @property
    def dim(self):
        return len(self.basis)

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.ambient == other.ambient
                and self.basis == other.basis)

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient})"

    def reduce(self, vec):
        """Remainder of vec after reduction against the echelon basis."""
        norm = self.field.normalize
        v = [norm(a) for a in vec]
        for row, p in zip(self.basis, self.pivots):
            c = v[p]
            if not c:
                continue
            for j in range(p, self.ambient):
                rj = row[j]
                if rj:
                    v[j] = norm(v[j] - c * rj)
        return v

    def contains(self, vec):
        f = self.field
        return all(f.is_zero(a) for a in self.reduce(vec))

    def coordinates(self, vec):
        """Coefficients of vec over the echelon basis, or None."""
        norm = self.field.normalize
        v = [norm(a) for a in vec]
        coeffs = []
        for row, p in zip(self.basis, self.pivots):
            c = v[p]
            coeffs.append(c)
            if not c:
                continue
            for j in range(p, self.ambient):
                rj = row[j]
                if rj:
                    v[j] = norm(v[j] - c * rj)
        if any(v):
            return None
        return coeffs

    def intersection(self, other):
        if self.ambient != other.ambient:
            raise DimensionMismatch("ambient dims differ")
        if not self.basis or not other.basis:
            return Subspace(self.field, self.ambient, [])
        stacked = Matrix(self.field, [list(col) for col in
                                      zip(*(self.basis + other.basis))])
        vectors = []
        for k in kernel_basis(stacked):
            coeffs = k[:len(self.basis)]
            vec = _combine(self.field, self.basis, coeffs, self.ambient)
            vectors.append(vec)
        return Subspace(self.field, self.ambient, vectors)

    def sum(self, other):
        if self.ambient != other.ambient:
            raise DimensionMismatch("ambient dims differ")
        return Subspace(self.field, self.ambient, self.basis + other.basis)


def _combine(field, rows, coeffs, ambient):
    out = [field.zero] * ambient
    for c, row in zip(coeffs, rows):
        if field.is_zero(c):
            continue
        for j in range(ambient):
            if not field.is_zero(row[j]):
                out[j] = field.add(out[j], field.mul(c, row[j]))
    return out
