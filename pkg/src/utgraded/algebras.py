"""Abstract graded algebras given by structure constants, and the graded
division algebra wrapper with its invertibility checks.
"""

from __future__ import annotations

from .errors import EndomorphismNotDivision, InvalidInput
from .matrices import Matrix, solve


class AbstractGradedAlgebra:
    """Finite-dimensional graded algebra by structure constants.

    ``table`` maps a basis index pair (i, j) to a list of (k, scalar) terms of
    the product b_i b_j; pairs with zero product are omitted.  ``unity`` is the
    coefficient vector of the two-sided unity.
    """

    def __init__(self, field, group, degrees, table, unity, labels=None):
        self.field = field
        self.group = group
        self.degrees = list(degrees)
        self.dim = len(self.degrees)
        self.table = {k: [(i, v) for i, v in terms if not field.is_zero(v)]
                      for k, terms in table.items()}
        self.table = {k: terms for k, terms in self.table.items() if terms}
        self.unity = list(unity)
        self.labels = list(labels) if labels else [f"b{i}" for i in range(self.dim)]
        components = {}
        for i, d in enumerate(self.degrees):
            components.setdefault(d, []).append(i)
        self.components = components

    @property
    def support(self):
        return list(self.components.keys())

    def basis_product(self, i, j):
        return self.table.get((i, j), [])

    def mul_coords(self, x, y):
        """Product of two coefficient vectors."""
        f = self.field
        out = [f.zero] * self.dim
        for i, xi in enumerate(x):
            if f.is_zero(xi):
                continue
            for j, yj in enumerate(y):
                if f.is_zero(yj):
                    continue
                c = f.mul(xi, yj)
                for k, v in self.table.get((i, j), ()):
                    out[k] = f.add(out[k], f.mul(c, v))
        return out

    def mul_sparse(self, x, y):
        """Product of sparse {index: value} coefficient dicts."""
        f = self.field
        out = {}
        for i, xi in x.items():
            for j, yj in y.items():
                c = f.mul(xi, yj)
                for k, v in self.table.get((i, j), ()):
                    prev = out.get(k)
                    val = f.mul(c, v)
                    out[k] = val if prev is None else f.add(prev, val)
        return {k: v for k, v in out.items() if not f.is_zero(v)}

    def component_indices(self, degree):
        return self.components.get(degree, [])

    def left_mult_matrix(self, x):
        """Matrix of left multiplication by the coefficient vector x."""
        f = self.field
        cols = []
        for j in range(self.dim):
            col = [f.zero] * self.dim
            for i, xi in enumerate(x):
                if f.is_zero(xi):
                    continue
                for k, v in self.table.get((i, j), ()):
                    col[k] = f.add(col[k], f.mul(xi, v))
            cols.append(col)
        return Matrix(f, [list(r) for r in zip(*cols)])

    def inverse_of(self, x):
        """Two-sided inverse of the coefficient vector x, or None."""
        lm = self.left_mult_matrix(x)
        y = solve(lm, self.unity)
        if y is None:
            return None
        # left inverse too: y * x = 1
        if self.mul_coords(y, x) != list(self.unity):
            return None
        return y

    def validate(self, check_associativity=True):
        f = self.field
        for (i, j), terms in self.table.items():
            if not (0 <= i < self.dim and 0 <= j < self.dim):
                raise InvalidInput("structure constant index out of range")
            target = self.group.mul(self.degrees[i], self.degrees[j])
            for k, v in terms:
                if f.is_zero(v):
                    continue
                if self.degrees[k] != target:
                    raise InvalidInput(
                        "structure constants violate the grading",
                        pair=[i, j], term=k)
        one = self.unity
        for j in range(self.dim):
            ej = self._unit_vector(j)
            if self.mul_coords(one, ej) != ej or self.mul_coords(ej, one) != ej:
                raise InvalidInput("unity is not two-sided", index=j)
        if check_associativity:
            vecs = [self._unit_vector(i) for i in range(self.dim)]
            for i in range(self.dim):
                for j in range(self.dim):
                    ij = self.mul_coords(vecs[i], vecs[j])
                    for k in range(self.dim):
                        lhs = self.mul_coords(ij, vecs[k])
                        rhs = self.mul_coords(vecs[i], self.mul_coords(vecs[j], vecs[k]))
                        if lhs != rhs:
                            raise InvalidInput("associativity fails",
                                               triple=[i, j, k])
        return self

    def _unit_vector(self, i):
        v = [self.field.zero] * self.dim
        v[i] = self.field.one
        return v

    def to_json(self):
        f = self.field
        triples = []
        for (i, j), terms in sorted(self.table.items()):
            for k, v in terms:
                triples.append([i, j, k, f.serialize(v)])
        return {
            "field": f.to_json(),
            "group": self.group.to_json(),
            "basis_degrees": [self.group.element_to_json(d) for d in self.degrees],
            "structure_constants": triples,
            "unity": [f.serialize(v) for v in self.unity],
            "labels": self.labels,
        }

    @classmethod
    def from_json(cls, obj, field=None, group=None):
        from .fields import field_from_json
        from .groups import group_from_json
        field = field or field_from_json(obj["field"])
        group = group or group_from_json(obj["group"])
        degrees = [group.element_from_json(d) for d in obj["basis_degrees"]]
        table = {}
        for i, j, k, v in obj["structure_constants"]:
            table.setdefault((int(i), int(j)), []).append((int(k), field.parse(v)))
        unity = [field.parse(v) for v in obj["unity"]]
        return cls(field, group, degrees, table, unity, labels=obj.get("labels"))


class GradedDivisionAlgebra(AbstractGradedAlgebra):
    """Graded algebra in which every nonzero homogeneous element is invertible."""

    def verify_division(self):
        """Check invertibility of nonzero homogeneous elements.

        Complete for components of dimension 1 (scalar multiples of the basis
        vector) and dimension 2 (pencil determinant root search; exhaustive
        enumeration over small prime fields).  Larger components are checked
        on basis vectors and pairwise sums.
        """
        dims = {d: len(ix) for d, ix in self.components.items()}
        sizes = set(dims.values())
        if len(sizes) > 1:
            raise EndomorphismNotDivision(
                "homogeneous components have unequal dimensions",
                dims=[[str(d), n] for d, n in dims.items()])
        for deg, idxs in self.components.items():
            vecs = [self._unit_vector(i) for i in idxs]
            for v in vecs:
                if self.inverse_of(v) is None:
                    raise EndomorphismNotDivision(
                        "non-invertible homogeneous basis element",
                        degree=self.group.element_to_json(deg))
            if len(vecs) >= 2:
                self._check_component_combinations(deg, vecs)
        return True

    def _check_component_combinations(self, deg, vecs):
        f = self.field
        p = f.characteristic
        if len(vecs) == 2 and (p == 0 or p > self.dim + 1):
            self._check_pencil(deg, vecs[0], vecs[1])
            return
        if p and p ** len(vecs) <= 1 << 16:
            self._enumerate_component(deg, vecs)
            return
        for a in range(len(vecs)):
            for b in range(a + 1, len(vecs)):
                s = [f.add(x, y) for x, y in zip(vecs[a], vecs[b])]
                if self.inverse_of(s) is None:
                    raise EndomorphismNotDivision(
                        "non-invertible homogeneous element",
                        degree=self.group.element_to_json(deg))

    def _enumerate_component(self, deg, vecs):
        f = self.field
        p = f.characteristic
        coeffs = [0] * len(vecs)
        def walk(i):
            if i == len(vecs):
                if all(c == 0 for c in coeffs):
                    return
                v = [f.zero] * self.dim
                for c, vec in zip(coeffs, vecs):
                    if c:
                        for k in range(self.dim):
                            v[k] = f.add(v[k], f.mul(c, vec[k]))
                if self.inverse_of(v) is None:
                    raise EndomorphismNotDivision(
                        "non-invertible homogeneous element",
                        degree=self.group.element_to_json(deg),
                        coefficients=list(coeffs))
                return
            for c in range(p):
                coeffs[i] = c
                walk(i + 1)
        walk(0)

    def _check_pencil(self, deg, x, y):
        """No nonzero combination a*x + b*y may be singular.

        Over the rationals: b = 0 gives x (checked); otherwise x + t*y must be
        invertible for every rational t, i.e. det of left multiplication by
        x + t*y, a polynomial in t, has no rational root.
        """
        f = self.field
        lx = self.left_mult_matrix(x)
        ly = self.left_mult_matrix(y)
        poly = _det_pencil(f, lx, ly)
        for root in _rational_roots(f, poly):
            v = [f.add(a, f.mul(root, b)) for a, b in zip(x, y)]
            if any(not f.is_zero(c) for c in v) and self.inverse_of(v) is None:
                raise EndomorphismNotDivision(
                    "non-invertible homogeneous element",
                    degree=self.group.element_to_json(deg),
                    parameter=f.serialize(root))


def _det_pencil(field, a, b):
    """Coefficients (low to high) of det(a + t*b) by exact interpolation."""
    n = a.nrows
    pts = []
    vals = []
    t = 0
    while len(pts) < n + 1:
        tv = field.from_int(t)
        m = Matrix(field, [[field.add(x, field.mul(tv, y))
                            for x, y in zip(ra, rb)]
                           for ra, rb in zip(a.rows, b.rows)])
        pts.append(tv)
        vals.append(_det(field, m))
        t += 1
        if field.characteristic and t >= field.characteristic:
            break
    return _interpolate(field, pts, vals)


def _det(field, m):
    n = m.nrows
    work = [list(r) for r in m.rows]
    det = field.one
    for col in range(n):
        sel = None
        for r in range(col, n):
            if not field.is_zero(work[r][col]):
                sel = r
                break
        if sel is None:
            return field.zero
        if sel != col:
            work[col], work[sel] = work[sel], work[col]
            det = field.neg(det)
        piv = work[col][col]
        det = field.mul(det, piv)
        pinv = field.inv(piv)
        for r in range(col + 1, n):
            factor = work[r][col]
            if field.is_zero(factor):
                continue
            factor = field.mul(factor, pinv)
            for j in range(col, n):
                work[r][j] = field.sub(work[r][j], field.mul(factor, work[col][j]))
    return det


def _interpolate(field, pts, vals):
    """Lagrange interpolation; returns coefficients low to high."""
    k = len(pts)
    coeffs = [field.zero] * k
    for i in range(k):
        # basis polynomial through pts[i]
        num = [field.one]
        denom = field.one
        for j in range(k):
            if j == i:
                continue
            num = _poly_mul(field, num, [field.neg(pts[j]), field.one])
            denom = field.mul(denom, field.sub(pts[i], pts[j]))
        scale = field.div(vals[i], denom)
        for d, c in enumerate(num):
            coeffs[d] = field.add(coeffs[d], field.mul(scale, c))
    while len(coeffs) > 1 and field.is_zero(coeffs[-1]):
        coeffs.pop()
    return coeffs


def _poly_mul(field, a, b):
    out = [field.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if field.is_zero(x):
            continue
        for j, y in enumerate(b):
            out[i + j] = field.add(out[i + j], field.mul(x, y))
    return out


def _rational_roots(field, poly):
    """All roots of poly in the field (rational root theorem / enumeration)."""
    if all(field.is_zero(c) for c in poly):
        return []
    if field.characteristic:
        return [t for t in range(field.characteristic)
                if field.is_zero(_poly_eval(field, poly, field.from_int(t)))]
    # strip trailing/leading structure: roots p/q with p | a0', q | an'
    from gmpy2 import mpz
    # clear denominators
    denom = 1
    for c in poly:
        denom = denom * c.denominator // _gcd(denom, c.denominator)
    ints = [mpz(c.numerator * (denom // c.denominator)) for c in poly]
    while ints and ints[-1] == 0:
        ints.pop()
    shift = 0
    while ints and ints[0] == 0:
        ints.pop(0)
        shift += 1
    roots = []
    if shift:
        roots.append(field.from_int(0))
    if len(ints) <= 1:
        return roots
    a0, an = abs(ints[0]), abs(ints[-1])
    for p in _divisors(a0):
        for q in _divisors(an):
            for sign in (1, -1):
                cand = field.parse(f"{sign * p}/{q}")
                if field.is_zero(_poly_eval(field, poly, cand)) and cand not in roots:
                    roots.append(cand)
    return roots


def _poly_eval(field, poly, x):
    acc = field.zero
    for c in reversed(poly):
        acc = field.add(field.mul(acc, x), c)
    return acc


def _gcd(a, b):
    from math import gcd
    return gcd(int(a), int(b))


def _divisors(n):
    n = int(abs(n))
    if n == 0:
        return [1]
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)
