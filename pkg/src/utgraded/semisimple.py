"""Primitive idempotents in semisimple matrix subalgebras.

Used to locate minimal graded left ideals: a primitive idempotent of the
identity component of a graded full matrix algebra generates one.  Splitting
works by exact minimal-polynomial factorization (coprime factors give
orthogonal idempotents by CRT; repeated factors give nilpotents whose left
ideals carry idempotent right units).
"""

from __future__ import annotations

from .errors import SolveFailed
from .matrices import Matrix, rref, solve


def _flatten(m):
    return [v for row in m.rows for v in row]


def _corner_basis(field, algebra_mats, idem):
    """Echelon basis of idem * A * idem as matrices."""
    vecs = []
    for b in algebra_mats:
        vecs.append(_flatten(idem.mul(b).mul(idem)))
    ech, _ = rref(field, vecs)
    n = algebra_mats[0].nrows
    return [Matrix(field, [row[i * n:(i + 1) * n] for i in range(n)])
            for row in ech]


def minimal_polynomial(field, x, unity):
    """Monic minimal polynomial of x in a unital corner; coefficients low to high."""
    powers = [_flatten(unity)]
    cur = unity
    while True:
        cur = cur.mul(x)
        vec = _flatten(cur)
        cols = Matrix(field, [list(col) for col in zip(*powers)])
        sol = solve(cols, vec)
        if sol is not None:
            return [field.neg(c) for c in sol] + [field.one]
        powers.append(vec)
        if len(powers) > len(vec) + 1:
            raise SolveFailed("runaway minimal polynomial computation")


# polynomial helpers; coefficient lists are low to high over the field

def p_trim(field, a):
    while len(a) > 1 and field.is_zero(a[-1]):
        a = a[:-1]
    return a


def p_mul(field, a, b):
    out = [field.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if field.is_zero(x):
            continue
        for j, y in enumerate(b):
            out[i + j] = field.add(out[i + j], field.mul(x, y))
    return p_trim(field, out)


def p_divmod(field, a, b):
    a = list(a)
    b = p_trim(field, list(b))
    if len(b) == 1 and field.is_zero(b[0]):
        raise ZeroDivisionError("polynomial division by zero")
    q = [field.zero] * max(1, len(a) - len(b) + 1)
    inv_lead = field.inv(b[-1])
    for i in range(len(a) - len(b), -1, -1):
        c = field.mul(a[i + len(b) - 1], inv_lead)
        if field.is_zero(c):
            continue
        q[i] = c
        for j, y in enumerate(b):
            a[i + j] = field.sub(a[i + j], field.mul(c, y))
    return p_trim(field, q), p_trim(field, a)


def p_xgcd(field, a, b):
    """Extended gcd; returns (g, s, t) with s*a + t*b = g, g monic."""
    r0, r1 = p_trim(field, list(a)), p_trim(field, list(b))
    s0, s1 = [field.one], [field.zero]
    t0, t1 = [field.zero], [field.one]
    while not (len(r1) == 1 and field.is_zero(r1[0])):
        q, r = p_divmod(field, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, p_sub(field, s0, p_mul(field, q, s1))
        t0, t1 = t1, p_sub(field, t0, p_mul(field, q, t1))
    lead = r0[-1]
    if lead != field.one:
        c = field.inv(lead)
        r0 = [field.mul(c, v) for v in r0]
        s0 = [field.mul(c, v) for v in s0]
        t0 = [field.mul(c, v) for v in t0]
    return r0, s0, t0


def p_sub(field, a, b):
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else field.zero
        y = b[i] if i < len(b) else field.zero
        out.append(field.sub(x, y))
    return p_trim(field, out)


def p_pow(field, a, e):
    out = [field.one]
    for _ in range(e):
        out = p_mul(field, out, a)
    return out


def p_eval_matrix(field, coeffs, x, unity):
    """Evaluate a polynomial at a matrix, with the corner unity as 1."""
    acc = Matrix.zeros(field, x.nrows, x.ncols)
    for c in reversed(coeffs):
        acc = acc.mul(x)
        if not field.is_zero(c):
            acc = acc.add(unity.scale(c))
    return acc


def factor_polynomial(field, coeffs):
    """Monic irreducible factorization [(coeffs, multiplicity), ...] via sympy."""
    import sympy

    x = sympy.Symbol("x")
    high_to_low = list(reversed(p_trim(field, coeffs)))
    if field.characteristic == 0:
        poly = sympy.Poly([sympy.Rational(str(c)) for c in high_to_low], x,
                          domain=sympy.QQ)
    else:
        poly = sympy.Poly([int(c) for c in high_to_low], x,
                          modulus=field.characteristic)
    _, factors = poly.factor_list()
    out = []
    for fac, mult in factors:
        raw = [field.parse(_sympy_scalar(c)) for c in reversed(fac.all_coeffs())]
        lead = raw[-1]
        if lead != field.one:
            inv = field.inv(lead)
            raw = [field.mul(inv, v) for v in raw]
        out.append((raw, int(mult)))
    return out


def _sympy_scalar(c):
    import sympy
    if isinstance(c, sympy.Rational):
        return f"{c.p}/{c.q}" if c.q != 1 else str(c.p)
    return int(c)


def _right_unit_idempotent(field, left_ideal_mats):
    """Idempotent right unit of a nonzero left ideal in a semisimple corner."""
    vecs = [_flatten(m) for m in left_ideal_mats]
    ech, _ = rref(field, vecs)
    if not ech:
        return None
    n = left_ideal_mats[0].nrows
    basis = [Matrix(field, [row[i * n:(i + 1) * n] for i in range(n)])
             for row in ech]
    # unknown h = sum c_k basis_k with b * h = b for every basis element b
    cols = []
    for bk in basis:
        col = []
        for b in basis:
            col.extend(_flatten(b.mul(bk)))
        cols.append(col)
    rhs = []
    for b in basis:
        rhs.extend(_flatten(b))
    sol = solve(Matrix(field, [list(r) for r in zip(*cols)]), rhs)
    if sol is None:
        return None
    h = Matrix.zeros(field, n, n)
    for c, bk in zip(sol, basis):
        if not field.is_zero(c):
            h = h.add(bk.scale(c))
    return h


def _split_once(field, algebra_mats, c):
    """Try to split the idempotent c; returns (h, c - h) or None.

    Scans the corner c*A*c: echelon basis elements, pairwise sums, pairwise
    products.  A reducible minimal polynomial yields a CRT idempotent; a
    repeated-factor minimal polynomial yields a nilpotent whose left ideal
    carries an idempotent right unit.
    """
    corner = _corner_basis(field, algebra_mats, c)
    if len(corner) <= 1:
        return None
    candidates = list(corner)
    for i in range(len(corner)):
        for j in range(i + 1, len(corner)):
            candidates.append(corner[i].add(corner[j]))
    for i in range(len(corner)):
        for j in range(len(corner)):
            if i != j:
                candidates.append(corner[i].mul(corner[j]))
    for z in candidates:
        if z.is_zero():
            continue
        mu = minimal_polynomial(field, z, c)
        if len(mu) <= 2:
            continue
        factors = factor_polynomial(field, mu)
        if len(factors) >= 2:
            f1, e1 = factors[0]
            part = p_pow(field, f1, e1)
            rest = [field.one]
            for fac, mult in factors[1:]:
                rest = p_mul(field, rest, p_pow(field, fac, mult))
            _, s, t = p_xgcd(field, part, rest)
            # h = t(z) * rest(z) acts as 1 on the `part` kernel block
            h = p_eval_matrix(field, p_mul(field, t, rest), z, c)
            if _is_good_split(field, h, c):
                return h, c.sub(h)
            continue
        fac, mult = factors[0]
        if mult >= 2:
            half = (mult + 1) // 2
            y = p_eval_matrix(field, p_pow(field, fac, half), z, c)
            if y.is_zero():
                continue
            ideal = [b.mul(y) for b in corner]
            h = _right_unit_idempotent(field, ideal)
            if h is None:
                raise SolveFailed("corner left ideal has no idempotent right "
                                  "unit; the algebra is not semisimple")
            if _is_good_split(field, h, c):
                return h, c.sub(h)
    return None


def _is_good_split(field, h, c):
    if h.is_zero() or h == c:
        return False
    if h.mul(h) != h:
        return False
    # h must stay inside the corner (automatic for polynomials in corner
    # elements, re-checked for the left-ideal route)
    return h.mul(c) == h and c.mul(h) == h


def primitive_idempotent(field, algebra_mats, unity):
    """A primitive idempotent of a unital semisimple matrix subalgebra.

    Deterministic: always refines the first idempotent of the current
    decomposition.  Corners where no scanned element exposes a splitting are
    treated as division corners (complete for corner dimension <= 2; larger
    undetected corners would be caught downstream by dimension checks).
    """
    current = unity
    while True:
        split = _split_once(field, algebra_mats, current)
        if split is None:
            return current
        current = split[0]
