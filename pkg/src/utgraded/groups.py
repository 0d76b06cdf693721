"""Grading groups: finite groups via Cayley tables, free abelian groups Z^k,
and finite direct products of those.

Elements are plain hashable values: an int index for finite groups (0 is the
identity), a tuple of ints for free abelian groups, and a tuple of factor
elements for products.  This keeps degree bookkeeping dict-friendly and
deterministic.
"""

from __future__ import annotations

from .errors import (ElementOutOfRange, InvalidInput, MissingInverse,
                     NoIdentityAtZero, NotAssociative, NotLatinSquare)


class Group:
    kind = ""

    @property
    def identity(self):
        raise NotImplementedError

    def mul(self, g, h):
        raise NotImplementedError

    def inv(self, g):
        raise NotImplementedError

    def check_element(self, g):
        raise NotImplementedError

    def element_to_json(self, g):
        raise NotImplementedError

    def element_from_json(self, obj):
        raise NotImplementedError

    def to_json(self):
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, Group) and self.to_json() == other.to_json()

    def __hash__(self):
        return hash(repr(self.to_json()))


class FiniteGroup(Group):
    """Finite group given by an order x order Cayley table of indices."""

    kind = "finite"

    def __init__(self, table, names=None):
        self.order = len(table)
        self.table = [list(row) for row in table]
        self.names = list(names) if names else None
        self._validate()
        self.inverse_table = self._build_inverses()

    def _validate(self):
        m = self.order
        if m < 1:
            raise InvalidInput("empty multiplication table")
        for row in self.table:
            if len(row) != m:
                raise InvalidInput("multiplication table is not square")
            for v in row:
                if not isinstance(v, int) or not 0 <= v < m:
                    raise ElementOutOfRange(f"table entry {v!r} out of range", entry=v)
        for j in range(m):
            if self.table[0][j] != j or self.table[j][0] != j:
                raise NoIdentityAtZero("row/column 0 must realize the identity", index=j)
        full = set(range(m))
        for i in range(m):
            if set(self.table[i]) != full:
                raise NotLatinSquare("repeated entry in row", row=i)
            if {self.table[r][i] for r in range(m)} != full:
                raise NotLatinSquare("repeated entry in column", column=i)
        t = self.table
        for a in range(m):
            ta = t[a]
            for b in range(m):
                tab = t[ta[b]]
                tb = t[b]
                for c in range(m):
                    if tab[c] != ta[tb[c]]:
                        raise NotAssociative("associativity fails", triple=[a, b, c])

    def _build_inverses(self):
        inv = [None] * self.order
        for g in range(self.order):
            for h in range(self.order):
                if self.table[g][h] == 0 and self.table[h][g] == 0:
                    inv[g] = h
                    break
            if inv[g] is None:
                raise MissingInverse("no two-sided inverse", element=g)
        return inv

    @property
    def identity(self):
        return 0

    def elements(self):
        return range(self.order)

    def mul(self, g, h):
        self.check_element(g)
        self.check_element(h)
        return self.table[g][h]

    def inv(self, g):
        self.check_element(g)
        return self.inverse_table[g]

    def check_element(self, g):
        if not isinstance(g, int) or not 0 <= g < self.order:
            raise ElementOutOfRange(f"{g!r} is not an element index", element=repr(g))

    def element_to_json(self, g):
        self.check_element(g)
        return g

    def element_from_json(self, obj):
        if not isinstance(obj, int):
            raise InvalidInput(f"finite group element must be an int, got {obj!r}")
        self.check_element(obj)
        return obj

    def element_name(self, g):
        if self.names:
            return self.names[g]
        return str(g)

    def to_json(self):
        out = {"kind": "finite", "order": self.order, "mul": self.table}
        if self.names:
            out["names"] = self.names
        return out


class FreeAbelianGroup(Group):
    """Z^k with componentwise addition; elements are int tuples of length k."""

    kind = "free_abelian"

    def __init__(self, rank):
        if not isinstance(rank, int) or rank < 1:
            raise InvalidInput(f"rank must be a positive int, got {rank!r}")
        self.rank = rank

    @property
    def identity(self):
        return (0,) * self.rank

    def mul(self, g, h):
        self.check_element(g)
        self.check_element(h)
        return tuple(a + b for a, b in zip(g, h))

    def inv(self, g):
        self.check_element(g)
        return tuple(-a for a in g)

    def check_element(self, g):
        if not (isinstance(g, tuple) and len(g) == self.rank
                and all(isinstance(a, int) for a in g)):
            raise ElementOutOfRange(f"{g!r} is not a rank-{self.rank} vector",
                                    element=repr(g))

    def element_to_json(self, g):
        self.check_element(g)
        return list(g)

    def element_from_json(self, obj):
        if not isinstance(obj, list):
            raise InvalidInput(f"free abelian element must be a list, got {obj!r}")
        g = tuple(int(a) for a in obj)
        self.check_element(g)
        return g

    def to_json(self):
        return {"kind": "free_abelian", "rank": self.rank}


class ProductGroup(Group):
    """Direct product; elements are tuples with one entry per factor."""

    kind = "product"

    def __init__(self, factors):
        if len(factors) < 2:
            raise InvalidInput("product needs at least two factors")
        self.factors = list(factors)

    @property
    def identity(self):
        return tuple(f.identity for f in self.factors)

    def mul(self, g, h):
        self.check_element(g)
        self.check_element(h)
        return tuple(f.mul(a, b) for f, a, b in zip(self.factors, g, h))

    def inv(self, g):
        self.check_element(g)
        return tuple(f.inv(a) for f, a in zip(self.factors, g))

    def check_element(self, g):
        if not isinstance(g, tuple) or len(g) != len(self.factors):
            raise ElementOutOfRange(f"{g!r} is not a product element", element=repr(g))
        for f, a in zip(self.factors, g):
            f.check_element(a)

    def element_to_json(self, g):
        self.check_element(g)
        return [f.element_to_json(a) for f, a in zip(self.factors, g)]

    def element_from_json(self, obj):
        if not isinstance(obj, list) or len(obj) != len(self.factors):
            raise InvalidInput(f"product element must be a list of length "
                               f"{len(self.factors)}, got {obj!r}")
        return tuple(f.element_from_json(a) for f, a in zip(self.factors, obj))

    def to_json(self):
        return {"kind": "product", "factors": [f.to_json() for f in self.factors]}


def group_validate(table, names=None):
    """Validate a raw Cayley table (identity must sit at index 0)."""
    return FiniteGroup(table, names=names)


def group_from_json(obj):
    if not isinstance(obj, dict) or "kind" not in obj:
        raise InvalidInput("group spec must be an object with a 'kind'")
    kind = obj["kind"]
    if kind == "finite":
        return FiniteGroup(obj["mul"], names=obj.get("names"))
    if kind == "free_abelian":
        return FreeAbelianGroup(int(obj["rank"]))
    if kind == "product":
        return ProductGroup([group_from_json(f) for f in obj["factors"]])
    raise InvalidInput(f"unknown group kind {kind!r}")


def cyclic_group(n):
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return FiniteGroup(table, names=[str(i) for i in range(n)])


def klein_four_group():
    table = [[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]]
    return FiniteGroup(table, names=["e", "a", "b", "ab"])


_S3_PERMS = [(0, 1, 2), (1, 0, 2), (2, 1, 0), (0, 2, 1), (1, 2, 0), (2, 0, 1)]
_S3_NAMES = ["e", "(12)", "(13)", "(23)", "(123)", "(132)"]


def symmetric_group_3():
    """S3 with elements ordered e,(12),(13),(23),(123),(132).

    Products compose right-to-left: (g*h)(x) = g(h(x)).
    """
    index = {p: i for i, p in enumerate(_S3_PERMS)}
    table = []
    for g in _S3_PERMS:
        row = []
        for h in _S3_PERMS:
            comp = tuple(g[h[x]] for x in range(3))
            row.append(index[comp])
        table.append(row)
    return FiniteGroup(table, names=_S3_NAMES)


def dihedral_group_4():
    """D4 of order 8: elements r^i s^j, indexed i + 4j."""
    def mul(a, b):
        i1, j1 = a % 4, a // 4
        i2, j2 = b % 4, b // 4
        # s r = r^-1 s
        i = (i1 + (i2 if j1 == 0 else -i2)) % 4
        j = (j1 + j2) % 2
        return i + 4 * j
    table = [[mul(a, b) for b in range(8)] for a in range(8)]
    return FiniteGroup(table)


def quaternion_group():
    """Q8 with elements 1,-1,i,-i,j,-j,k,-k indexed 0..7."""
    # encode x as (sign, axis): axis 0 = 1, 1 = i, 2 = j, 3 = k
    def decode(a):
        return a % 2, a // 2
    def encode(sign, axis):
        return axis * 2 + sign
    mul_axis = {
        (0, 0): (0, 0), (0, 1): (0, 1), (0, 2): (0, 2), (0, 3): (0, 3),
        (1, 0): (0, 1), (2, 0): (0, 2), (3, 0): (0, 3),
        (1, 1): (1, 0), (2, 2): (1, 0), (3, 3): (1, 0),
        (1, 2): (0, 3), (2, 3): (0, 1), (3, 1): (0, 2),
        (2, 1): (1, 3), (3, 2): (1, 1), (1, 3): (1, 2),
    }
    def mul(a, b):
        s1, x1 = decode(a)
        s2, x2 = decode(b)
        s3, x3 = mul_axis[(x1, x2)]
        return encode((s1 + s2 + s3) % 2, x3)
    table = [[mul(a, b) for b in range(8)] for a in range(8)]
    return FiniteGroup(table, names=["1", "-1", "i", "-i", "j", "-j", "k", "-k"])


def free_abelian_group(rank):
    return FreeAbelianGroup(rank)


def product_group(*factors):
    return ProductGroup(list(factors))
