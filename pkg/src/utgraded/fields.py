"""Exact field arithmetic: arbitrary-precision rationals and prime fields GF(p).

Rationals are gmpy2.mpq values (always reduced, positive denominator); prime
field elements are plain ints in [0, p).  Nothing in the package ever rounds.
"""

from __future__ import annotations

from gmpy2 import mpq, mpz, isqrt

from .errors import DivisionByZero, FieldMismatch, InvalidInput


class Field:
    """Common interface for the two scalar backends."""

    kind = ""
    characteristic = 0

    def __eq__(self, other):
        return isinstance(other, Field) and self.kind == other.kind \
            and self.characteristic == other.characteristic

    def __hash__(self):
        return hash((self.kind, self.characteristic))

    def check_same(self, other):
        if self != other:
            raise FieldMismatch("scalars from different fields",
                                left=self.to_json(), right=other.to_json())

    def to_json(self):
        raise NotImplementedError


class Rationals(Field):
    kind = "Q"
    characteristic = 0

    def __repr__(self):
        return "Q"

    zero = mpq(0)
    one = mpq(1)

    def normalize(self, a):
        """Canonical form of a raw arithmetic result (identity for mpq)."""
        return a if isinstance(a, type(self.zero)) else mpq(a)

    def from_int(self, n):
        return mpq(n)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return 1 / a

    def div(self, a, b):
        if b == 0:
            raise DivisionByZero("division by zero")
        return a / b

    def is_zero(self, a):
        return a == 0

    def is_square(self, a):
        if a < 0:
            return False
        num, den = mpz(a.numerator), mpz(a.denominator)
        return isqrt(num) ** 2 == num and isqrt(den) ** 2 == den

    def parse(self, text):
        try:
            if isinstance(text, int):
                return mpq(text)
            return mpq(str(text))
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidInput(f"bad rational {text!r}") from exc

    def serialize(self, a):
        return str(a)

    def to_json(self):
        return {"kind": "Q"}


class PrimeField(Field):
    kind = "GFp"

    def __init__(self, p):
        if not _is_prime(p):
            raise InvalidInput(f"modulus {p} is not prime")
        self.p = p
        self.characteristic = p
        self.zero = 0
        self.one = 1 % p

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GFp", self.p))

    def normalize(self, a):
        """Reduce a raw (possibly unreduced) integer result mod p."""
        return a % self.p

    def from_int(self, n):
        return n % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise DivisionByZero("inverse of zero")
        return pow(a, -1, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a):
        return a % self.p == 0

    def is_square(self, a):
        a %= self.p
        if a == 0:
            return True
        return pow(a, (self.p - 1) // 2, self.p) == 1

    def parse(self, value):
        if isinstance(value, bool) or not isinstance(value, int):
            try:
                value = int(str(value), 10)
            except ValueError as exc:
                raise InvalidInput(f"bad GF({self.p}) scalar {value!r}") from exc
        return value % self.p

    def serialize(self, a):
        return int(a % self.p)

    def to_json(self):
        return {"kind": "GFp", "p": self.p}


def _is_prime(p):
    if not isinstance(p, int) or p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def field_from_json(obj):
    if not isinstance(obj, dict) or "kind" not in obj:
        raise InvalidInput("field spec must be an object with a 'kind'")
    if obj["kind"] == "Q":
        return Rationals()
    if obj["kind"] == "GFp":
        return PrimeField(int(obj.get("p", 0)))
    raise InvalidInput(f"unknown field kind {obj['kind']!r}")


def char_precondition(field, dim):
    """True iff char K = 0 or char K > dim; used to annotate reports only."""
    return field.characteristic == 0 or field.characteristic > dim
