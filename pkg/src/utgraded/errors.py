"""Error types shared across the package.

Every error carries a stable machine-readable ``code`` (the class name) and a
JSON-safe ``payload`` with witness data, so the CLI can mirror library errors
onto stderr without reformatting.
"""


class AlgebraError(Exception):
    """Base class for all documented errors."""

    def __init__(self, message="", **payload):
        super().__init__(message or type(self).__name__)
        self.payload = payload

    @property
    def code(self):
        return type(self).__name__

    def to_json(self):
        return {"code": self.code, "message": str(self), **self.payload}


# group
class NotLatinSquare(AlgebraError): pass
class NotAssociative(AlgebraError): pass
class NoIdentityAtZero(AlgebraError): pass
class MissingInverse(AlgebraError): pass
class ElementOutOfRange(AlgebraError): pass

# scalar
class DivisionByZero(AlgebraError): pass
class FieldMismatch(AlgebraError): pass

# linalg
class DimensionMismatch(AlgebraError): pass
class Singular(AlgebraError): pass

# gradings
class NotInUTShape(AlgebraError): pass
class NotABasis(AlgebraError): pass
class ClosureViolation(AlgebraError): pass
class SingularS(AlgebraError): pass
class SNotBlockTriangular(AlgebraError): pass

# constructions
class LengthMismatch(AlgebraError): pass
class CocycleIdentityFails(AlgebraError): pass
class ZeroValue(AlgebraError): pass
class NotNormalized(AlgebraError): pass
class UnsupportedCocycle(AlgebraError): pass

# decomposition pipeline
class NoLeftUnit(AlgebraError): pass
class ComponentNotLeftUnit(AlgebraError): pass
class RadicalNotGraded(AlgebraError): pass
class BlockNotGraded(AlgebraError): pass
class EndomorphismNotDivision(AlgebraError): pass
class NoNonzeroHomogeneous(AlgebraError): pass
class SolveFailed(AlgebraError): pass
class ChainElementZero(AlgebraError): pass
class PsiNotBijective(AlgebraError): pass
class PsiNotMultiplicative(AlgebraError): pass
class PsiDegreeMismatch(AlgebraError): pass

# instance generation
class PlanInconsistent(AlgebraError): pass

# catch-all for malformed inputs (bad JSON fields, non-prime modulus, ...)
class InvalidInput(AlgebraError): pass
