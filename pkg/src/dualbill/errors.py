"""Exception types raised across the package."""


class BilliardError(Exception):
    """Base class for every error raised by dualbill."""


# exact arithmetic
class MixedField(BilliardError, TypeError):
    pass


class ApproxNotSupported(BilliardError, TypeError):
    pass


class NotRepresentable(BilliardError, ValueError):
    """A value would need a second quadratic extension or a higher-degree field."""


# projective core
class ZeroInput(BilliardError, ValueError):
    pass


class CoincidentPoints(BilliardError, ValueError):
    pass


class DegeneratePairs(BilliardError, ValueError):
    pass


class ChartMismatch(BilliardError, ValueError):
    pass


# conics and pencils
class PointNotOnConic(BilliardError, ValueError):
    pass


class SingularPoint(BilliardError, ValueError):
    pass


class LineOnConic(BilliardError, ValueError):
    pass


class BasePoint(BilliardError, ValueError):
    pass


class DegenerateMember(BilliardError, ValueError):
    pass


class PointOnConic(BilliardError, ValueError):
    pass


class SingularConic(BilliardError, ValueError):
    pass


class SingularA(BilliardError, ValueError):
    pass


# dual billiards
class PencilSpec(BilliardError, ValueError):
    pass


class InfinitePoint(BilliardError, ValueError):
    pass


class HigherOrderPole(BilliardError, ValueError):
    pass


class ResidueSumNotFour(BilliardError, ValueError):
    pass


class DuplicateLocation(BilliardError, ValueError):
    pass


# integrals
class UnknownSpec(BilliardError, ValueError):
    pass


class RhoNotInM(BilliardError, ValueError):
    pass


class LineInLocus(BilliardError, ValueError):
    pass


class FieldContext(BilliardError, ValueError):
    pass


# quasihomogeneous toolkit
class ZeroPoly(BilliardError, ValueError):
    pass


class IrreduciblePrimeOverField(BilliardError, ValueError):
    pass


class RhoInteger(BilliardError, ValueError):
    pass


class NotPrimitive(BilliardError, ValueError):
    pass


class RelationViolated(BilliardError, ValueError):
    pass


class AmbiguousCase(BilliardError, ValueError):
    pass


# hessians
class SampleOffCurve(BilliardError, ValueError):
    pass


class BranchAmbiguity(BilliardError, ValueError):
    pass


class FitFailure(BilliardError, ValueError):
    pass


class SingularSample(BilliardError, ValueError):
    pass


# projective billiards
class SingularFieldPoint(BilliardError, ValueError):
    pass


class DegenerateFrame(BilliardError, ValueError):
    pass


class NoHit(BilliardError, ValueError):
    pass


class SingularHit(BilliardError, ValueError):
    pass


class NoCatalogPsi(BilliardError, ValueError):
    pass
