"""Exception hierarchy shared by every module of the package."""


class ToricError(Exception):
    """Base class for all errors raised by toric_mmp."""


class ZeroVector(ToricError, ValueError):
    pass


class NotPrimitive(ToricError, ValueError):
    pass


class NotInSpan(ToricError, ValueError):
    pass


class NotSimplicial(ToricError, ValueError):
    pass


class NotInSupport(ToricError, ValueError):
    pass


class AlreadyRay(ToricError, ValueError):
    pass


class BoundaryWall(ToricError, ValueError):
    """The codimension-1 cone lies in fewer than two maximal cones."""


class NotComplete(ToricError, ValueError):
    pass


class NotMaximal(ToricError, ValueError):
    pass


class NoCompactCurves(ToricError, ValueError):
    """The fan has no interior wall, hence no compact torus-invariant curve."""


class UnboundedWithBoundary(ToricError, ValueError):
    """Some ray has boundary coefficient exceeding its epsilon value, so the
    discrepancy is unbounded below over the cones containing it."""


class InconsistentRay(ToricError):
    """Walls grouped into one extremal ray disagree on the contraction type."""


class NonSimplicialResult(ToricError):
    pass


class UnsupportedCircuit(ToricError):
    pass


class TheoremViolation(ToricError):
    """A structural statement of the toric foliated MMP failed at runtime.

    ``context`` carries whatever data is needed to replay the failure.
    """

    def __init__(self, message, context=None):
        super().__init__(message)
        self.context = context or {}


class StepCapExceeded(ToricError):
    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


class ParseError(ToricError, ValueError):
    def __init__(self, message, location=None):
        if location:
            message = f"{location}: {message}"
        super().__init__(message)
        self.location = location


class ValidationError(ToricError, ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


__all__ = [
    "AlreadyRay",
    "BoundaryWall",
    "InconsistentRay",
    "NoCompactCurves",
    "NonSimplicialResult",
    "NotComplete",
    "NotInSpan",
    "NotInSupport",
    "NotMaximal",
    "NotPrimitive",
    "NotSimplicial",
    "ParseError",
    "StepCapExceeded",
    "TheoremViolation",
    "ToricError",
    "UnboundedWithBoundary",
    "UnsupportedCircuit",
    "ValidationError",
    "ZeroVector",
]
