"""Exception hierarchy shared by every module."""


class DarbouxKitError(Exception):
    """Base class for all errors raised by darbouxkit."""


class ParseError(DarbouxKitError, ValueError):
    pass


class EmptyInterval(DarbouxKitError, ValueError):
    pass


class EmptyIntersection(DarbouxKitError):
    pass


class OutOfDomain(DarbouxKitError, ValueError):
    pass


class UnsupportedPointKind(DarbouxKitError, TypeError):
    pass


class NoWitness(DarbouxKitError):
    def __init__(self, message, sides=()):
        super().__init__(message)
        self.sides = tuple(sides)


class RangeNotExact(DarbouxKitError):
    pass


class BudgetExceeded(DarbouxKitError):
    """Raised when a refinement budget runs out; carries the partial result."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class NotIntegrable(DarbouxKitError):
    def __init__(self, message, enclosure=None):
        super().__init__(message)
        self.enclosure = enclosure


class NoContinuityCertificate(DarbouxKitError):
    def __init__(self, message, stages_completed=0):
        super().__init__(message)
        self.stages_completed = stages_completed


class NotContinuousModel(DarbouxKitError):
    pass


class InadmissibleSpec(DarbouxKitError, ValueError):
    pass


class NoClosedForm(DarbouxKitError):
    """The limit value has no closed form; ``bounds`` holds a certified enclosure."""

    def __init__(self, message, bounds=None):
        super().__init__(message)
        self.bounds = bounds


class NonExactEvaluation(DarbouxKitError):
    pass
