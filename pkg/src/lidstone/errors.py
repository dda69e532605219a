"""Exception hierarchy.

Precondition failures (the mathematical hypotheses of an operation are not
met) and numerical failures (the computation itself could not be carried out
reliably) are kept apart so that callers such as the CLI can map them to
different exit codes.
"""


class LidstoneError(Exception):
    """Base class for all library errors."""


class PreconditionError(LidstoneError):
    pass


class NumericalError(LidstoneError):
    pass


class SingularSystem(PreconditionError):
    """The boundary determinant D(s) vanishes."""


class TypeTooLarge(PreconditionError):
    """Exponential type is not below the admissible threshold."""


class RadiusOutOfRange(PreconditionError):
    pass


class DegenerateStep(PreconditionError):
    pass


class NearSingular(PreconditionError):
    """The kernel matrix M(t) is numerically singular at the requested t."""


class ContourTooClose(NumericalError):
    """A zero of the kernel determinant lies (numerically) on the contour."""


class OrderUndetermined(NumericalError):
    pass


class CatalogueInconsistent(NumericalError):
    pass


class NotFound(NumericalError):
    pass
