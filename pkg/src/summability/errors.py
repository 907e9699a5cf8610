"""Exception hierarchy shared by every module of the package."""


class SummabilityError(Exception):
    """Base class; the CLI maps every subclass to exit code 2."""


class PreconditionViolated(SummabilityError, ValueError):
    pass


class InvalidParams(SummabilityError, ValueError):
    pass


class OutOfRegion(SummabilityError, ValueError):
    pass


class DimensionMismatch(SummabilityError, ValueError):
    pass


class IndexOutOfRange(SummabilityError, IndexError):
    pass


class NotVectorValued(SummabilityError, ValueError):
    pass


class TooLarge(SummabilityError, ValueError):
    pass


class Degenerate(SummabilityError, ValueError):
    pass
