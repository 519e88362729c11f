"""Exception hierarchy.

Every error raised for bad input derives from :class:`RegPropError` (a
``ValueError``), which the command line maps to exit status 2.
"""


class RegPropError(ValueError):
    """Base class for invalid queries."""


class TooSmall(RegPropError):
    pass


class NotAPrimePower(RegPropError):
    pass


class RDividesQ(RegPropError):
    """The prime r divides q; the torus machinery assumes r is coprime to q."""


class EvenQOrthogonal(RegPropError):
    """Orthogonal families are only supported in odd characteristic."""


class CapExceeded(RegPropError):
    pass


class OutOfRange(RegPropError):
    pass


class UnsupportedFamily(RegPropError):
    pass


class UnsupportedExact(RegPropError):
    """No exact value is available; only bounds apply."""


class Unsupported(RegPropError):
    """No bound of the requested kind applies."""


class PreconditionFailed(RegPropError):
    pass


class OrderParityUnsatisfiable(RegPropError):
    pass


class BudgetExceeded(RegPropError):
    pass


class ClosureStalled(RegPropError):
    pass
