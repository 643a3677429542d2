"""Exception hierarchy shared by every cobweb module."""


class CobwebError(Exception):
    """Base class for domain errors (CLI maps these to exit status 1)."""


class InvalidParameter(CobwebError, ValueError):
    pass


class NonpositiveTerm(InvalidParameter):
    pass


class OutOfRange(CobwebError, IndexError):
    """A sequence index beyond what a finite (custom) sequence defines."""


class BudgetExceeded(CobwebError):
    """An instance is larger than the configured vertex/cell/search budget."""


class StructuralObstruction(CobwebError):
    """Arithmetic makes the requested tiling impossible (eta != kappa * lambda)."""


class InternalInconsistency(CobwebError):
    """An identity that should always hold was found violated."""
