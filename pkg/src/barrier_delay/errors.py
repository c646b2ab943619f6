"""Exception types raised by barrier_delay."""


class BarrierDelayError(Exception):
    """Base class for all package errors."""


class DomainError(BarrierDelayError, ValueError):
    """Energy or geometry outside the over-barrier domain."""


class UndefinedError(BarrierDelayError, ValueError):
    """Quantity is not defined for this configuration (e.g. k1 == k2)."""


class PhaseWrapError(BarrierDelayError, ArithmeticError):
    """Phase could not be continued across a finite-difference stencil."""


class WrapAmbiguityError(BarrierDelayError, ArithmeticError):
    """Consecutive phase samples differ by ~pi; the branch cannot be chosen."""


class ConstructionError(BarrierDelayError, ValueError):
    """Wave packet specification is inconsistent with the barrier."""


class NoPeakError(BarrierDelayError, ArithmeticError):
    """Profile has no interior maximum on the time window."""
