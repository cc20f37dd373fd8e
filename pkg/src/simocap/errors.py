"""Exception types shared across the package."""


class SimocapError(Exception):
    """Base class for all package errors."""


class NotHermitian(SimocapError, ValueError):
    pass


class NonPositiveDefinite(SimocapError, ValueError):
    pass


class Singular(SimocapError, ValueError):
    pass


class ZeroDirection(SimocapError, ValueError):
    pass


class ZeroVector(SimocapError, ValueError):
    pass


class DegenerateDraw(SimocapError, RuntimeError):
    pass


class NotPSD(SimocapError, ValueError):
    """Gram specification is not positive semidefinite or not realizable in C^2."""


class Unbounded(SimocapError, ValueError):
    pass


class Infeasible(SimocapError, ValueError):
    pass


class AlphabetTooLarge(SimocapError, ValueError):
    pass


class CertificateViolated(SimocapError, RuntimeError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class DegenerateChannel(SimocapError, ValueError):
    pass
