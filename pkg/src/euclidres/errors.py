"""Exception hierarchy shared by all modules."""


class EuclidresError(Exception):
    """Base class for every error raised by the package."""


class DimensionError(EuclidresError, ValueError):
    pass


class InvalidSpecError(EuclidresError, ValueError):
    """A physical input violates the invariants of its type."""


class DomainError(EuclidresError, ValueError):
    """A formula was evaluated outside its region of validity."""


class QuadratureError(EuclidresError, RuntimeError):
    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class RootNotFoundError(EuclidresError, RuntimeError):
    def __init__(self, message, scan=None):
        super().__init__(message)
        self.scan = scan


class NoPhysicalBranchError(EuclidresError, RuntimeError):
    """No stable exit branch exists; decay is purely static."""

    def __init__(self, message, branches=None):
        super().__init__(message)
        self.branches = branches


class IntegrationError(EuclidresError, RuntimeError):
    """Adaptive step size underflowed along the time contour."""

    def __init__(self, message, t=None, x=None):
        super().__init__(message)
        self.t = t
        self.x = x
