"""Exception hierarchy shared by every module of the package."""


class SymDiagError(Exception):
    """Base class for all package errors."""


class DegreeZero(SymDiagError, ValueError):
    pass


class NoConvergence(SymDiagError, ArithmeticError):
    pass


class DimensionMismatch(SymDiagError, ValueError):
    pass


class ZeroCoordinate(SymDiagError, ValueError):
    pass


class ParseError(SymDiagError, ValueError):
    pass


class VerificationFailure(SymDiagError, AssertionError):
    pass


class NotOnVariety(SymDiagError, ValueError):
    pass


class DegenerateHessian(SymDiagError, ArithmeticError):
    pass


class NonSmoothPoint(SymDiagError, ArithmeticError):
    pass


class CriticalParameter(SymDiagError, ValueError):
    """Raised when a smooth-case routine is called at c = (d-1)^(d-1)."""


class BudgetExceeded(SymDiagError, MemoryError):
    pass


class ZeroConstantTerm(SymDiagError, ValueError):
    pass


class DegenerateOperator(SymDiagError, ValueError):
    pass


class LeadingZero(SymDiagError, ZeroDivisionError):
    """The leading recurrence polynomial vanishes inside the requested run."""

    def __init__(self, n):
        super().__init__(f"leading recurrence coefficient vanishes at n={n}")
        self.n = n


class OracleUnavailable(SymDiagError, RuntimeError):
    pass
