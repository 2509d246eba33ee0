"""Exception hierarchy shared across the package."""


class HcpackError(Exception):
    """Base class for all package errors."""


class DomainError(HcpackError):
    """Input is outside the mathematical domain of the operation."""


class InvalidSiteError(DomainError):
    pass


class NotAttainableError(DomainError):
    def __init__(self, kind, d2):
        super().__init__(f"d2={d2} is not attainable on {kind}")
        self.kind = kind
        self.d2 = d2


class UnsupportedCaseError(DomainError):
    """Raised for sliding / exceptional values where the lattice theory is off-limits."""

    def __init__(self, kind, d2, case, message=None):
        super().__init__(message or f"{kind} d2={d2}: unsupported case {case}")
        self.kind = kind
        self.d2 = d2
        self.case = case


class CommensurabilityError(DomainError):
    pass


class BudgetExceededError(HcpackError):
    def __init__(self, message, limit=None, requested=None):
        super().__init__(message)
        self.limit = limit
        self.requested = requested
