"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input lies outside the domain of the requested quantity."""


class ConsistencyError(ArithmeticError):
    """An internal numerical invariant was violated (indicates a bug upstream)."""


class TruncationError(ValueError):
    """A Fock-space truncation lost more norm than the configured budget."""

    def __init__(self, message: str, deficit: float, suggested_dim: int):
        super().__init__(message)
        self.deficit = deficit
        self.suggested_dim = suggested_dim
