"""Exception types shared across the package."""


class DomainError(ValueError):
    """A physical parameter is outside its allowed range."""


class UsageError(ValueError):
    """Inconsistent arguments: bad mode indices, dimension mismatch, unknown keys."""


class NumericalError(ArithmeticError):
    """A computation would be ill-conditioned enough to return garbage."""


class StationaryPointError(ArithmeticError):
    """The signal slope vanishes, so error propagation gives no phase estimate."""


class TruncationError(RuntimeError):
    """A Fock-space cutoff discards more probability than allowed."""

    def __init__(self, message, leak):
        super().__init__(f"{message} (leak={leak:.3e})")
        self.leak = leak


class TruncationWarning(UserWarning):
    """Oracle result computed on a state whose truncation leak is not negligible."""
