class SymquadError(Exception):
    """Base class for all package errors."""


class ValidationError(SymquadError, ValueError):
    """Bad input: out-of-range index, wrong size, failed precondition."""


class InvariantViolation(SymquadError):
    """A computed object failed a mathematical invariant.

    ``witness`` carries whatever reproduces the failure (usually a matrix
    serialized as nested lists of strings).
    """

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness
