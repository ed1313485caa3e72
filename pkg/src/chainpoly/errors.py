"""Exception hierarchy shared by every module of the package."""


class ChainPolyError(Exception):
    """Base class for all package errors."""


class ContractViolation(ChainPolyError, ValueError):
    """An argument violates an operation's precondition."""


class InvalidParameters(ChainPolyError, ValueError):
    """Constructor parameters that do not describe a valid object."""


class SizeCapExceeded(ChainPolyError):
    """The requested computation exceeds a configured work or size cap."""


class HypothesisViolation(ChainPolyError):
    """Input does not satisfy a mathematical hypothesis (loop, coloop, simplicity)."""


class LaurentError(ChainPolyError, ValueError):
    """A coefficient reversal would produce negative exponents."""


class SchemaError(ChainPolyError, ValueError):
    """Malformed JSON description; ``path`` locates the offending field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
