"""Exception types shared across the package."""


class GraphInputError(ValueError):
    """Bad vertex id, unknown edge, or malformed graph input."""


class ContractorError(ValueError):
    """Partition is not a valid contractor (overlap, gap, disconnected part)."""


class DecompositionError(ValueError):
    """Tree-decomposition input violates a required invariant."""


class StateError(RuntimeError):
    """Operation called on a search state that cannot support it."""


class CapExceededError(RuntimeError):
    """An enumeration exceeded its configured size cap."""


class ParseError(ValueError):
    """Malformed .gr / .td / certificate text."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class SolveTimeout(RuntimeError):
    """Cooperative deadline expired inside a solver loop."""
