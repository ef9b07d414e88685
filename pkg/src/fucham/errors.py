class ParseError(ValueError):
    """Malformed input text. Carries a 1-based line/column when known."""

    def __init__(self, message, line=None, col=None):
        self.message = message
        self.line = line
        self.col = col
        if line is not None:
            message = f"{line}:{col}: {message}"
        super().__init__(message)


class DomainError(ValueError):
    """Operands live over incompatible domains (states, elements, ...)."""


class InfeasibleReaction(ValueError):
    pass
