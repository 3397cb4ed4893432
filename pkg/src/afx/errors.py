class InvariantViolation(RuntimeError):
    """A computed object broke a property that the theory guarantees."""


class InputError(ValueError):
    """Malformed user input, optionally located by line and column."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.message = message
        self.line = line
        self.col = col
        where = f"line {line}" + (f", col {col}" if col is not None else "") if line is not None else ""
        super().__init__(f"{where}: {message}" if where else message)
