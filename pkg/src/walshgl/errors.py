"""Exception types shared across the package."""


class ParseError(ValueError):
    """Malformed textual input (ANF expression, hex table, S-box listing).

    ``position`` is the 1-based character offset of the offending token when
    the input is a single string, or None when it does not apply.
    """

    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class CapacityError(ValueError):
    """Requested operation exceeds the configured size limits."""
