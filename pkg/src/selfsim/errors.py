"""Exception types shared across modules."""


class ResourceLimitError(RuntimeError):
    """A computation would exceed its configured size bound."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class SystemFileError(ValueError):
    """A system file failed to parse or does not describe a valid system."""

    def __init__(self, message, line=None, column=None, ident=None):
        where = ""
        if line is not None:
            where = f" (line {line}, column {column})"
        elif ident is not None:
            where = f" (at {ident!r})"
        super().__init__(message + where)
        self.line = line
        self.column = column
        self.ident = ident


class RealizationError(ValueError):
    """Realization hints are missing or do not respect the gluing."""
