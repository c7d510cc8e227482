class NcaError(Exception):
    pass


class ParseError(NcaError):
    """Malformed relation text or job file.

    ``line`` and ``column`` are 1-based when known.
    """

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        self.reason = message
        if line is not None and column is not None:
            message = f"{message} (line {line}, column {column})"
        elif column is not None:
            message = f"{message} (column {column})"
        super().__init__(message)


class OutOfWindowError(NcaError):
    """A computation was requested beyond the degree window it is valid in."""


class UncertifiedError(NcaError):
    """Input data is not certified in the window the computation needs."""


class MissingDualityError(NcaError):
    pass
