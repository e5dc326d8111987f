class AcheckError(Exception):
    """Base class for errors raised by this package."""


class UsageError(AcheckError, ValueError):
    """An operation was called outside its contract."""


class FormatError(AcheckError, ValueError):
    """Malformed input file."""

    def __init__(self, message: str, offset: int | None = None, line: int | None = None):
        self.offset = offset
        self.line = line
        where = ""
        if offset is not None:
            where = f" at byte {offset}"
        elif line is not None:
            where = f" on line {line}"
        super().__init__(message + where)


class ResourceExhausted(AcheckError):
    """A configured time, size or enumeration cap was hit."""

    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(reason)
