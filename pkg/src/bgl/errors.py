"""Exception hierarchy shared by the library and the command line."""


class BglError(Exception):
    """Base class for every error raised by this package."""


class InputError(BglError, ValueError):
    """Malformed or unsuitable input (bad file, failed precondition)."""


class ResourceError(BglError):
    """An exhaustive computation would exceed its configured budget."""


class ParseError(InputError):
    """Syntax error with a 1-based line and column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
