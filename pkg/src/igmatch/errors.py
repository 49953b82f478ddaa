"""Exception types shared across the package.

The command line layer maps these onto process exit codes, so solver and
parser code should raise the most specific class that applies.
"""


class InputError(ValueError):
    """Caller-supplied data violates a documented precondition."""


class SizeCapError(InputError):
    """An instance exceeds a configured brute-force or enumeration cap.

    Caps are explicit configuration values with safe defaults.  Exceeding a
    cap is always a hard error, never a silent truncation.
    """

    def __init__(self, what: str, actual, limit):
        self.what = what
        self.actual = actual
        self.limit = limit
        super().__init__(f"{what}: size {actual} exceeds cap {limit}")


class ParseError(InputError):
    """Malformed input file, with line/column-precise position."""

    def __init__(self, message: str, line: int, col: int = 1, path: str | None = None):
        self.line = line
        self.col = col
        self.path = path
        where = f"{path or '<input>'}:{line}:{col}"
        super().__init__(f"{where}: {message}")


class InternalError(AssertionError):
    """A consistency check inside an algorithm failed; indicates a bug."""
