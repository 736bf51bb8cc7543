"""Exception hierarchy shared by all modules."""


class SymsimError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatch(SymsimError, ValueError):
    pass


class ParseError(SymsimError, ValueError):
    """Malformed Pauli expression, matrix literal or instance file.

    ``position`` is a 0-based character offset into the parsed text; ``line``
    and ``column`` (1-based) are filled in when the text came from a file.
    """

    def __init__(self, message, position=None, expected=(), line=None, column=None):
        self.message = message
        self.position = position
        self.expected = tuple(expected)
        self.line = line
        self.column = column
        super().__init__(self._render())

    def _render(self):
        where = ""
        if self.line is not None:
            where = f"line {self.line}, column {self.column}: "
        elif self.position is not None:
            where = f"position {self.position}: "
        exp = ""
        if self.expected:
            exp = " (expected " + " or ".join(self.expected) + ")"
        return f"{where}{self.message}{exp}"

    def at_line(self, line, column_offset=0):
        col = None if self.position is None else self.position + column_offset + 1
        return ParseError(self.message, self.position, self.expected, line, col)


class IndexOutOfRange(SymsimError, ValueError):
    pass


class NotSkewHermitian(SymsimError, ValueError):
    pass


class EmptyGeneratorSet(SymsimError, ValueError):
    pass


class BadArity(SymsimError, ValueError):
    pass


class UnknownFixture(SymsimError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown fixture"


class NotUnitTrace(SymsimError, ValueError):
    pass


class NotNormalized(SymsimError, ValueError):
    pass


class BudgetExceeded(SymsimError, RuntimeError):
    """Lie closure would grow beyond the requested ``max_dim``."""


class NotClosed(SymsimError, RuntimeError):
    """A supplied basis is not closed under commutators."""
