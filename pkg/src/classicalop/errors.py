"""Typed failures raised across the package.

Every stage of the inverse pipeline maps to a distinct exception class so the
CLI can turn them into stable exit codes.
"""


class ClassicalOPError(Exception):
    """Base class for all package errors."""


class ZeroPolynomial(ClassicalOPError, ValueError):
    """An operation that needs a nonzero polynomial received zero."""


class ResourceLimit(ClassicalOPError):
    """The configured step budget of the solver was exhausted."""


class ParseError(ClassicalOPError, ValueError):
    def __init__(self, message: str, line: int, column: int, expected: tuple[str, ...] = ()):
        self.line = line
        self.column = column
        self.expected = tuple(expected)
        where = f"line {line}, column {column}"
        hint = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{where}: {message}{hint}")
        self.message = message


class UnknownSymbol(ParseError):
    """An identifier that was not declared as a parameter."""


class DegenerateEquation(ClassicalOPError, ValueError):
    """sigma and tau carry no usable information (a = b = d = 0)."""


class DegenerateFamily(ClassicalOPError, ValueError):
    def __init__(self, n: int, k: int, message: str = ""):
        self.n = n
        self.k = k
        super().__init__(message or f"coefficient recursion breaks down at n={n}, k={k}")


class DegenerateMoments(ClassicalOPError, ValueError):
    def __init__(self, index: int):
        self.index = index
        super().__init__(f"Hankel determinant of order {index} vanishes")


class UndefinedRatio(ClassicalOPError, ValueError):
    """The requested coefficient vanishes identically, so its ratio is 0/0."""


class KernelNotFound(ClassicalOPError):
    """No annihilating recurrence of order <= the basis dimension was found."""


class NotOrthogonalShape(ClassicalOPError):
    """After solving for p_{n+1}, t_n is not linear in x or u_n depends on x."""


class DegreeBoundExceeded(ClassicalOPError):
    """Monic coefficients have numerator/denominator degrees beyond the bounds."""


class NoSolution(ClassicalOPError):
    """The identity system has an empty solution set in every branch."""


class SolverIncomplete(ClassicalOPError):
    """Some components could only be described up to unresolved cubic or higher factors."""

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial
