"""Exception hierarchy shared by all stages of the solver."""


class OrbitSumError(Exception):
    """Base class for every error raised by this package."""


class ResourceExhausted(OrbitSumError):
    """A step, retry, term or size budget was hit."""


class Unsupported(OrbitSumError):
    """The input lies outside what the engine handles."""


class NotSquarefree(OrbitSumError):
    pass


class DivisionByZero(OrbitSumError, ZeroDivisionError):
    pass


class PreconditionViolated(OrbitSumError):
    pass


class OrderMismatch(OrbitSumError):
    pass


class RamificationOverflow(ResourceExhausted):
    pass


class UncertifiedTail(OrbitSumError):
    """A tail certificate meets the region that was supposed to be read off exactly."""


class OrbitBudgetExceeded(ResourceExhausted):
    """The orbit did not close within the configured bounds (it may be infinite)."""


class ExtensionBudgetExceeded(ResourceExhausted):
    pass


class UnsupportedAdjacencyDegree(Unsupported):
    pass


class UnsupportedKernelShape(Unsupported):
    pass


class UnsupportedSystem(Unsupported):
    pass


class ProblemParseError(OrbitSumError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class Split(OrbitSumError):
    """Raised when a zero divisor had to be inverted.

    ``factor`` is the gcd of the element with the eliminant and
    ``cofactor`` the complementary factor; both are monic univariate
    polynomials (coefficient tuples, low degree first).
    """

    def __init__(self, factor, cofactor):
        self.factor = factor
        self.cofactor = cofactor
        super().__init__(
            f"zero divisor: eliminant splits into degrees {len(factor) - 1} and {len(cofactor) - 1}"
        )
