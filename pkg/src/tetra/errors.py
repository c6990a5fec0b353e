"""Exception types shared across the package."""


class TetraError(Exception):
    """Base class for every error raised by tetra."""


# exactalg
class DivisionByZeroFunction(TetraError, ZeroDivisionError):
    pass


class DenominatorVanishes(TetraError, ZeroDivisionError):
    pass


class PoleAtPoint(TetraError, ZeroDivisionError):
    pass


class UnboundVariable(TetraError, KeyError):
    pass


class MixedSeriesVariable(TetraError, ValueError):
    pass


# formulas
class FormulaSyntaxError(TetraError, ValueError):
    """Parse failure with the byte offset and the set of tokens that would have been accepted."""

    def __init__(self, message: str, offset: int, expected: frozenset = frozenset()):
        self.offset = offset
        self.expected = frozenset(expected)
        exp = ", ".join(sorted(self.expected))
        super().__init__(f"{message} at offset {offset}" + (f" (expected one of: {exp})" if exp else ""))


class ArityMismatch(TetraError, ValueError):
    pass


class UnknownSymbol(TetraError, KeyError):
    pass


# words
class LetterOutOfRange(TetraError, ValueError):
    pass


class MoveNotApplicable(TetraError, ValueError):
    pass


# transforms
class UnknownTransform(TetraError, KeyError):
    pass


class IdentityFails(TetraError, AssertionError):
    pass


# verify
class SolveStuck(TetraError, RuntimeError):
    pass


class ComparisonFailed(TetraError, AssertionError):
    pass


class CertificationFailed(TetraError, AssertionError):
    pass


# evolve
class IndexOutOfRange(TetraError, IndexError):
    pass


class QuaternityFails(TetraError, AssertionError):
    pass


class TheoremViolated(TetraError, AssertionError):
    pass


class NoPermutation(TetraError, AssertionError):
    pass


class NonUniquePermutation(TetraError, AssertionError):
    pass


# wronskian
class InsufficientTruncationOrder(TetraError, ValueError):
    pass


class NotInGeneralPosition(TetraError, ValueError):
    pass


class ODEInconsistent(TetraError, ArithmeticError):
    pass


# cli
class UsageError(TetraError, ValueError):
    pass
