"""Exception hierarchy shared by every module."""


class ElemCIError(Exception):
    """Base class for all library errors."""


class InvalidTriplet(ElemCIError, ValueError):
    pass


class OverlappingSets(InvalidTriplet):
    pass


class EmptySide(InvalidTriplet):
    pass


class IndexOutOfRange(InvalidTriplet):
    pass


class ContextClash(InvalidTriplet):
    pass


class Incomparable(ElemCIError):
    """Triplets with different contexts cannot be compared."""


class UniverseMismatch(ElemCIError):
    pass


class LevelMismatch(ElemCIError):
    pass


class NotClosed(ElemCIError):
    pass


class UniverseTooLarge(ElemCIError):
    pass


class BudgetExhausted(ElemCIError):
    pass


class AuxNameCollision(ElemCIError):
    pass


class InvalidSets(ElemCIError, ValueError):
    pass


class DepthExhausted(ElemCIError):
    """Identification ran out of recursion depth before deciding."""


class NaturalnessViolated(ElemCIError):
    pass


class TableError(ElemCIError, ValueError):
    pass


class TableMismatch(TableError):
    pass


class IncompleteDomain(TableError):
    pass


class DuplicateRow(TableError):
    pass


class NotNormalized(TableError):
    pass


class NotPositive(TableError):
    pass


class ZeroConditioner(ElemCIError):
    pass


class MissingVariable(ElemCIError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


class UnknownVariable(ElemCIError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


class ModelSyntaxError(ElemCIError, SyntaxError):
    def __init__(self, message, lineno=None):
        super().__init__(message)
        self.lineno = lineno


class CycleError(ElemCIError, ValueError):
    pass
