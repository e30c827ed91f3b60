"""Exception hierarchy shared by every module."""


class ShiftEquivError(ValueError):
    """Base class for all errors raised by :mod:`shiftequiv`."""


class DimensionMismatch(ShiftEquivError):
    pass


class NotSquare(ShiftEquivError):
    pass


class LabelCollision(ShiftEquivError):
    pass


class NonComposableFactors(ShiftEquivError):
    pass


class BlockMismatch(ShiftEquivError):
    """Some (source, range) block has different sizes in domain and codomain."""


class SpecMismatch(ShiftEquivError):
    pass


class ShapeMismatch(ShiftEquivError):
    pass


class NotElementary(ShiftEquivError):
    pass


class InvalidUnderlyingSE(ShiftEquivError):
    pass


class InvalidWitness(ShiftEquivError):
    pass


class MiddleMismatch(ShiftEquivError):
    pass


class BrokenChain(ShiftEquivError):
    pass


class TypeCheckFailure(ShiftEquivError):
    """An internal composition did not type-check. Always a bug."""


class BudgetExceeded(ShiftEquivError):
    def __init__(self, message, nodes=0):
        super().__init__(message)
        self.nodes = nodes


class NotAlternating(ShiftEquivError):
    pass


class OddLength(ShiftEquivError):
    pass


class InsufficientDepth(ShiftEquivError):
    pass


class SchemaError(ShiftEquivError):
    """Malformed JSON payload. ``field`` names the offending location."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
