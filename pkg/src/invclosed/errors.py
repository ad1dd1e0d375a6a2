"""Exception types shared across the package."""


class FieldMismatchError(TypeError):
    """Operands belong to different fields."""


class BudgetExceeded(RuntimeError):
    """A scan or enumeration would exceed its configured size budget."""


class PreconditionError(ValueError):
    """An operation was called on input outside its documented domain."""


class DegenerateInput(PreconditionError):
    """Hua's identity is undefined for the given pair (some inverse is missing)."""


class TheoremViolation(AssertionError):
    """An inverse-closed subgroup did not classify as a subfield or trace-zero kernel.

    Carries a JSON-ready ``detail`` dict describing the offending subgroup.
    """

    def __init__(self, message, detail=None):
        super().__init__(message)
        self.detail = detail or {}
