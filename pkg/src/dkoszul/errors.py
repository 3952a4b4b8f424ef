"""Exception types shared across the engine."""


class BudgetError(RuntimeError):
    """A computation needed graded data beyond a stored truncation bound."""

    def __init__(self, message: str, degree=None):
        super().__init__(message)
        self.degree = degree


class AlgebraError(ValueError):
    """Invalid presentation or structure constants."""


class ModuleError(ValueError):
    """Invalid graded module data or an ill-posed module operation."""
