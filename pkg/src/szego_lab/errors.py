"""Exception hierarchy shared by all modules."""


class PreconditionError(ValueError):
    """An input violates an operation's documented precondition."""


class NumericalError(ArithmeticError):
    """A computation failed numerically (non-convergence, singular matrix, ...)."""


class ModelValidityError(NumericalError):
    """A Fefferman model left the collar where its numerator stays positive."""
