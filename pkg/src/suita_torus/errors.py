"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class ConvergenceError(ArithmeticError):
    """A truncated product or series did not reach its tolerance."""


class PoleError(ValueError):
    """Evaluation point coincides (to the pole guard) with a logarithmic pole.

    ``pole`` names the offending pole, e.g. ``"w"`` or ``"u"``.
    """

    def __init__(self, message, pole=None):
        super().__init__(message)
        self.pole = pole
