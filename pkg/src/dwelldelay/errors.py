"""Exception types shared across the package."""


class NumericalError(ArithmeticError):
    """A computation hit a numerical condition it cannot resolve.

    ``energy`` records the offending point when one is known.
    """

    def __init__(self, message, energy=None):
        super().__init__(message)
        self.energy = energy


class PoleError(NumericalError):
    """Evaluation landed on an S-matrix pole or zero."""
