"""Shared exception types."""


class NumericalError(RuntimeError):
    """An eigensolve, optimization, or certified bound failed its contract."""


class ConfigError(ValueError):
    """Experiment configuration failed validation.

    Carries the full list of violations so callers can report all of them
    at once instead of stopping at the first.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))
