import logging

logger = logging.getLogger("cheshire.errors")


class SimulationError(Exception):
    """Base error for a run that cannot produce a report.

    ``exit_code`` is what the command line returns when this error reaches it.
    """

    exit_code = 4

    def __init__(self, detail: str, exit_code: int | None = None):
        super().__init__(detail)
        self.detail = detail
        if exit_code is not None:
            self.exit_code = exit_code


class PostSelectionFailed(SimulationError):
    """The post-selected branch has (numerically) zero probability."""

    exit_code = 2

    def __init__(self, detail: str, probabilities: dict[str, float] | None = None):
        super().__init__(detail)
        self.probabilities = probabilities or {}

    def __str__(self):
        if not self.probabilities:
            return self.detail
        seen = ", ".join(f"{k}={v:.3e}" for k, v in self.probabilities.items())
        return f"{self.detail} ({seen})"


class ModelValidityError(SimulationError):
    """Parameters leave the regime where the box model holds."""

    exit_code = 3


class ModeOverflowError(SimulationError):
    """Amplitude would escape past the last recorded Out mode."""


class NormalizationError(SimulationError):
    """An expectation value was requested on a packet that is not unit norm."""


class DimensionMismatch(SimulationError):
    pass
