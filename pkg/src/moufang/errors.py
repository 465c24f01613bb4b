"""Exception types shared across the package.

Kept dependency-free so both jet backends can raise them.
"""


class DomainError(ValueError):
    """Base for all evaluation-domain violations."""


class JetDomainError(DomainError):
    """A smooth primitive was evaluated outside its domain (e.g. sqrt(x), x <= 0)."""


class ChartDomainError(DomainError):
    """A point lies outside the chart a loop is defined on."""


class ChartExitError(ChartDomainError):
    """A product left the chart (real component of the embedded product <= 0)."""


class LoopSpecError(ValueError):
    """Malformed or unknown loop-spec string."""


class CalibrationError(RuntimeError):
    """Sign calibration found zero or multiple passing assignments."""

    def __init__(self, message, table=None):
        super().__init__(message)
        self.table = table if table is not None else []
