"""Exception hierarchy shared across the package.

Everything raised on purpose derives from :class:`AiryTrainError` so callers
(and the CLI) can catch one base type. Input-validation failures in plain
dataclasses still raise ``ValueError`` directly.
"""


class AiryTrainError(Exception):
    """Base class for errors raised by this package."""


class ConfigError(AiryTrainError, ValueError):
    """Invalid, inconsistent, or unknown configuration input."""


class DesignError(AiryTrainError, ValueError):
    """A beam design cannot be synthesized as requested."""


class DegenerateGeometryError(DesignError):
    """Waypoint and target depths coincide; the closed forms divide by zero."""


class NearSingularError(DesignError):
    """Curvature magnitude is (numerically) zero; trajectory formulas blow up."""


class InfeasibleDesignError(DesignError):
    """The steering solution leaves the arcsin domain; no realizable beam."""


class SolverError(AiryTrainError, RuntimeError):
    """A numeric solver failed to bracket or converge."""
