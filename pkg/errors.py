"""
Exception hierarchy shared by every package
"""


class GsModacError(Exception):
    """Base class for all library errors"""


class ConfigError(GsModacError):
    """Invalid experiment or environment configuration"""

    def __init__(self, problems):
        """
        Args:
            problems: One message or a list of per-field messages ("field: reason")
        """
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class InstanceError(GsModacError):
    """Malformed instance file or invalid generation parameters"""


class InfeasibleSolutionError(GsModacError):
    """A decoded solution violates a problem constraint"""

    def __init__(self, constraint: str, detail: str):
        self.constraint = constraint
        self.detail = detail
        super().__init__(f"{constraint} violated: {detail}")


class DimensionError(GsModacError, ValueError):
    """Objective vectors of mismatched length"""


class CheckpointError(GsModacError):
    """Unreadable, truncated or incompatible policy checkpoint"""


class StaleCacheError(GsModacError):
    """Backward pass requested with a cache from an older parameter version"""


class EnvironmentStateError(GsModacError):
    """Episode environment used out of order"""


class TrainingError(GsModacError):
    """Numerical failure during a policy update"""
