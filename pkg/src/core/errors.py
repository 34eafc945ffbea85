# src/core/errors.py
"""
Exception hierarchy for catsim.

Every error raised on purpose by the library derives from CatsimError so the
CLI can map it to an exit status; the subclasses name the guard that failed.
"""


class CatsimError(Exception):
    pass


class LeakageError(CatsimError):
    """Population reached the top of a truncated Fock space."""

    def __init__(self, quantity: str, value: float, dimension: int, detail: str = ""):
        self.quantity = quantity
        self.value = value
        self.dimension = dimension
        msg = f"Leakage guard failed for {quantity}: {value:.6g} at Fock dimension {dimension}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class DomainError(CatsimError):
    pass


class DegenerateBranchError(CatsimError):
    def __init__(self, branch: str, probability: float):
        self.branch = branch
        self.probability = probability
        super().__init__(
            f"Branch '{branch}' has probability {probability:.3e}; the conditional state is undefined"
        )


class DimensionMismatchError(CatsimError):
    pass


class IntegrationError(CatsimError):
    """Master-equation solver failure; `trajectory` holds the samples reached."""

    def __init__(self, message: str, trajectory=None):
        self.trajectory = trajectory
        super().__init__(message)


class ConfigError(CatsimError):
    pass


class ToleranceError(CatsimError):
    """A self-check exceeded its tolerance; `result` keeps the collected checks."""

    def __init__(self, message: str, result=None):
        self.result = result
        super().__init__(message)
