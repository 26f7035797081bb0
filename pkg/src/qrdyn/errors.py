"""Shared exception types."""


class QrdynError(Exception):
    """Base class for toolkit errors."""


class PoleAtError(QrdynError):
    """Evaluation was requested at the pole of a Blaschke factor."""


class BudgetExceededError(QrdynError):
    """A point or iteration budget ran out before the result was certified."""


class DegenerateIntervalsError(QrdynError):
    """Fixed points could not be separated at working tolerance."""


class OrbitHitOriginError(QrdynError):
    """A forward orbit reached the origin, where arg h is undefined."""


class BranchLossError(QrdynError):
    """Continuous branch tracking of a logarithm failed."""


class NonContractionError(QrdynError):
    """The conjugacy residual grew between consecutive depths."""

    def __init__(self, depth: int, previous: float, current: float):
        super().__init__(
            f"residual grew at depth {depth}: {previous:.6e} -> {current:.6e}"
        )
        self.depth = depth
        self.previous = previous
        self.current = current


class InversionFailureError(QrdynError):
    """Local inversion of the conjugacy diverged."""

    def __init__(self, last_good_r: float | None, message: str = ""):
        super().__init__(
            message or f"inversion failed; last good radius {last_good_r!r}"
        )
        self.last_good_r = last_good_r


class SingularMatrixError(QrdynError):
    """A matrix with vanishing determinant cannot represent a Moebius map."""
