"""Exception and warning types shared across the package."""


class KGFlowError(Exception):
    """Base class for library-specific errors."""


class SubThresholdError(KGFlowError):
    """Frequency at or below the rest mass: no propagating incident wave."""


class SingularSystemError(KGFlowError):
    """Boundary-matching system is degenerate (e.g. band edge k2 = 0)."""


class NoBracketError(KGFlowError):
    """Potential bracket does not straddle the requested reflection value."""

    def __init__(self, message, absr_lo=None, absr_hi=None):
        super().__init__(message)
        self.absr_lo = absr_lo
        self.absr_hi = absr_hi


class NodeError(KGFlowError):
    """Polar decomposition requested at (or too close to) a field node."""


class DegenerateError(KGFlowError):
    """Analytic eigenvector construction undefined (P.S ~ 0); use the numeric path."""


class NodeApproachError(KGFlowError):
    """Trajectory driven into a node by a velocity law that diverges there.

    Carries the partial trajectory integrated up to the last good grid point.
    """

    def __init__(self, message, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory


class CausalityViolationError(KGFlowError):
    """A boosted eigenvector-law world line produced a chord speed >= 1.

    Must never fire; acts as a covariance regression tripwire.
    """


class BothNullWarning(UserWarning):
    """Both stress-tensor eigenvectors are null (measure-zero configuration)."""


class StagnationNotice(UserWarning):
    """Sustained near-zero velocity; the trajectory is effectively at rest."""
