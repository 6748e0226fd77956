"""Exception types raised by the spectral engine."""


class SpectralError(Exception):
    """Base class for every error raised by this package."""


class InvalidSpecError(SpectralError, ValueError):
    pass


class SeriesCapacityError(SpectralError, ValueError):
    pass


class BranchCutError(SpectralError, ValueError):
    pass


class DivergenceError(SpectralError, ValueError):
    """Raised for quantities that are infinite for the requested degree (K for m = 2)."""


class SectorError(SpectralError, ValueError):
    pass


class PropagationError(SpectralError, RuntimeError):
    """Integration along a ray failed.

    ``k`` names the rotated solution f_k when the failure happened inside
    :func:`pt_spectral.integrator.origin_data`.
    """

    def __init__(self, message, radius=None, k=None):
        super().__init__(message)
        self.radius = radius
        self.k = k


class StiffnessError(PropagationError):
    pass


class MaxStepsError(PropagationError):
    pass


class DegeneracyError(SpectralError, RuntimeError):
    pass


class EvaluationError(SpectralError, RuntimeError):
    pass


class PoleError(SpectralError, ValueError):
    pass
