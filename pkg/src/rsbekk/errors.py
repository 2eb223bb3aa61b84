"""Exception types shared across the package."""


class RsbekkError(Exception):
    """Base class for all package-specific errors."""


class SeriesError(RsbekkError, ValueError):
    """Raised when a return series fails validation."""


class DataError(RsbekkError, ValueError):
    """Raised for malformed input files or degenerate data."""


class CovarianceError(RsbekkError, ValueError):
    """Raised when a covariance matrix violates positivity requirements."""


class NearSingularError(CovarianceError):
    """Conditional covariance became numerically singular during filtering.

    Carries the period index (and regime, when applicable) where the
    recursion broke down.
    """

    def __init__(self, t: int, state: int | None = None, det: float | None = None):
        self.t = t
        self.state = state
        self.det = det
        where = f"t={t}" if state is None else f"t={t}, state={state}"
        msg = f"near-singular conditional covariance at {where}"
        if det is not None:
            msg += f" (det={det:.3e})"
        super().__init__(msg)


class DegenerateLikelihoodError(RsbekkError, ValueError):
    """Mixture likelihood lost all mass (every state density is zero)."""


class EstimationError(RsbekkError, RuntimeError):
    """Raised when estimation cannot produce a usable result."""


class SingularInformationError(EstimationError):
    """Hessian or outer-product matrix is not invertible at the optimum."""

    def __init__(self, msg: str, eigenvalues=None):
        self.eigenvalues = eigenvalues
        super().__init__(msg)


class DegenerateDummyError(RsbekkError, ValueError):
    """High-volatility dummy is constant, so its coefficients are unidentified."""
