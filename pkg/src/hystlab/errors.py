"""Exception types shared across the package."""
from __future__ import annotations


class HystlabError(Exception):
    """Base class for all package errors."""


class InvalidParametersError(HystlabError):
    """Parameter set violates a structural requirement (e.g. positivity of S)."""


class NoFoldError(HystlabError):
    """The kinetic nullcline u = Psi(v) is monotone; no hysteresis branches exist."""


class BranchDomainError(HystlabError):
    """Requested a branch value outside its u-domain."""

    def __init__(self, message: str, nearest_fold: float | None = None):
        super().__init__(message)
        self.nearest_fold = nearest_fold


class DegenerateEquilibriaError(HystlabError):
    """Two positive equilibria coalesce; the parameter set sits on a tangency."""


class IncompleteManifoldError(HystlabError):
    """Stable-manifold integration exhausted its budget before reaching an axis."""

    def __init__(self, message: str, partial_polyline=None):
        super().__init__(message)
        self.partial_polyline = partial_polyline


class InfeasibleSlopeError(HystlabError):
    """Shooting slope m lies outside its admissible open interval."""


class QuadratureError(HystlabError):
    """A quadrature failed to reach the requested tolerance."""

    def __init__(self, message: str, achieved: float | None = None):
        super().__init__(message)
        self.achieved = achieved


class NoBalancedAmplitudeError(HystlabError):
    """The two layer potentials never coincide on the admissible interval."""


class BlowUpError(HystlabError):
    """A simulation produced non-finite values; carries the last finite state."""

    def __init__(self, message: str, last_state=None):
        super().__init__(message)
        self.last_state = last_state


class InvalidIntegrandError(HystlabError):
    """A singular-integrand hypothesis (sign or degeneracy condition) fails."""


class ConfigError(HystlabError):
    """Experiment configuration could not be parsed or validated."""
