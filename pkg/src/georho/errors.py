"""Exception types raised across the package."""


class GeoRhoError(ValueError):
    """Base class for every error raised by georho."""


class InvalidParameters(GeoRhoError):
    pass


class OutsideDomain(GeoRhoError):
    """A coordinate lies on or beyond the horizon |x| = R."""


class ForbiddenEnergy(GeoRhoError):
    """E < m: no classical motion and no physical state."""


class OpenMotion(GeoRhoError):
    """Energy at or above the lambda > 0 threshold: motion is not oscillatory."""


class HorizonApproach(GeoRhoError):
    """Numerical trajectory came within the guard band of the horizon."""


class IntegrationFailure(GeoRhoError):
    pass


class NotNormalizable(GeoRhoError):
    pass


class SeriesNotConverged(GeoRhoError):
    pass


class GridTooCoarse(GeoRhoError):
    pass


class QuadratureNotConverged(GeoRhoError):
    pass


class BelowContinuum(GeoRhoError):
    """Continuum state requested at or below the lambda > 0 threshold."""
