"""Exception hierarchy for geosubdiv.

Two branches matter for callers: :class:`ValidationError` covers bad input
(rejected before any geometry runs), :class:`GeometryError` covers failures
while evaluating geodesics or means on otherwise valid input. The CLI maps
them to exit codes 2 and 3 respectively.
"""


class GeoSubdivError(Exception):
    """Base class for all geosubdiv errors."""


class ValidationError(GeoSubdivError):
    """Input rejected before evaluation."""


class InvalidPointError(ValidationError):
    """Coordinates do not describe a valid point on the requested manifold."""


class ManifoldMismatchError(ValidationError):
    """Operation mixed points from different manifolds."""


class MaskRowSumError(ValidationError):
    """Mask even/odd coefficient sums differ from one."""


class UnknownSchemeError(ValidationError):
    """Requested scheme name is not in the catalog."""


class OmegaOutOfRangeError(ValidationError):
    """Tension parameter outside the range that guarantees contraction."""


class CurveTooShortError(ValidationError):
    """Curve has too few points for the requested operation."""


class CurveFileError(ValidationError):
    """Curve file is malformed.

    ``point_index`` names the first offending point when the failure is a
    per-point validation error, else it is None.
    """

    def __init__(self, message, point_index=None):
        super().__init__(message)
        self.point_index = point_index


class NonSymmetricWeightsError(ValidationError):
    """Weights passed to the symmetric mean are not palindromic."""


class ParameterOutOfRangeError(ValidationError):
    """Curve parameter outside the range covered by a clamped curve."""


class GeometryError(GeoSubdivError):
    """Failure while evaluating geometry on valid input."""


class AntipodalPointsError(GeometryError):
    """Endpoints (nearly) antipodal: no unique minimal geodesic."""


class ExtrapolationOutOfRangeError(GeometryError):
    """Extrapolated geodesic would leave the unique-geodesic range."""


class TangentTooLongError(GeometryError):
    """Tangent vector longer than the exponential map's injective range."""


class DegenerateNormalizerError(GeometryError):
    """A partial weight sum in the inductive mean is too close to zero."""


class RefinementError(GeometryError):
    """Geometry failure while evaluating a refinement rule.

    Carries the phase ('even' or 'odd') and the rule index so callers can
    report where in the curve the failure happened.
    """

    def __init__(self, message, phase, index):
        super().__init__(message)
        self.phase = phase
        self.index = index


class NoConvergenceError(GeometryError):
    """Fixed-point iteration did not reach tolerance within max_iter."""

    def __init__(self, message, max_iter):
        super().__init__(message)
        self.max_iter = max_iter
