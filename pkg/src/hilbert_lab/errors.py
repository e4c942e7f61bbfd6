"""Exception hierarchy shared by all hilbert_lab modules."""


class HilbertLabError(Exception):
    """Base class; ``code`` is echoed in the CLI's structured error JSON."""

    code = "error"


class PointNotInterior(HilbertLabError):
    code = "point_not_interior"


class DegenerateDirection(HilbertLabError):
    code = "degenerate_direction"


class DegenerateBody(HilbertLabError):
    code = "degenerate_body"


class OriginNotInterior(HilbertLabError):
    code = "origin_not_interior"


class ImageUnbounded(HilbertLabError):
    code = "image_unbounded"


class BodyFormatError(HilbertLabError):
    code = "body_format"


class HyperplaneMissesBody(HilbertLabError):
    code = "hyperplane_misses_body"


class ParameterOutOfRange(HilbertLabError):
    code = "parameter_out_of_range"


class NegativeRadius(HilbertLabError):
    code = "negative_radius"


class DimensionUnsupported(HilbertLabError):
    code = "dimension_unsupported"


class BodyNotSmooth(HilbertLabError):
    code = "body_not_smooth"


class WindowTooSmall(HilbertLabError):
    code = "window_too_small"


class NonpositiveVolume(HilbertLabError):
    code = "nonpositive_volume"


class ScheduleTooShort(HilbertLabError):
    code = "schedule_too_short"


class BudgetExceeded(HilbertLabError):
    code = "budget_exceeded"


class RadiusTooSmall(HilbertLabError):
    code = "radius_too_small"


class ResolutionInsufficient(HilbertLabError):
    code = "resolution_insufficient"
