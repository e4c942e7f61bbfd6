"""Numerical toolkit for volume entropy and polytope approximability of Hilbert geometries."""

__version__ = "0.1.0"

from .bodies import (
    ConvexBody,
    Ellipsoid,
    HPolytope,
    RadialBody,
    VPolytope,
    cube,
    hausdorff_distance,
    lowner_normalize,
    polar_dual,
    regular_polygon,
)
from .errors import HilbertLabError
from .hilbert import (
    HilbertGeometry,
    Hyperplane,
    asymptotic_ball,
    ball_radial_extent,
    distance,
    finsler_norm,
    metric_projection,
)
from .measures import DensityKind, QuadratureConfig, ball_volume, ball_volumes, sphere_area
from .growth import GrowthCurve, entropy_estimate, growth_curve
from .approx import approximability_estimate, greedy_vertex_insertion, tangent_polygon_2d
from .nets import DiscreteSet, critical_exponent_estimate, separated_net_on_sphere

__all__ = [
    "ConvexBody", "Ellipsoid", "HPolytope", "RadialBody", "VPolytope", "cube", "hausdorff_distance",
    "lowner_normalize", "polar_dual", "regular_polygon", "HilbertLabError", "HilbertGeometry", "Hyperplane",
    "asymptotic_ball", "ball_radial_extent", "distance", "finsler_norm", "metric_projection", "DensityKind",
    "QuadratureConfig", "ball_volume", "ball_volumes", "sphere_area", "GrowthCurve", "entropy_estimate",
    "growth_curve", "approximability_estimate", "greedy_vertex_insertion", "tangent_polygon_2d", "DiscreteSet",
    "critical_exponent_estimate", "separated_net_on_sphere",
]
