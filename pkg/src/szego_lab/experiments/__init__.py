"""Closed geodesics, boundary repulsion, asymptotic rates and spiral classification."""

from .classify import Classification, SectionCrossing, classify_geodesic, section_crossings
from .rates import RateFit, rate_fit
from .repulsion import (RepulsionEntry, RepulsionReport, boundary_repulsion_scan,
                        empirical_epsilon, tangent_basis, tangential_directions,
                        tangential_second_derivative)
from .shortening import (LoopPath, ShorteningResult, birkhoff_shorten, circle_geodesic_radius,
                         circle_length, closure_defect, ellipse_loop, random_loop, winding_number)

__all__ = [
    "Classification", "SectionCrossing", "classify_geodesic", "section_crossings",
    "RateFit", "rate_fit",
    "RepulsionEntry", "RepulsionReport", "boundary_repulsion_scan", "empirical_epsilon",
    "tangent_basis", "tangential_directions", "tangential_second_derivative",
    "LoopPath", "ShorteningResult", "birkhoff_shorten", "circle_geodesic_radius",
    "circle_length", "closure_defect", "ellipse_loop", "random_loop", "winding_number",
]
