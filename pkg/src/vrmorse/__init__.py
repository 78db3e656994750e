"""Discrete Morse theory for Vietoris-Rips complexes of finite metric spaces."""

__version__ = "0.1.0"

from .complex import Simplex, VRComplex, attachment_order, enumerate_simplices, make_simplex, simplex_diameter
from .criteria import (
    Status,
    criterion_range_scan,
    link_criterion,
    pinched_strong_link_criterion,
    strong_link_criterion_at_scale,
)
from .errors import BudgetExceeded
from .homology import BettiVector, ExplicitComplex, betti_numbers, boundary_matrix, is_acyclic
from .metric import (
    FiniteMetricSpace,
    circle,
    diameter_spectrum,
    lattice_box,
    point_cloud,
    sphere,
    sphere_poles_equator,
    validate_metric,
)
from .morse import LinkKind, classify_descending_link, descending_link, verify_attachment_property
from .persistence import betti_profile, cross_validate, persistence_intervals

__all__ = [
    "BettiVector",
    "BudgetExceeded",
    "ExplicitComplex",
    "FiniteMetricSpace",
    "LinkKind",
    "Simplex",
    "Status",
    "VRComplex",
    "attachment_order",
    "betti_numbers",
    "betti_profile",
    "boundary_matrix",
    "circle",
    "classify_descending_link",
    "criterion_range_scan",
    "cross_validate",
    "descending_link",
    "diameter_spectrum",
    "enumerate_simplices",
    "is_acyclic",
    "lattice_box",
    "link_criterion",
    "make_simplex",
    "persistence_intervals",
    "pinched_strong_link_criterion",
    "point_cloud",
    "simplex_diameter",
    "sphere",
    "sphere_poles_equator",
    "strong_link_criterion_at_scale",
    "validate_metric",
    "verify_attachment_property",
]
