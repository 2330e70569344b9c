"""Exact Chow-ring presentations and invariants of quiver moduli spaces."""

from .chow import Presentation, build_presentation, integrate, normal_form, point_class, tangent_chern, todd_class
from .errors import AssumptionViolation, QuiverChowError, StructuralError
from .invariants import InvariantReport, invariant_report, kronecker_report, orbit_consistency
from .polyring import Layout, Poly, TruncatedClass
from .quiver import (
    Quiver,
    canonical_stability,
    duality_periodicity_orbit,
    euler_form,
    expected_dimension,
    forbidden_vectors,
    is_coprime,
    kronecker,
    normalization,
)

__version__ = "0.1.0"

__all__ = [
    "AssumptionViolation",
    "InvariantReport",
    "Layout",
    "Poly",
    "Presentation",
    "Quiver",
    "QuiverChowError",
    "StructuralError",
    "TruncatedClass",
    "build_presentation",
    "canonical_stability",
    "duality_periodicity_orbit",
    "euler_form",
    "expected_dimension",
    "forbidden_vectors",
    "integrate",
    "invariant_report",
    "is_coprime",
    "kronecker",
    "kronecker_report",
    "normal_form",
    "normalization",
    "orbit_consistency",
    "point_class",
    "tangent_chern",
    "todd_class",
]
