"""Exact counting of ordinary and (d+2)-point hyperspheres.

A hypersphere-or-hyperplane through exactly d+1 points of a finite set in
R^d (no d+1 of which lie on a common (d-2)-sphere or (d-2)-flat) is called
ordinary; one through exactly d+2 points is a (d+2)-point hypersphere.
This package counts both exactly, generates the extremal configurations
that attain the known closed-form bounds, and cross-checks every count
three ways: geometric enumeration, residue-class arithmetic on curve
cosets, and closed-form quasipolynomial tables.
"""

from .constructions import (
    CosetSpec,
    CurveParams,
    closed_form_counts,
    compare_report,
    completing_parameter,
    completion_residual,
    coset_config,
    curve_point,
    residue_oracle,
    residue_oracle_scan,
    trivial_config,
)
from .counting import (
    Spectrum,
    count_dplus2,
    count_ordinary,
    ordinary_hyperplane_spectrum,
    spectrum,
    spectrum_by_hashing,
    verify_correspondence,
)
from .geometry import (
    Hypersphere,
    PointSet,
    cospherical,
    general_position_check,
    hypersphere_through,
    incident,
    invert,
    invert_set,
    lift,
    lift_set,
    project,
)
from .scalars import (
    INDETERMINATE,
    CyclotomicContext,
    CycloElement,
    IntervalScalar,
    context_for_order,
    get_context,
    is_zero,
    sign_of,
    trig_pair,
)

__version__ = "0.1.0"

__all__ = [
    "CosetSpec",
    "CurveParams",
    "CyclotomicContext",
    "CycloElement",
    "Hypersphere",
    "INDETERMINATE",
    "IntervalScalar",
    "PointSet",
    "Spectrum",
    "closed_form_counts",
    "compare_report",
    "completing_parameter",
    "completion_residual",
    "context_for_order",
    "coset_config",
    "cospherical",
    "count_dplus2",
    "count_ordinary",
    "curve_point",
    "general_position_check",
    "get_context",
    "hypersphere_through",
    "incident",
    "invert",
    "invert_set",
    "is_zero",
    "lift",
    "lift_set",
    "ordinary_hyperplane_spectrum",
    "project",
    "residue_oracle",
    "residue_oracle_scan",
    "sign_of",
    "spectrum",
    "spectrum_by_hashing",
    "trig_pair",
    "trivial_config",
    "verify_correspondence",
]
