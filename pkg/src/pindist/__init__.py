"""Pinned algebraic distances for Cartesian products over prime fields."""

from .errors import CapExceeded, InvariantViolation
from .field import (
    PrimeModulus,
    as_modulus,
    is_isotropic_direction,
    is_prime,
    legendre_symbol,
    sqrt_minus_one,
    sqrt_mod,
)
from .geometry import (
    DistanceHistogram,
    Line2,
    PointSet2,
    algebraic_distance,
    best_pin,
    bisector_line,
    distance_histogram,
    distance_set,
    guaranteed_pin,
    isosceles_count,
    isosceles_count_bruteforce,
    isotropic_line_points,
    isotropic_lines_through_origin,
    pin_statistics,
    pinned_distance_set,
)
from .incidence import (
    IncidenceInstance,
    Plane,
    build_instance,
    build_plane_set,
    build_point_set,
    canonical_line,
    count_incidences_bucketed,
    count_incidences_naive,
    degenerate_case_count,
    export_instance,
    import_instance,
    max_collinear,
    restricted_isosceles_count,
    rudnev_ratio,
)
from .experiments import (
    CaseReport,
    Caps,
    GenSpec,
    SweepConfig,
    SweepResult,
    exhaustive_verify,
    format_csv,
    generate_set,
    run_case,
    run_sweep,
)

__version__ = "0.1.0"
