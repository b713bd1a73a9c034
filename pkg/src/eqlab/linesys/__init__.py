"""Equiangular line systems: container, constructions, bounds, incoherent sets."""

from .bounds import BoundsReport, bounds_report
from .constructions import (
    ConstructionError,
    DegenerateAngle,
    NegativeDelta1,
    ParameterMismatch,
    augment_all_ones,
    construct_augmented,
    construct_omega,
    hexagon_lines,
    icosahedron_lines,
    sts15_plus_one,
)
from .incoherent import (
    GammaPartition,
    IncoherenceError,
    IncoherentDesign,
    IncoherentWitness,
    NotMaximal,
    NoWitness,
    Verdict,
    find_max_incoherent,
    foursum_check,
    gamma_partition,
    incoherent_design,
    is_incoherent,
    setsum_checks,
    taylor_intersection_check,
    taylor_size_check,
    taylor_vector_check,
)
from .spherical import SphericalReport, spherical_design_check
from .system import (
    LineSystem,
    LineSystemError,
    LineSystemFormatError,
    NotEquiangular,
    dump,
    from_json,
    load,
    to_json,
)

__all__ = [name for name in dir() if not name.startswith("_")]
