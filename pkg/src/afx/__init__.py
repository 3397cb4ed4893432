"""Exact mixed volumes, Alexandrov-Fenchel extremals and poset sequences."""

from .criticality import CriticalityClass, CriticalityReport, classify, degenerate_pair_test
from .errors import InputError, InvariantViolation
from .extremals import extremal_space, extremality_test, local_af_extension
from .mixedvol import (
    SupportDifference,
    mixed_area_measure,
    mixed_volume,
    mixed_volume_in_subspace,
    positivity,
)
from .polytope import VPolytope, box, convex_hull, cube, minkowski_sum, segment, volume
from .ratgeo import ScaledRational, Subspace
from .stanley import Poset, parse_poset, rank_sequence

__all__ = [
    "CriticalityClass",
    "CriticalityReport",
    "InputError",
    "InvariantViolation",
    "Poset",
    "ScaledRational",
    "Subspace",
    "SupportDifference",
    "VPolytope",
    "box",
    "classify",
    "convex_hull",
    "cube",
    "degenerate_pair_test",
    "extremal_space",
    "extremality_test",
    "local_af_extension",
    "minkowski_sum",
    "mixed_area_measure",
    "mixed_volume",
    "mixed_volume_in_subspace",
    "parse_poset",
    "positivity",
    "rank_sequence",
    "segment",
    "volume",
]
