"""Limit ratios of multiplicative generator sets, corridor-constrained
products, the extension operator on interval unions, and simultaneous
q-difference equations ``phi(t x) = phi(x) + c(t) x**p``."""

from .errors import QExtendError
from .extend import CoverageReport, apply_e, cover, orbit_of_point
from .intervals import Interval, IntervalUnion, parse_interval, parse_union
from .reach import (
    Corridor,
    DensityVerdict,
    RatioBracket,
    ReachSet,
    density_gap,
    is_dense_evidence,
    iter_reach,
    limit_ratio,
    reach,
)
from .scales import (
    ONE,
    LatticeDesc,
    Scale,
    ScaleSet,
    as_scale,
    harmonic_family,
    lattice_detect,
    make_scale_set,
    power_shift_family,
    truncated_family,
)

__version__ = "0.1.0"

__all__ = [
    "ONE",
    "CoverageReport",
    "Corridor",
    "DensityVerdict",
    "Interval",
    "IntervalUnion",
    "LatticeDesc",
    "QExtendError",
    "RatioBracket",
    "ReachSet",
    "Scale",
    "ScaleSet",
    "apply_e",
    "as_scale",
    "cover",
    "density_gap",
    "harmonic_family",
    "is_dense_evidence",
    "iter_reach",
    "lattice_detect",
    "limit_ratio",
    "make_scale_set",
    "orbit_of_point",
    "parse_interval",
    "parse_union",
    "power_shift_family",
    "reach",
    "truncated_family",
]
