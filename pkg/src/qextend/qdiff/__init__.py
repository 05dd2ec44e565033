"""Simultaneous q-difference equations ``phi(t x) = phi(x) + c(t) x**p``."""

from .bumps import SHAPES, BumpFunction, BumpSolution, BumpSpec, bump, build_bump_solution, support_orbit
from .cocycle import Cocycle, PowerForm, eval_power_form, extend_cocycle, fit_power_form, tpow, zero_cocycle
from .expr import Expression, parse_expression
from .grid import (
    GridFunction,
    ResidualReport,
    geometric_grid,
    lattice_grid,
    residual,
    restricted_domain,
    uniform_grid,
)
from .propagate import PropagationResult, affine_map, expression_map, propagate

__all__ = [
    "SHAPES",
    "BumpFunction",
    "BumpSolution",
    "BumpSpec",
    "Cocycle",
    "Expression",
    "GridFunction",
    "PowerForm",
    "PropagationResult",
    "ResidualReport",
    "affine_map",
    "build_bump_solution",
    "bump",
    "eval_power_form",
    "expression_map",
    "extend_cocycle",
    "fit_power_form",
    "geometric_grid",
    "lattice_grid",
    "parse_expression",
    "propagate",
    "residual",
    "restricted_domain",
    "support_orbit",
    "tpow",
    "uniform_grid",
    "zero_cocycle",
]
