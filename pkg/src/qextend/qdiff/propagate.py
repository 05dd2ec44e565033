"""Breadth-first propagation of values along in-I orbits.

Given ``phi`` on a seed grid and maps ``g_t`` with ``phi(t x) = g_t(x, phi(x))``,
values spread to every point ``t x`` that stays inside I.  A point reached
along two different words keeps its first value; the disagreement is the
diagnostic.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Optional, Union

from ..errors import DepthZeroNoWork, SeedEmpty, UNotSubsetOfI
from ..extend import _single, star_numbers
from ..intervals import Interval, IntervalUnion, Number
from ..scales import ScaleSet
from .cocycle import Cocycle, Real, _real_json, tpow
from .expr import Expression
from .grid import GridFunction, word_text

GMap = Callable[[Number, Number, Real], Real]


def affine_map(c: Cocycle) -> GMap:
    """``g_t(x, y) = y + c(t) x**p``, exact for exact inputs."""
    by_number = {(t.value if t.is_exact else float(t)): v for t, v in c.values.items()}

    def g(t: Number, x: Number, y: Real) -> Real:
        v = by_number[t]
        return y if v == 0 else y + v * tpow(x, c.p)

    return g


def expression_map(text: str, params: Optional[Mapping[str, object]] = None) -> GMap:
    """``g_t`` from an expression in ``x``, ``y`` and ``t``."""
    e = Expression(text, params)
    return lambda t, x, y: e(t=t, x=x, y=y)


@dataclass(frozen=True)
class PropagationResult:
    grid: GridFunction
    max_discrepancy: float
    witness: Optional[tuple[Number, str, str]]
    collisions: int
    rounds: int

    def to_json(self) -> dict:
        w = None
        if self.witness is not None:
            x, kept, other = self.witness
            w = {"x": _real_json(x), "kept": kept, "conflicting": other}
        return {
            "points": len(self.grid),
            "max_discrepancy": self.max_discrepancy,
            "witness": w,
            "collisions": self.collisions,
            "rounds": self.rounds,
            "spread": self.grid.spread(),
        }


def _key(x: Number) -> Number:
    if isinstance(x, Fraction):
        return x
    return float(f"{x:.12g}")


def propagate(
    seed: GridFunction,
    g: Union[GMap, Cocycle],
    T: ScaleSet,
    I: Union[Interval, IntervalUnion],
    depth: int,
) -> PropagationResult:
    """Spread ``seed`` through I for ``depth`` rounds (deterministic BFS)."""
    if len(seed) == 0:
        raise SeedEmpty("the seed grid has no samples")
    I = _single(I)
    if not all(x in I for x in seed.xs):
        raise UNotSubsetOfI("seed points must lie in I")
    gmap = affine_map(g) if isinstance(g, Cocycle) else g
    stars = [t for t in star_numbers(T) if t != 1]
    exact = T.is_exact and all(isinstance(x, Fraction) for x in seed.xs)
    if not exact:
        stars = [float(t) for t in stars]
    if depth <= 0:
        warnings.warn("propagation depth is 0; returning the seed", DepthZeroNoWork, stacklevel=2)
        return PropagationResult(seed, 0.0, None, 0, 0)

    vals: dict[Number, Real] = {}
    where: dict[Number, Number] = {}
    prov: dict[Number, str] = {}
    for x, v in zip(seed.xs, seed.values):
        k = x if exact else _key(float(x))
        if k not in vals:
            vals[k], where[k], prov[k] = v, x if exact else float(x), "seed"
    worst, witness, collisions = 0.0, None, 0
    frontier = sorted(vals)
    rounds = 0
    for _ in range(depth):
        nxt = []
        for k in frontier:
            x, y, w = where[k], vals[k], prov[k]
            for t in stars:
                z = x * t
                if z not in I:
                    continue
                v = gmap(t, x, y)
                zk = z if exact else _key(z)
                label = _extend_word(w, t)
                if zk in vals:
                    collisions += 1
                    d = float(abs(v - vals[zk]))
                    if d > worst or (math.isnan(d) and not math.isnan(worst)):
                        worst, witness = d, (where[zk], prov[zk], label)
                else:
                    vals[zk], where[zk], prov[zk] = v, z, label
                    nxt.append(zk)
        rounds += 1
        if not nxt:
            break
        frontier = sorted(nxt)
    keys = sorted(vals, key=lambda k: where[k])
    grid = GridFunction(
        IntervalUnion.of(I),
        tuple(where[k] for k in keys),
        tuple(vals[k] for k in keys),
        tuple(prov[k] for k in keys),
    )
    return PropagationResult(grid, worst, witness, collisions, rounds)


def _extend_word(prov: str, t: Number) -> str:
    if prov == "seed":
        return f"propagated({word_text([t])})"
    return prov[:-1] + "·" + word_text([t]) + ")"
