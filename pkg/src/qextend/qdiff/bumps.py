"""Nonconstant solutions of ``phi(t x) = phi(x)`` built from bump functions.

A bump on ``(alpha, beta)`` is ``Q(x) = s((beta - x) / (beta - alpha))`` for a
profile ``s`` on [0, 1] vanishing at both ends, and satisfies
``Q_{alpha,beta}(c x) = Q_{alpha/c, beta/c}(x)``.  Summing the bumps over
the whole in-I orbit of one support gives a solution, provided the copies
never partially overlap.
"""

from __future__ import annotations

import bisect
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

from ..errors import OrbitNotClosed, OrbitOverlap, RatioTooLarge, UNotSubsetOfI
from ..extend import _single, star_numbers
from ..intervals import Interval, IntervalUnion, Number, as_number
from ..reach import RatioBracket, limit_ratio
from ..scales import ScaleSet
from .cocycle import Real, zero_cocycle
from .grid import ResidualReport, residual

ZIGZAG_TERMS = 24


def _hat(u):
    return 1 - abs(2 * u - 1)


def _parabola(u):
    return 4 * u * (1 - u)


def _cosine(u):
    return math.sin(math.pi * float(u)) ** 2


def _zigzag(u):
    # partial sum of the Takagi function: sum_k dist(2^k u, Z) / 2^k
    total = 0
    scale = 1
    v = u
    for _ in range(ZIGZAG_TERMS):
        frac = v - math.floor(v)
        total += min(frac, 1 - frac) / scale
        v *= 2
        scale *= 2
    return total


SHAPES: dict[str, Callable] = {
    "hat": _hat,
    "triangle": _hat,
    "parabola": _parabola,
    "cosine": _cosine,
    "zigzag": _zigzag,
}


@dataclass(frozen=True)
class BumpSpec:
    """A profile name and one or more base supports ``(alpha, beta)``."""

    supports: tuple[tuple[Number, Number], ...]
    shape: str = "parabola"

    def __post_init__(self) -> None:
        if self.shape not in SHAPES:
            raise ValueError(f"unknown shape {self.shape!r}; choose from {', '.join(sorted(SHAPES))}")
        sup = tuple((as_number(a), as_number(b)) for a, b in self.supports)
        for a, b in sup:
            if a > b:
                raise ValueError(f"support ({a}, {b}) has alpha > beta")
        object.__setattr__(self, "supports", sup)

    @property
    def profile(self) -> Callable:
        return SHAPES[self.shape]


def bump(alpha: Number, beta: Number, shape: Callable) -> Callable[[Number], Real]:
    """``Q_{alpha,beta}``: ``shape((beta - x) / (beta - alpha))`` on the open support."""

    def Q(x):
        if alpha < x < beta:
            return shape((beta - x) / (beta - alpha))
        return 0

    return Q


class BumpFunction:
    """Sum of bumps over disjoint open supports; evaluation is exact for rationals."""

    def __init__(self, supports: Sequence[tuple[Number, Number]], shape: Callable):
        self.supports = tuple(sorted(supports))
        self.shape = shape
        self._los = [a for a, _ in self.supports]

    def __call__(self, x: Number) -> Real:
        i = bisect.bisect_right(self._los, x) - 1
        if i >= 0:
            a, b = self.supports[i]
            if a < x < b:
                return self.shape((b - x) / (b - a))
        return Fraction(0) if isinstance(x, Fraction) else 0.0

    @property
    def support(self) -> IntervalUnion:
        return IntervalUnion.of(*(Interval(a, b, False, False) for a, b in self.supports))


@dataclass(frozen=True)
class BumpSolution:
    phi: BumpFunction
    supports: tuple[tuple[Number, Number], ...]
    residual: Optional[ResidualReport]
    ratio: Number
    bracket: RatioBracket
    notes: tuple[str, ...] = field(default=())

    @property
    def support(self) -> IntervalUnion:
        return self.phi.support


def _meets(a: Number, b: Number, I: Interval) -> bool:
    """Whether the open interval (a, b) meets I."""
    if b < I.lo or a > I.hi:
        return False
    if b == I.lo or a == I.hi:
        return False
    return True


def support_orbit(I: Interval, T: ScaleSet, base: tuple[Number, Number], depth: int) -> list[tuple[Number, Number]]:
    """Copies ``(t a, t b)`` reachable from ``base`` whose open interiors meet I.

    Raises OrbitOverlap for two partially overlapping copies and
    OrbitNotClosed when new copies still appear after ``depth`` rounds.
    """
    stars = [t for t in star_numbers(T) if t != 1]
    a0, b0 = base
    if not T.is_exact or not isinstance(a0, Fraction):
        stars = [float(t) for t in stars]
        base = (float(a0), float(b0))
    seen = {base}
    frontier = [base]
    for _ in range(depth):
        nxt = []
        for a, b in frontier:
            for t in stars:
                cpy = (a * t, b * t)
                if cpy not in seen and _meets(*cpy, I):
                    seen.add(cpy)
                    nxt.append(cpy)
        frontier = sorted(nxt)
        _check_disjoint(sorted(seen))
        if not frontier:
            break
    else:
        if frontier and any(
            (a * t, b * t) not in seen and _meets(a * t, b * t, I) for a, b in frontier for t in stars
        ):
            raise OrbitNotClosed(f"the support orbit is still growing after {depth} rounds")
    return sorted(seen)


def _check_disjoint(copies: Sequence[tuple[Number, Number]]) -> None:
    for (a1, b1), (a2, b2) in zip(copies, copies[1:]):
        if a2 < b1:
            raise OrbitOverlap(f"copies ({a1}, {b1}) and ({a2}, {b2}) overlap")


def build_bump_solution(
    I: Union[Interval, IntervalUnion],
    T: ScaleSet,
    spec: BumpSpec,
    depth: int = 8,
    check_samples: int = 10**4,
    bracket: Optional[RatioBracket] = None,
) -> BumpSolution:
    """Sum of bumps over the orbit of the base support(s), verified to solve c ≡ 0."""
    I = _single(I)
    bracket = bracket if bracket is not None else limit_ratio(T, bisect_steps=0)
    ratio = I.ratio
    notes = []
    if not ratio < bracket.lower:
        msg = (
            f"sup I / inf I = {ratio} is not below the limit ratio bound {bracket.lower}; "
            "continuous solutions may be forced constant"
        )
        warnings.warn(msg, RatioTooLarge, stacklevel=2)
        notes.append(msg)
    copies: set[tuple[Number, Number]] = set()
    for a, b in spec.supports:
        if a == b:
            continue
        if not (a in I or a == I.lo) or not (b in I or b == I.hi):
            raise UNotSubsetOfI(f"base support ({a}, {b}) is not inside {I}")
        copies.update(support_orbit(I, T, (a, b), depth))
    ordered = sorted(copies)
    _check_disjoint(ordered)
    phi = BumpFunction(ordered, spec.profile)
    report = None
    if check_samples > 0:
        report = residual(phi, T, zero_cocycle(T), I, samples=check_samples)
        if report.max_residual > 1e-12:
            raise RuntimeError(f"bump construction failed verification: residual {report.max_residual}")
    return BumpSolution(phi, tuple(ordered), report, ratio, bracket, tuple(notes))
