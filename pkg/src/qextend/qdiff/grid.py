"""Sampled functions and residuals of ``phi(t x) = phi(x) + c(t) x**p``."""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence, Union

from ..errors import NoTestablePairs
from ..extend import _single, orbit_words, star_numbers
from ..intervals import Interval, IntervalUnion, Number, as_number
from ..scales import Scale, ScaleSet
from .cocycle import Cocycle, Real, _real_json

SNAP_RTOL = 1e-12


def _fmt(x: Number) -> str:
    return str(x) if isinstance(x, Fraction) else repr(x)


def word_text(word: Sequence[Number]) -> str:
    return "·".join(_fmt(t) for t in word)


@dataclass(frozen=True)
class GridFunction:
    """Samples ``x -> value`` on a sorted grid, with per-sample provenance.

    Provenance is ``"seed"`` or ``"propagated(w)"`` for a word ``w`` over T*.
    """

    domain: IntervalUnion
    xs: tuple[Number, ...]
    values: tuple[Real, ...]
    provenance: tuple[str, ...]

    def __post_init__(self) -> None:
        if not (len(self.xs) == len(self.values) == len(self.provenance)):
            raise ValueError("xs, values and provenance must have equal length")
        if any(b <= a for a, b in zip(self.xs, self.xs[1:])):
            raise ValueError("grid points must be strictly increasing")

    @classmethod
    def sample(cls, f: Callable[[Number], Real], xs: Iterable[object], domain=None) -> GridFunction:
        pts = sorted({as_number(x) for x in xs})
        dom = domain if domain is not None else (IntervalUnion.points(pts) if pts else IntervalUnion())
        if isinstance(dom, Interval):
            dom = IntervalUnion.of(dom)
        return cls(dom, tuple(pts), tuple(f(x) for x in pts), tuple("seed" for _ in pts))

    def __len__(self) -> int:
        return len(self.xs)

    def index(self, x: Number, rtol: float = SNAP_RTOL) -> Optional[int]:
        """Index of the grid point within ``rtol`` (relative) of x."""
        i = bisect.bisect_left(self.xs, x)
        best = None
        for j in (i - 1, i):
            if 0 <= j < len(self.xs):
                d = abs(self.xs[j] - x)
                if d == 0:
                    return j
                if d <= rtol * abs(x) and (best is None or d < abs(self.xs[best] - x)):
                    best = j
        return best

    def value_at(self, x: Number) -> Optional[Real]:
        i = self.index(x)
        return None if i is None else self.values[i]

    def spread(self) -> float:
        if not self.values:
            return 0.0
        return float(max(self.values) - min(self.values))

    def to_rows(self) -> list[tuple[str, str, str]]:
        return [(_fmt(x), _fmt(v), p) for x, v, p in zip(self.xs, self.values, self.provenance)]


def restricted_domain(t: Union[Scale, Number], I: Interval) -> Optional[Interval]:
    """``I ∩ t**-1 I``: where the equation for ``t`` is postulated."""
    if isinstance(t, Scale):
        tv = t.value if t.is_exact else float(t)
    else:
        tv = as_number(t)
    return I.intersect(I.scale(1 / tv))


def geometric_grid(I: Interval, n: int) -> list[float]:
    """n points, equally spaced in log scale across I (endpoints as allowed)."""
    a, b = math.log(I.lo), math.log(I.hi)
    ks = range(n) if (I.lo_closed and I.hi_closed) else range(1, n + 1)
    m = (n - 1) if (I.lo_closed and I.hi_closed) else (n + 1)
    return [math.exp(a + (b - a) * k / m) for k in ks]


def uniform_grid(I: Interval, n: int) -> list[Number]:
    """n equally spaced points of I; exact for rational endpoints.

    Open ends are avoided by dropping them from an ``n + 1`` (or ``n + 2``)
    point partition.
    """
    if I.degenerate:
        return [I.lo]
    lo_in, hi_in = I.lo_closed, I.hi_closed
    m = n - 1 + (not lo_in) + (not hi_in)
    start = 0 if lo_in else 1
    step = (I.hi - I.lo) / m
    return [I.lo + step * (start + k) for k in range(n)]


def lattice_grid(I: Interval, T: ScaleSet, seeds: Iterable[object], depth: int) -> list[Number]:
    """Union of the in-I orbits of ``seeds``: a grid mapped into itself by T*."""
    pts: set[Number] = set()
    for s in seeds:
        pts.update(orbit_words(s, T, I, depth))
    return sorted(pts)


@dataclass(frozen=True)
class ResidualReport:
    max_residual: Real
    witness: Optional[tuple[Number, Number]]
    pairs_tested: int
    domains: tuple[tuple[Number, Optional[Interval], int], ...]

    def to_json(self) -> dict:
        return {
            "max_residual": float(self.max_residual),
            "witness": None if self.witness is None else {"t": _real_json(self.witness[0]), "x": _real_json(self.witness[1])},
            "pairs_tested": self.pairs_tested,
            "domains": [
                {"t": _real_json(t), "domain": None if d is None else d.to_json(), "pairs": n}
                for t, d, n in self.domains
            ],
        }


def _gen_numbers(T: ScaleSet) -> list[tuple[Scale, Number]]:
    stars = dict(zip(T.star, star_numbers(T)))
    return [(g, stars[g]) for g in T.generators]


def residual(
    phi: Union[GridFunction, Callable[[Number], Real]],
    T: ScaleSet,
    c: Cocycle,
    I: Union[Interval, IntervalUnion],
    samples: int = 10**4,
) -> ResidualReport:
    """Largest ``|phi(t x) - phi(x) - c(t) x**p|`` over testable pairs.

    Only ``x`` in ``I ∩ t**-1 I`` counts.  For a :class:`GridFunction`, ``t x``
    is matched to a grid point within ``1e-12`` relative; for a callable,
    ``samples`` equally spaced points of each restricted domain are used.
    """
    I = _single(I)
    worst: Real = -1
    witness = None
    total = 0
    domains = []
    for g, t in _gen_numbers(T):
        D = restricted_domain(t, I)
        count = 0
        if D is not None:
            if isinstance(phi, GridFunction):
                pairs = []
                for i, x in enumerate(phi.xs):
                    if x in D:
                        j = phi.index(x * t)
                        if j is not None:
                            pairs.append((x, phi.values[i], phi.values[j]))
            else:
                pairs = [(x, phi(x), phi(x * t)) for x in uniform_grid(D, samples)]
            for x, fx, ftx in pairs:
                r = abs(ftx - fx - c.term(g, x))
                count += 1
                if r > worst:
                    worst, witness = r, (t, x)
        domains.append((t, D, count))
        total += count
    if total == 0:
        raise NoTestablePairs("no grid point x has t*x on the grid inside I")
    return ResidualReport(worst, witness, total, tuple(domains))
