"""Corridor-constrained products and the limit ratio.

``reach`` enumerates the products ``t_1 * ... * t_n`` (``t_i`` in T*) whose
every prefix stays inside a corridor ``[gamma_minus, gamma_plus]``.  Three
engines share one breadth-first contract:

* ``rational``: every element of T* is an exact rational; points are
  Fractions and corridor tests are exact.
* ``lattice``: T* sits in a certified lattice ``{t**k}``; points are the
  integer exponents ``k``, so the enumeration is still exact.
* ``float``: everything else; points are logarithms and a positive
  resolution is required.

``limit_ratio`` combines exact rules with bisection on the corridor ratio.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence, Union

import numpy as np

from .errors import BudgetExceeded, InvalidCorridor, ResolutionZeroInFloatMode
from .scales import ONE, Scale, ScaleSet, as_scale, lattice_detect, make_scale_set, scale_to_json

Number = Union[Fraction, float]

DEFAULT_POINT_BUDGET = 10**7


@dataclass(frozen=True)
class Corridor:
    gamma_minus: Scale
    gamma_plus: Scale

    def __post_init__(self) -> None:
        gm, gp = as_scale(self.gamma_minus), as_scale(self.gamma_plus)
        object.__setattr__(self, "gamma_minus", gm)
        object.__setattr__(self, "gamma_plus", gp)
        if gm > ONE or gp < ONE:
            raise InvalidCorridor(f"need gamma_minus <= 1 <= gamma_plus, got [{gm}, {gp}]")

    @classmethod
    def symmetric(cls, ratio: object) -> Corridor:
        """The corridor ``[ratio**-1/2, ratio**1/2]``."""
        rho = as_scale(ratio)
        return cls(Scale.pow(rho, Fraction(-1, 2)), Scale.pow(rho, Fraction(1, 2)))

    @property
    def ratio(self) -> Scale:
        return self.gamma_plus / self.gamma_minus

    @property
    def degenerate(self) -> bool:
        return self.gamma_minus == self.gamma_plus

    def contains(self, x: Scale) -> bool:
        return self.gamma_minus <= x <= self.gamma_plus

    def to_json(self) -> dict:
        return {"gamma_minus": scale_to_json(self.gamma_minus), "gamma_plus": scale_to_json(self.gamma_plus)}


@dataclass(frozen=True)
class ReachSet:
    """ε-representatives of the corridor products of word length ≤ ``depth``.

    ``merged`` counts candidates dropped because they fell within the
    resolution of a stored point; when it is zero in an exact mode the set is
    the exact product set.
    """

    corridor: Corridor
    depth: int
    resolution: float
    points: tuple[Scale, ...]
    first_depth: tuple[int, ...]
    saturated: bool
    mode: str
    merged: int = 0

    @property
    def exact(self) -> bool:
        return self.mode != "float" and self.merged == 0

    def __len__(self) -> int:
        return len(self.points)

    def __contains__(self, x: object) -> bool:
        return as_scale(x) in set(self.points)  # type: ignore[arg-type]

    def log_values(self) -> np.ndarray:
        return np.array([p.log_value for p in self.points])

    def to_rows(self) -> list[tuple[str, str, int]]:
        return [(str(p), repr(p.log_value), d) for p, d in zip(self.points, self.first_depth)]


# ---------------------------------------------------------------------------
# enumeration engines


def _fraction_comparator(s: Scale):
    """Return ``cmp(y)`` giving the sign of ``y - s`` for positive Fractions ``y``."""
    if s.power is not None:
        r, e = s.power
        q = e.denominator
        target = r**e.numerator
        return lambda y: (y**q > target) - (y**q < target)
    v = s.value if s.is_exact else Fraction(s.value)
    return lambda y: (y > v) - (y < v)


def _log_fraction_fast(y: Fraction) -> float:
    return math.log(y.numerator) - math.log(y.denominator)


class _RationalEngine:
    mode = "rational"

    def __init__(self, T: ScaleSet, corridor: Corridor, resolution: float, budget: int):
        self.star = [s.value for s in T.star]
        self.lo = _fraction_comparator(corridor.gamma_minus)
        self.hi = _fraction_comparator(corridor.gamma_plus)
        self.resolution = resolution
        self.budget = budget
        self.depth_of: dict[Fraction, int] = {Fraction(1): 0}
        self.sorted_logs = np.array([0.0])
        self.frontier = [Fraction(1)]
        self.merged = 0
        self._memo: dict[Fraction, Scale] = {}

    def _inside(self, y: Fraction) -> bool:
        return self.lo(y) >= 0 and self.hi(y) <= 0

    def step(self, depth: int) -> int:
        fresh: set[Fraction] = set()
        for x in self.frontier:
            for t in self.star:
                y = x * t
                if y not in self.depth_of and y not in fresh and self._inside(y):
                    fresh.add(y)
        new = sorted(fresh)
        if self.resolution > 0 and new:
            logs = np.array([_log_fraction_fast(y) for y in new])
            keep = _thin(logs, self.sorted_logs, self.resolution)
            self.merged += len(new) - int(keep.sum())
            new = [y for y, k in zip(new, keep) if k]
            self.sorted_logs = np.sort(np.concatenate([self.sorted_logs, logs[keep]]))
        for y in new:
            self.depth_of[y] = depth
        if len(self.depth_of) > self.budget:
            raise BudgetExceeded(f"{len(self.depth_of)} points exceed the budget of {self.budget}")
        self.frontier = new
        return len(new)

    def snapshot(self) -> tuple[tuple[Scale, ...], tuple[int, ...]]:
        keys = sorted(self.depth_of)
        pts = []
        for k in keys:
            s = self._memo.get(k)
            if s is None:
                s = self._memo[k] = Scale.exact(k)
            pts.append(s)
        return tuple(pts), tuple(self.depth_of[k] for k in keys)

    def gap_log(self) -> float:
        raise NotImplementedError  # pragma: no cover - density uses snapshots


def _thin(cand: np.ndarray, existing: np.ndarray, thr: float) -> np.ndarray:
    """Mask of sorted candidates farther than ``thr`` from ``existing`` and from earlier kept ones."""
    if len(cand) == 0:
        return np.zeros(0, dtype=bool)
    n = len(existing)
    idx = np.searchsorted(existing, cand)
    left = existing[np.clip(idx - 1, 0, n - 1)]
    right = existing[np.clip(idx, 0, n - 1)]
    dist = np.minimum(np.abs(cand - left), np.abs(right - cand))
    keep = dist > thr
    last = -math.inf
    for i in np.flatnonzero(keep):
        if cand[i] - last <= thr:
            keep[i] = False
        else:
            last = cand[i]
    return keep


class _ArrayEngine:
    """Shared numpy engine over sorted keys (integer exponents or float logs)."""

    def __init__(self, star_keys, lo, hi, thr: float, budget: int, dtype):
        self.star_keys = np.unique(np.asarray(star_keys, dtype=dtype))
        self.lo, self.hi, self.thr = lo, hi, thr
        self.budget = budget
        self.keys = np.zeros(1, dtype=dtype)
        self.depths = np.zeros(1, dtype=np.int64)
        self.frontier = self.keys.copy()
        self.merged = 0
        self._memo: dict = {}

    def step(self, depth: int) -> int:
        cand = (self.frontier[:, None] + self.star_keys[None, :]).ravel()
        cand = np.unique(cand[(cand >= self.lo) & (cand <= self.hi)])
        if len(cand):
            present = np.isin(cand, self.keys)
            cand = cand[~present]
        if self.thr > 0 and len(cand):
            keep = _thin(cand, self.keys, self.thr)
            self.merged += int(len(cand) - keep.sum())
            cand = cand[keep]
        if len(cand):
            allk = np.concatenate([self.keys, cand])
            alld = np.concatenate([self.depths, np.full(len(cand), depth, dtype=np.int64)])
            order = np.argsort(allk, kind="mergesort")
            self.keys, self.depths = allk[order], alld[order]
        if len(self.keys) > self.budget:
            raise BudgetExceeded(f"{len(self.keys)} points exceed the budget of {self.budget}")
        self.frontier = cand
        return len(cand)

    def _point(self, key) -> Scale:
        raise NotImplementedError

    def snapshot(self) -> tuple[tuple[Scale, ...], tuple[int, ...]]:
        pts = []
        for k in self.keys.tolist():
            s = self._memo.get(k)
            if s is None:
                s = self._memo[k] = self._point(k)
            pts.append(s)
        return tuple(pts), tuple(self.depths.tolist())


class _LatticeEngine(_ArrayEngine):
    mode = "lattice"

    def __init__(self, T: ScaleSet, corridor: Corridor, resolution: float, budget: int, base: Scale):
        self.base = base
        r, g = base.power if base.power is not None else base.symbolic
        self._r, self._g = r, g
        keys = []
        for s in T.star:
            sym = s.symbolic
            keys.append(0 if sym[1] == 0 else int(sym[1] / g))
        lo = _lattice_bound(r, g, base.log_value, corridor.gamma_minus, upper=False)
        hi = _lattice_bound(r, g, base.log_value, corridor.gamma_plus, upper=True)
        thr = resolution / base.log_value
        super().__init__(keys, lo, hi, thr, budget, np.int64)

    def _point(self, key: int) -> Scale:
        return Scale.pow(self._r, self._g * key)


def _lattice_bound(r: Fraction, g: Fraction, unit: float, bound: Scale, upper: bool) -> int:
    """Largest k with t**k <= bound (upper) or smallest k with t**k >= bound."""
    k = math.floor(bound.log_value / unit) if upper else math.ceil(bound.log_value / unit)
    tk = lambda j: Scale.pow(r, g * j)  # noqa: E731
    if upper:
        while tk(k + 1) <= bound:
            k += 1
        while tk(k) > bound:
            k -= 1
    else:
        while tk(k - 1) >= bound:
            k -= 1
        while tk(k) < bound:
            k += 1
    return k


class _FloatEngine(_ArrayEngine):
    mode = "float"
    SLACK = 1e-12

    def __init__(self, T: ScaleSet, corridor: Corridor, resolution: float, budget: int):
        lo = corridor.gamma_minus.log_value
        hi = corridor.gamma_plus.log_value
        lo -= self.SLACK * max(1.0, abs(lo))
        hi += self.SLACK * max(1.0, abs(hi))
        super().__init__([s.log_value for s in T.star], lo, hi, resolution, budget, np.float64)

    def _point(self, key: float) -> Scale:
        return Scale.from_log(key)


def engine_mode(T: ScaleSet) -> str:
    if T.is_exact:
        return "rational"
    lat = lattice_detect(T)
    if lat is not None and lat.certified:
        return "lattice"
    return "float"


def _make_engine(T: ScaleSet, corridor: Corridor, resolution: float, budget: int, mode: Optional[str]):
    mode = mode or engine_mode(T)
    if mode == "rational":
        return _RationalEngine(T, corridor, resolution, budget)
    if mode == "lattice":
        lat = lattice_detect(T)
        if lat is None or not lat.certified:
            raise ValueError("lattice mode needs a certified lattice")
        return _LatticeEngine(T, corridor, resolution, budget, lat.base)
    if resolution <= 0:
        raise ResolutionZeroInFloatMode("float mode needs a positive resolution")
    return _FloatEngine(T, corridor, resolution, budget)


def iter_reach(
    T: ScaleSet,
    corridor: Corridor,
    resolution: float = 0.0,
    point_budget: int = DEFAULT_POINT_BUDGET,
    mode: Optional[str] = None,
) -> Iterator[ReachSet]:
    """Yield the reach set after every breadth-first round.

    The last item has ``saturated=True`` when a round added nothing; the
    iterator is unbounded otherwise.
    """
    if resolution < 0:
        raise ValueError("resolution must be nonnegative")
    eng = _make_engine(T, corridor, resolution, point_budget, mode)
    depth = 0
    while True:
        added = eng.step(depth + 1)
        pts, depths = eng.snapshot()
        if added == 0:
            yield ReachSet(corridor, depth, resolution, pts, depths, True, eng.mode, eng.merged)
            return
        depth += 1
        yield ReachSet(corridor, depth, resolution, pts, depths, False, eng.mode, eng.merged)


def reach(
    T: ScaleSet,
    corridor: Corridor,
    depth: int,
    resolution: float = 0.0,
    point_budget: int = DEFAULT_POINT_BUDGET,
    mode: Optional[str] = None,
) -> ReachSet:
    """Corridor products of length ≤ ``depth`` (stopping early at saturation)."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    last = None
    it = iter_reach(T, corridor, resolution, point_budget, mode)
    for R in it:
        last = R
        if R.saturated:
            return R
        if R.depth == depth:
            break
    # one probe round decides whether depth + 1 would add anything
    try:
        probe = next(it)
    except (StopIteration, BudgetExceeded):
        return last
    if probe.saturated:
        return ReachSet(last.corridor, last.depth, last.resolution, last.points, last.first_depth, True, last.mode, last.merged)
    return last


# ---------------------------------------------------------------------------
# density


@dataclass(frozen=True)
class Gap:
    ratio: Scale
    lo: Scale
    hi: Scale

    @property
    def log(self) -> float:
        return self.ratio.log_value


def _with_endpoints(R: ReachSet) -> list[Scale]:
    pts = list(R.points)
    gm, gp = R.corridor.gamma_minus, R.corridor.gamma_plus
    if not pts or gm < pts[0]:
        pts.insert(0, gm)
    if gp > pts[-1]:
        pts.append(gp)
    return pts


def density_gap(R: ReachSet) -> Gap:
    """Largest ratio between consecutive points (corridor endpoints included).

    Ties go to the rightmost pair.  The maximum is located in floating point
    and then confirmed exactly among near-ties when the points are symbolic.
    """
    pts = _with_endpoints(R)
    if len(pts) < 2:
        return Gap(ONE, pts[0], pts[0])
    logs = np.array([p.log_value for p in pts])
    gaps = np.diff(logs)
    top = gaps.max()
    near = np.flatnonzero(gaps >= top - 1e-9 * max(1.0, abs(top)))
    best_i = int(near[-1])
    best = pts[best_i + 1] / pts[best_i]
    for i in near[::-1][1:]:
        cand = pts[i + 1] / pts[i]
        if cand > best:
            best, best_i = cand, int(i)
    return Gap(best, pts[best_i], pts[best_i + 1])


def _float_gap(R: ReachSet) -> float:
    pts = _with_endpoints(R)
    if len(pts) < 2:
        return 0.0
    return float(np.diff(np.array([p.log_value for p in pts])).max())


@dataclass(frozen=True)
class DensityVerdict:
    """Three-valued density verdict: ``dense``, ``gap`` or ``inconclusive``."""

    kind: str
    eps: float
    depth: int
    gap_ratio: float
    witness: Optional[tuple[Scale, Scale]]
    certified: bool
    evidence: str
    points: int = 0

    def to_json(self) -> dict:
        return {
            "verdict": self.kind,
            "eps": self.eps,
            "depth": self.depth,
            "gap_ratio": self.gap_ratio,
            "witness": [scale_to_json(w) for w in self.witness] if self.witness else None,
            "certified": self.certified,
            "evidence": self.evidence,
            "points": self.points,
        }


def _as_number(s: Scale) -> Number:
    return s.value if s.is_exact else float(s.value)


def is_dense_evidence(
    T: ScaleSet,
    corridor: Corridor,
    eps: float = 0.01,
    max_depth: int = 60,
    point_budget: int = 10**6,
    resolution: Optional[float] = None,
    density_factor: float = 10.0,
    boundary_tol: float = 1e-9,
    known: Optional[RatioBracket] = None,
) -> DensityVerdict:
    """Decide (with evidence) whether the corridor products look dense.

    A reach set counts as ε-dense when its largest consecutive ratio is at
    most ``1 + density_factor * eps``.  An exactly enumerated set that
    saturates is finite, which certifies a gap.  When the exact limit ratio
    is known, ratios strictly on either side of it are certified by the
    limit ratio principle and ratios within ``boundary_tol`` of it are
    reported inconclusive.
    """
    if corridor.degenerate:
        raise InvalidCorridor("density needs a nondegenerate corridor")
    bracket = known if known is not None else limit_ratio(T, bisect_steps=0)
    rho_log = corridor.ratio.log_value
    predicted = None
    if bracket.conclusive and math.isfinite(bracket.lower):
        r_log = math.log(bracket.lower)
        if abs(rho_log - r_log) <= boundary_tol * max(1.0, abs(r_log)):
            return DensityVerdict(
                "inconclusive", eps, 0, math.nan, None, False, f"ratio equals the limit ratio {bracket.lower}; open case"
            )
        predicted = "dense" if rho_log > r_log else "gap"
    elif bracket.conclusive:
        predicted = "gap"

    mode = engine_mode(T)
    if resolution is None:
        resolution = 0.0 if mode != "float" else eps / 10
    threshold = math.log1p(density_factor * eps)
    last: Optional[ReachSet] = None
    try:
        for R in iter_reach(T, corridor, resolution, point_budget, mode):
            last = R
            if R.saturated:
                break
            if _float_gap(R) <= threshold:
                g = density_gap(R)
                return _overlay(DensityVerdict(
                    "dense", eps, R.depth, float(g.ratio), (g.lo, g.hi), False,
                    f"empirical: eps-dense at depth {R.depth}", len(R),
                ), predicted, f"ratio above the limit ratio {bracket.lower}")
            if R.depth >= max_depth:
                break
    except BudgetExceeded as exc:
        depth = last.depth if last else 0
        return DensityVerdict("inconclusive", eps, depth, math.nan, None, False, f"budget exceeded: {exc}")

    assert last is not None
    g = density_gap(last)
    if last.saturated and last.exact and not T.is_family:
        return DensityVerdict(
            "gap", eps, last.depth, float(g.ratio), (g.lo, g.hi), True,
            f"finite product set: exact enumeration saturated at depth {last.depth}", len(last),
        )
    how = "saturated" if last.saturated else "persistent"
    return _overlay(DensityVerdict(
        "gap", eps, last.depth, float(g.ratio), (g.lo, g.hi), False,
        f"empirical: {how} gap at depth {last.depth}", len(last),
    ), predicted, f"ratio below the limit ratio {bracket.lower}")


def _overlay(v: DensityVerdict, predicted: Optional[str], why: str) -> DensityVerdict:
    if predicted is None:
        return v
    if predicted == v.kind:
        return DensityVerdict(v.kind, v.eps, v.depth, v.gap_ratio, v.witness, True, f"{v.evidence}; certified: {why}", v.points)
    return DensityVerdict(
        v.kind, v.eps, v.depth, v.gap_ratio, v.witness, False,
        f"{v.evidence}; note: limit ratio predicts {predicted}", v.points,
    )


# ---------------------------------------------------------------------------
# limit ratio


@dataclass(frozen=True)
class RatioBracket:
    """Certified lower bound and best upper evidence for the limit ratio.

    ``conclusive`` is set when an exact rule pins the value (then
    ``lower == upper``).  ``empirical_floor`` is the largest probed ratio
    that still showed a gap; it is evidence, not a bound.
    """

    lower: Number
    lower_tag: str
    upper: Number
    upper_tag: str
    conclusive: bool
    rule: Optional[str] = None
    empirical_floor: Optional[Number] = None
    floor_tag: Optional[str] = None
    notes: tuple[str, ...] = field(default=())

    def to_json(self) -> dict:
        return {
            "lower": _num_json(self.lower),
            "upper": _num_json(self.upper),
            "lower_tag": self.lower_tag,
            "upper_tag": self.upper_tag,
            "conclusive": self.conclusive,
            "rule": self.rule,
            "empirical_floor": None if self.empirical_floor is None else _num_json(self.empirical_floor),
            "floor_tag": self.floor_tag,
            "notes": list(self.notes),
        }


def _num_json(x: Number):
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else float(x)
    if math.isinf(x):
        return "+inf"
    return x


def number_from_json(x) -> Number:
    if x == "+inf":
        return math.inf
    return Fraction(x) if isinstance(x, int) else float(x)


def _clusters_above_one(points: Sequence[Scale], tol: float) -> list[Scale]:
    """Heuristic accumulation points among sorted points > 1.

    A run of at least three points spanning at most ``tol`` in log scale is
    a cluster; its estimate is the end towards which consecutive gaps shrink.
    """
    logs = [p.log_value for p in points]
    found = []
    i, n = 0, len(points)
    while i + 2 < n:
        j = i
        while j + 1 < n and logs[j + 1] - logs[i] <= tol:
            j += 1
        if j - i >= 2:
            first, last_gap = logs[i + 1] - logs[i], logs[j] - logs[j - 1]
            found.append(points[j] if last_gap < first else points[i])
            i = j + 1
        else:
            i += 1
    return found


def _accumulation(T: ScaleSet, tol: float) -> tuple[list[Scale], bool]:
    """Accumulation points of T* in [1, inf) and whether they were declared."""
    if T.limit_points:
        return [c for c in T.star_limit_points if c >= ONE], True
    if T.truncation is None:
        return [], True  # finite sets have no accumulation points
    above = [s for s in T.star if s > ONE]
    found: list[Scale] = []
    near_one = [s for s in above if s.log_value <= tol]
    if len(near_one) >= 3:
        found.append(ONE)
    found.extend(c for c in _clusters_above_one(above, tol) if c.log_value > tol)
    return found, False


def limit_ratio(
    T: ScaleSet,
    max_depth: int = 40,
    eps: float = 0.01,
    bisect_steps: int = 8,
    point_budget: int = 10**6,
    accumulation_tol: float = 0.05,
    rho_cap: float = 1e4,
) -> RatioBracket:
    """Bracket the limit ratio of T.

    Exact rules first: accumulation at 1 gives 1; two independent
    directions ``x, y > 1`` in T* give ``x*y``; a discrete lattice
    gives ``+inf``.  Bounds: ``inf(T* ∩ (1, inf))`` below; ``c**2`` for an
    accumulation point ``c`` and ``x*y`` for any independent pair in T*
    above.  Remaining uncertainty is narrowed by bisection on symmetric
    corridors (``bisect_steps=0`` disables it).
    """
    star = T.star
    above = [s for s in star if s > ONE]
    acc, declared = _accumulation(T, accumulation_tol)
    heur = "" if declared else " (heuristic)"

    lower_pts = above + [c for c in acc if c > ONE]
    if any(c == ONE for c in acc):
        lower, lower_tag = Fraction(1), "inf-above-one"
    elif lower_pts:
        lower, lower_tag = _as_number(min(lower_pts)), "inf-above-one"
    else:
        lower, lower_tag = math.inf, "inf-above-one"
    notes: list[str] = []

    if any(c == ONE for c in acc):
        return RatioBracket(1, "accumulation-at-one" + heur, 1, "accumulation-at-one" + heur, declared, "accumulation-at-one")

    if len(above) == 2 and not T.is_family and not acc:
        x, y = above
        lat = lattice_detect(make_scale_set([x, y]))
        if lat is None:
            val = _as_number(x * y)
            certified = x.is_symbolic and y.is_symbolic
            tag = "two-generator-irrational-log" + ("" if certified else " (heuristic)")
            return RatioBracket(val, tag, val, tag, certified, "two-generator-irrational-log")

    lat = lattice_detect(T)
    if lat is not None and not acc:
        certified = lat.certified and not T.is_family
        tag = "lattice-discrete" + ("" if certified else " (heuristic)")
        if certified:
            return RatioBracket(math.inf, tag, math.inf, tag, True, "lattice-discrete")
        notes.append("lattice structure suggests +inf")

    upper: Number = math.inf
    upper_tag = "none"
    for c in acc:
        sq = _as_number(c * c)
        if sq < upper:
            upper, upper_tag = sq, "accumulation-square" + heur
    if len(above) <= 64:
        for i, x in enumerate(above):
            if not x.is_symbolic:
                continue
            for y in above[i + 1 :]:
                if y.is_symbolic and lattice_detect(make_scale_set([x, y])) is None:
                    prod = _as_number(x * y)
                    if prod < upper:
                        upper, upper_tag = prod, "pair-subset"

    floor: Optional[Number] = None
    floor_tag = None
    if bisect_steps > 0 and lower < upper:
        upper, upper_tag, floor, floor_tag, extra = _bisect(
            T, lower, upper, upper_tag, max_depth, eps, bisect_steps, point_budget, rho_cap
        )
        notes.extend(extra)
    return RatioBracket(lower, lower_tag, upper, upper_tag, False, None, floor, floor_tag, tuple(notes))


def _probe_ratio(rho_log: float, exact: bool) -> Scale:
    if exact:
        return Scale.exact(Fraction(math.exp(rho_log)).limit_denominator(10**4))
    return Scale.from_log(rho_log)


def _bisect(T, lower, upper, upper_tag, max_depth, eps, steps, budget, rho_cap):
    exact = engine_mode(T) != "float"
    known = RatioBracket(lower, "", upper, "", False)
    notes: list[str] = []
    floor, floor_tag = None, None
    lo_log = math.log(max(float(lower), 1.0))

    def probe(rho: Scale) -> DensityVerdict:
        return is_dense_evidence(
            T, Corridor.symmetric(rho), eps=eps, max_depth=max_depth, point_budget=budget, known=known
        )

    if math.isinf(upper):
        hi_log = None
        rho_log = max(lo_log, 0.0) + math.log(4.0)
        while rho_log <= math.log(rho_cap):
            v = probe(_probe_ratio(rho_log, exact))
            if v.kind == "dense":
                hi_log = rho_log
                upper, upper_tag = _as_number(_probe_ratio(rho_log, exact)), f"empirical: eps-dense at depth {v.depth}"
                break
            if v.kind == "inconclusive":
                notes.append(v.evidence)
                return upper, upper_tag, floor, floor_tag, notes
            floor, floor_tag = _as_number(_probe_ratio(rho_log, exact)), f"empirical: gap at depth {v.depth}"
            lo_log = rho_log
            rho_log += math.log(4.0)
        if hi_log is None:
            notes.append(f"no eps-dense ratio found up to {rho_cap}")
            return upper, upper_tag, floor, floor_tag, notes
    else:
        hi_log = math.log(float(upper))

    for _ in range(steps):
        mid = 0.5 * (lo_log + hi_log)
        rho = _probe_ratio(mid, exact)
        v = probe(rho)
        if v.kind == "dense":
            hi_log = mid
            if _as_number(rho) < upper:
                upper, upper_tag = _as_number(rho), f"empirical: eps-dense at depth {v.depth}"
        elif v.kind == "gap":
            lo_log = mid
            floor, floor_tag = _as_number(rho), f"empirical: gap at depth {v.depth}"
        else:
            notes.append(v.evidence)
            break
    return upper, upper_tag, floor, floor_tag, notes
