"""The extension operator ``e(A) = (T*·A) ∩ I`` and coverage by its iterates."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .errors import AnotSubsetOfI, BudgetExceeded, UNotNontrivial, UNotSubsetOfI, XNotInI
from .intervals import Interval, IntervalUnion, Number, as_number, parse_union
from .reach import RatioBracket, _num_json, limit_ratio
from .scales import ScaleSet

DEFAULT_PIECE_BUDGET = 10**5
FLOAT_SNAP = 1e-12


def star_numbers(T: ScaleSet) -> list[Number]:
    """T* as plain numbers (Fractions when every element is rational)."""
    if T.is_exact:
        return [s.value for s in T.star]
    return [float(s) for s in T.star]


def _single(I: Union[Interval, IntervalUnion, str]) -> Interval:
    if isinstance(I, Interval):
        iv = I
    else:
        u = parse_union(I)
        if len(u) != 1:
            raise ValueError("I must be a single interval")
        iv = u.pieces[0]
    if iv.degenerate:
        raise ValueError("I must be nondegenerate")
    return iv


def apply_e(
    A: IntervalUnion,
    T: ScaleSet,
    I: Union[Interval, IntervalUnion],
    piece_budget: int = DEFAULT_PIECE_BUDGET,
) -> IntervalUnion:
    """One application of the extension operator."""
    I = _single(I)
    A = parse_union(A)
    if not A.issubset(I):
        raise AnotSubsetOfI(f"{A} is not contained in {I}")
    stars = star_numbers(T)
    snap = 0.0 if T.is_exact else FLOAT_SNAP
    out = []
    for t in stars:
        for p in A.pieces:
            q = p.scale(t).intersect(I)
            if q is not None:
                out.append(q)
    res = IntervalUnion.of(*out, snap=snap)
    if len(res) > piece_budget:
        raise BudgetExceeded(f"{len(res)} pieces exceed the piece budget {piece_budget}")
    return res


@dataclass(frozen=True)
class RatioCondition:
    """How ``sup I / inf I`` compares with the limit-ratio bracket."""

    ratio: Number
    bracket: RatioBracket
    prediction: str

    def to_json(self) -> dict:
        return {"ratio": _num_json(self.ratio), "bracket": self.bracket.to_json(), "prediction": self.prediction}


def ratio_condition(I: Interval, T: ScaleSet, bracket: Optional[RatioBracket] = None) -> RatioCondition:
    bracket = bracket if bracket is not None else limit_ratio(T, bisect_steps=0)
    ratio = I.ratio
    if ratio > bracket.upper:
        pred = "full coverage (ratio above the limit ratio)"
        if not bracket.conclusive and not bracket.upper_tag.startswith(("pair-subset", "accumulation-square")):
            pred += "; upper bound is empirical"
    elif ratio < bracket.lower:
        pred = "no prediction (ratio below the limit ratio)"
    elif bracket.conclusive and ratio == bracket.lower:
        pred = "no prediction (ratio equals the limit ratio)"
    else:
        pred = "undetermined (ratio inside the bracket)"
    return RatioCondition(ratio, bracket, pred)


@dataclass(frozen=True)
class CoverageReport:
    covered: IntervalUnion
    uncovered: IntervalUnion
    rounds_used: int
    converged: bool
    ratio_condition: RatioCondition
    history: tuple[float, ...] = ()
    eps: float = 0.01

    @property
    def uncovered_log_length(self) -> float:
        return self.uncovered.log_length()

    @property
    def covered_within_eps(self) -> bool:
        return self.uncovered_log_length <= self.eps

    def to_json(self) -> dict:
        return {
            "covered": self.covered.to_json(),
            "uncovered": self.uncovered.to_json(),
            "uncovered_log_length": self.uncovered_log_length,
            "rounds_used": self.rounds_used,
            "converged": self.converged,
            "covered_within_eps": self.covered_within_eps,
            "eps": self.eps,
            "history": list(self.history),
            "ratio_condition": self.ratio_condition.to_json(),
        }


def cover(
    U: IntervalUnion,
    T: ScaleSet,
    I: Union[Interval, IntervalUnion],
    max_rounds: int = 40,
    eps: float = 0.01,
    piece_budget: int = DEFAULT_PIECE_BUDGET,
    bracket: Optional[RatioBracket] = None,
) -> CoverageReport:
    """Iterate ``apply_e`` from U until a fixpoint or ``max_rounds``.

    ``rounds_used`` counts the rounds that changed the set; ``converged``
    means a further round changed nothing.  ``history`` records the
    uncovered log-length after each round.
    """
    I = _single(I)
    U = parse_union(U)
    if not U or U.log_length() <= 0:
        raise UNotNontrivial("U must have positive length")
    if not U.issubset(I):
        raise UNotSubsetOfI(f"{U} is not contained in {I}")
    whole = IntervalUnion.of(I)
    cond = ratio_condition(I, T, bracket)
    A = U
    history = [whole.difference(A).log_length()]
    rounds, converged = 0, False
    for _ in range(max_rounds + 1):
        if A == whole:
            converged = True
            break
        if rounds == max_rounds:
            break
        B = apply_e(A, T, I, piece_budget)
        same = B == A if T.is_exact else B.close_to(A, FLOAT_SNAP)
        if same:
            converged = True
            break
        A = B
        rounds += 1
        history.append(whole.difference(A).log_length())
    return CoverageReport(A, whole.difference(A), rounds, converged, cond, tuple(history), eps)


def iterate_e(U: IntervalUnion, T: ScaleSet, I, rounds: int) -> IntervalUnion:
    """``e`` applied ``rounds`` times (no fixpoint shortcut)."""
    A = parse_union(U)
    for _ in range(rounds):
        A = apply_e(A, T, I)
    return A


def orbit_words(x: object, T: ScaleSet, I: Union[Interval, IntervalUnion], depth: int) -> dict:
    """Map each orbit point to the first (breadth-first) word reaching it.

    Words are tuples of T* elements; every intermediate product stays in I.
    """
    I = _single(I)
    x = as_number(x)
    if x not in I:
        raise XNotInI(f"{x} is not in {I}")
    stars = [t for t in star_numbers(T) if t != 1]
    if not isinstance(x, Fraction) or not T.is_exact:
        x = float(x)
        stars = [float(t) for t in stars]
    words = {x: ()}
    frontier = [x]
    for _ in range(depth):
        nxt = []
        for y in frontier:
            w = words[y]
            for t in stars:
                z = y * t
                if z not in words and z in I:
                    words[z] = w + (t,)
                    nxt.append(z)
        if not nxt:
            break
        frontier = sorted(nxt)
    return words


def orbit_of_point(x: object, T: ScaleSet, I: Union[Interval, IntervalUnion], depth: int) -> tuple[Number, ...]:
    """Sorted points ``t_1···t_k·x`` (k ≤ depth) with all partial products in I."""
    return tuple(sorted(orbit_words(x, T, I, depth)))


def uncovered_rows(report: CoverageReport) -> list[tuple[str, str, bool, bool, float]]:
    rows = []
    for p in report.uncovered:
        rows.append((_s(p.lo), _s(p.hi), p.lo_closed, p.hi_closed, p.log_length()))
    return rows


def _s(x: Number) -> str:
    if isinstance(x, Fraction):
        return str(x)
    return "+inf" if x == math.inf else repr(x)
