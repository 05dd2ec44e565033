"""Finite unions of intervals of positive reals with exact endpoint flags.

Endpoints are plain numbers: ``Fraction`` when exact, ``float`` otherwise,
and ``math.inf`` for an unbounded right end.  All set algebra on Fractions
is exact.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .scales import Scale, as_scale, scale_from_json, scale_to_json

Number = Union[Fraction, float]


def as_number(x: object) -> Number:
    """Coerce to a Fraction when exact, a float otherwise."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return Fraction(x)
    s = as_scale(x)
    return s.value if s.is_exact else float(s.value)


def _log(x: Number) -> float:
    if isinstance(x, Fraction):
        return math.log(x.numerator) - math.log(x.denominator)
    return math.log(x)


@dataclass(frozen=True)
class Interval:
    lo: Number
    hi: Number
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self) -> None:
        lo, hi = as_number(self.lo), (self.hi if self.hi == math.inf else as_number(self.hi))
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if not lo > 0:
            raise ValueError(f"interval endpoints must be positive, got {lo}")
        if lo > hi or (lo == hi and not (self.lo_closed and self.hi_closed)):
            raise ValueError(f"empty interval {self}")
        if hi == math.inf and self.hi_closed:
            object.__setattr__(self, "hi_closed", False)

    @staticmethod
    def make(lo, hi, lo_closed=True, hi_closed=True) -> Optional[Interval]:
        """Like the constructor, but return None for an empty interval."""
        if lo > hi or (lo == hi and not (lo_closed and hi_closed)):
            return None
        return Interval(lo, hi, lo_closed, hi_closed)

    @property
    def degenerate(self) -> bool:
        return self.lo == self.hi

    def __contains__(self, x: object) -> bool:
        x = as_number(x)
        if x < self.lo or (x == self.lo and not self.lo_closed):
            return False
        return x < self.hi or (x == self.hi and self.hi_closed)

    def scale(self, t: Number) -> Interval:
        return Interval(self.lo * t, self.hi * t if self.hi != math.inf else math.inf, self.lo_closed, self.hi_closed)

    def intersect(self, other: Interval) -> Optional[Interval]:
        if self.lo > other.lo or (self.lo == other.lo and not self.lo_closed):
            lo, lc = self.lo, self.lo_closed
        else:
            lo, lc = other.lo, other.lo_closed
        if self.hi < other.hi or (self.hi == other.hi and not self.hi_closed):
            hi, hc = self.hi, self.hi_closed
        else:
            hi, hc = other.hi, other.hi_closed
        return Interval.make(lo, hi, lc, hc)

    def issubset(self, other: Interval) -> bool:
        return self.intersect(other) == self

    def log_length(self) -> float:
        return _log(self.hi) - _log(self.lo) if self.hi != math.inf else math.inf

    @property
    def ratio(self) -> Number:
        return self.hi / self.lo

    def __str__(self) -> str:
        return f"{'[' if self.lo_closed else '('}{_fmt(self.lo)}, {_fmt(self.hi)}{']' if self.hi_closed else ')'}"

    def to_json(self) -> dict:
        return {
            "lo": _endpoint_json(self.lo),
            "hi": _endpoint_json(self.hi),
            "lo_closed": self.lo_closed,
            "hi_closed": self.hi_closed,
        }

    @classmethod
    def from_json(cls, d: dict) -> Interval:
        return cls(_endpoint_from_json(d["lo"]), _endpoint_from_json(d["hi"]), bool(d["lo_closed"]), bool(d["hi_closed"]))


def _fmt(x: Number) -> str:
    return str(x) if isinstance(x, Fraction) else repr(x)


def _endpoint_json(x: Number):
    if x == math.inf:
        return {"float": "inf"}
    return scale_to_json(Scale.exact(x) if isinstance(x, Fraction) else Scale.real(x))


def _endpoint_from_json(d) -> Number:
    if isinstance(d, dict) and d.get("float") in ("inf", "+inf"):
        return math.inf
    return as_number(scale_from_json(d))


def _lo_key(iv: Interval):
    return (iv.lo, not iv.lo_closed)


def _joins(a: Interval, b: Interval, snap: float) -> bool:
    """Whether ``b`` (with ``b.lo >= a.lo``) overlaps or touches ``a``."""
    if b.lo < a.hi:
        return True
    if b.lo == a.hi:
        return a.hi_closed or b.lo_closed
    return snap > 0 and _log(b.lo) - _log(a.hi) <= snap


def _canonical(pieces: Iterable[Interval], snap: float = 0.0) -> tuple[Interval, ...]:
    out: list[Interval] = []
    for iv in sorted(pieces, key=_lo_key):
        if out and _joins(out[-1], iv, snap):
            cur = out[-1]
            if iv.hi > cur.hi:
                hi, hc = iv.hi, iv.hi_closed
            elif iv.hi == cur.hi:
                hi, hc = cur.hi, cur.hi_closed or iv.hi_closed
            else:
                hi, hc = cur.hi, cur.hi_closed
            out[-1] = Interval(cur.lo, hi, cur.lo_closed, hc)
        else:
            out.append(iv)
    return tuple(out)


@dataclass(frozen=True)
class IntervalUnion:
    """Canonical union: sorted, pairwise disjoint, non-touching pieces."""

    pieces: tuple[Interval, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "pieces", _canonical(self.pieces))

    @classmethod
    def of(cls, *pieces: Interval, snap: float = 0.0) -> IntervalUnion:
        u = cls.__new__(cls)
        object.__setattr__(u, "pieces", _canonical(pieces, snap))
        return u

    @classmethod
    def from_pieces(cls, pieces: Iterable[Interval], snap: float = 0.0) -> IntervalUnion:
        return cls.of(*pieces, snap=snap)

    @classmethod
    def points(cls, xs: Iterable[object]) -> IntervalUnion:
        return cls.of(*(Interval(as_number(x), as_number(x)) for x in xs))

    def __bool__(self) -> bool:
        return bool(self.pieces)

    def __len__(self) -> int:
        return len(self.pieces)

    def __iter__(self):
        return iter(self.pieces)

    def __contains__(self, x: object) -> bool:
        return any(x in p for p in self.pieces)

    @property
    def inf(self) -> Number:
        return self.pieces[0].lo

    @property
    def sup(self) -> Number:
        return self.pieces[-1].hi

    @property
    def hull(self) -> Interval:
        a, b = self.pieces[0], self.pieces[-1]
        return Interval(a.lo, b.hi, a.lo_closed, b.hi_closed)

    def union(self, other: IntervalUnion, snap: float = 0.0) -> IntervalUnion:
        return IntervalUnion.of(*self.pieces, *other.pieces, snap=snap)

    def scale(self, t: Number) -> IntervalUnion:
        return IntervalUnion.of(*(p.scale(t) for p in self.pieces))

    def intersect(self, other: Union[IntervalUnion, Interval]) -> IntervalUnion:
        others = (other,) if isinstance(other, Interval) else other.pieces
        out = []
        for a in self.pieces:
            for b in others:
                c = a.intersect(b)
                if c is not None:
                    out.append(c)
        return IntervalUnion.of(*out)

    def difference(self, other: IntervalUnion) -> IntervalUnion:
        """``self`` minus ``other``."""
        out = []
        for a in self.pieces:
            rest = [a]
            for b in other.pieces:
                nxt = []
                for r in rest:
                    nxt.extend(_subtract(r, b))
                rest = nxt
            out.extend(rest)
        return IntervalUnion.of(*out)

    def issubset(self, other: Union[IntervalUnion, Interval]) -> bool:
        return self.intersect(other) == self

    def log_length(self) -> float:
        return sum(p.log_length() for p in self.pieces)

    def __str__(self) -> str:
        return " ∪ ".join(str(p) for p in self.pieces) if self.pieces else "∅"

    def to_json(self) -> list:
        return [p.to_json() for p in self.pieces]

    @classmethod
    def from_json(cls, data: Sequence[dict]) -> IntervalUnion:
        return cls.of(*(Interval.from_json(d) for d in data))

    def close_to(self, other: IntervalUnion, tol: float) -> bool:
        """Piecewise equality up to ``tol`` in log scale (flags must match)."""
        if len(self.pieces) != len(other.pieces):
            return False
        for a, b in zip(self.pieces, other.pieces):
            if (a.lo_closed, a.hi_closed) != (b.lo_closed, b.hi_closed):
                return False
            if abs(_log(a.lo) - _log(b.lo)) > tol or abs(_log(a.hi) - _log(b.hi)) > tol:
                return False
        return True


def _subtract(a: Interval, b: Interval) -> list[Interval]:
    if a.intersect(b) is None:
        return [a]
    out = []
    for part in (
        Interval.make(a.lo, b.lo, a.lo_closed, not b.lo_closed),
        Interval.make(b.hi, a.hi, not b.hi_closed, a.hi_closed),
    ):
        if part is not None:
            part = part.intersect(a)
            if part is not None:
                out.append(part)
    return out


_IV_RE = re.compile(r"^\s*([\[(])\s*([^,]+?)\s*,\s*([^,]+?)\s*([\])])\s*$")


def parse_interval(text: str) -> Interval:
    """Parse ``"[1/2, 5/2]"``, ``"(1, 8)"`` and the like; ``{a}`` is a point."""
    text = text.strip()
    if text.startswith("{") and text.endswith("}"):
        x = as_number(text[1:-1].strip())
        return Interval(x, x)
    m = _IV_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse interval {text!r}")
    lo = as_number(m.group(2))
    hi_txt = m.group(3)
    hi = math.inf if hi_txt in ("inf", "+inf") else as_number(hi_txt)
    return Interval(lo, hi, m.group(1) == "[", m.group(4) == "]")


def parse_union(obj) -> IntervalUnion:
    """Accept a string (pieces joined by ``U``), a JSON list, or an Interval."""
    if isinstance(obj, IntervalUnion):
        return obj
    if isinstance(obj, Interval):
        return IntervalUnion.of(obj)
    if isinstance(obj, str):
        parts = [p for p in re.split(r"\s*(?:∪|\bU\b|\|)\s*", obj) if p.strip()]
        return IntervalUnion.of(*(parse_interval(p) for p in parts))
    if isinstance(obj, dict):
        return IntervalUnion.of(Interval.from_json(obj))
    return IntervalUnion.of(*(parse_interval(p) if isinstance(p, str) else Interval.from_json(p) for p in obj))
