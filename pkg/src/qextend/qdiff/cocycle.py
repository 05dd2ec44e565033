"""Cocycles ``c: T* -> R`` and the power-form solution families.

A solution of ``phi(t x) = phi(x) + c(t) x**p`` for every ``t`` in T also
solves it for ``t**-1`` once ``c(t**-1) = -t**-p c(t)`` and ``c(1) = 0``;
these values are forced, and contradictory data means no solution exists.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Union

from ..errors import InconsistentAtOne, InconsistentInverse
from ..intervals import Interval
from ..scales import ONE, Scale, ScaleSet, as_scale, scale_from_json, scale_to_json

Real = Union[Fraction, float]

CONSISTENCY_RTOL = 1e-12
FIT_TOL = 1e-9


def as_real(x: object) -> Real:
    """Ints and Fractions stay exact; everything else becomes a float."""
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x)
        except ValueError:
            return float(x)
    return float(x)  # type: ignore[arg-type]


def tpow(t: Union[Scale, Real], p: Real) -> Real:
    """``t**p``, exact for a rational ``t`` and an integer ``p``."""
    if isinstance(t, Scale):
        if t.is_exact and isinstance(p, Fraction) and p.denominator == 1:
            return t.value ** int(p)
        return math.exp(float(p) * t.log_value)
    if isinstance(t, Fraction) and isinstance(p, Fraction) and p.denominator == 1:
        return t ** int(p)
    return float(t) ** float(p)


def _close(a: Real, b: Real, rtol: float = CONSISTENCY_RTOL) -> bool:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    return abs(a - b) <= rtol * max(1.0, abs(a), abs(b))


@dataclass(frozen=True)
class Cocycle:
    p: Real
    values: Mapping[Scale, Real]
    origin: Mapping[Scale, str]

    def __call__(self, t: object) -> Real:
        return self.values[as_scale(t)]

    def __iter__(self):
        return iter(sorted(self.values))

    @property
    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values.values())

    def term(self, t: Scale, x: Real) -> Real:
        """``c(t) * x**p``."""
        c = self.values[t]
        if c == 0:
            return Fraction(0) if isinstance(c, Fraction) else 0.0
        return c * tpow(x, self.p)

    def to_json(self) -> dict:
        return {
            "p": _real_json(self.p),
            "values": [
                {"t": scale_to_json(t), "c": _real_json(self.values[t]), "origin": self.origin[t]}
                for t in sorted(self.values)
            ],
        }

    @classmethod
    def from_json(cls, d: Mapping) -> Cocycle:
        vals, orig = {}, {}
        for e in d["values"]:
            t = scale_from_json(e["t"])
            vals[t] = as_real(e["c"])
            orig[t] = e.get("origin", "given")
        return cls(as_real(d["p"]), vals, orig)


def _real_json(x: Real):
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else float(x)
    return x


def zero_cocycle(T: ScaleSet, p: object = 0) -> Cocycle:
    return extend_cocycle(T, {g: Fraction(0) for g in T.generators}, p)


def extend_cocycle(T: ScaleSet, c_given: Mapping[object, object], p: object) -> Cocycle:
    """Extend ``c`` from T to T* (``c(1) = 0``, ``c(1/t) = -t**-p c(t)``)."""
    p = as_real(p)
    given = {as_scale(k): as_real(v) for k, v in c_given.items()}
    missing = [g for g in T.generators if g not in given]
    if missing:
        raise ValueError(f"c is not given for generator(s) {', '.join(map(str, missing))}")
    given = {g: given[g] for g in T.generators}
    if ONE in given and not _close(given[ONE], Fraction(0)):
        raise InconsistentAtOne(f"c(1) = {given[ONE]} but must be 0")
    for t, ct in given.items():
        inv = t.inverse()
        if t != ONE and inv in given:
            forced = -tpow(t, p) * given[inv]
            if not _close(ct, forced):
                raise InconsistentInverse(f"c({t}) = {ct} but -t^p c(1/t) = {forced}")
    values: dict[Scale, Real] = dict(given)
    origin = {t: "given" for t in given}
    if ONE not in values:
        values[ONE] = Fraction(0)
        origin[ONE] = "forced_at_1"
    for t, ct in given.items():
        inv = t.inverse()
        if inv not in values:
            values[inv] = -tpow(inv, p) * ct
            origin[inv] = "inverted"
    return Cocycle(p, values, origin)


@dataclass(frozen=True)
class PowerForm:
    """``a x**p + b`` (kind ``power``) or ``a log x + b`` (kind ``log``); b is free."""

    kind: str
    a: Real
    p: Optional[Real] = None
    max_residual: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", as_real(self.a))
        if self.p is not None:
            object.__setattr__(self, "p", as_real(self.p))
        if self.kind not in ("power", "log"):
            raise ValueError(f"unknown kind {self.kind!r}")
        if (self.kind == "log") != (self.p is None or self.p == 0):
            raise ValueError("kind 'log' goes with p = 0 and kind 'power' with p != 0")

    def __call__(self, x: object, b: object = 0) -> Real:
        return eval_power_form(self, b, x)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "a": _real_json(self.a),
            "p": None if self.p is None else _real_json(self.p),
            "b": "free",
            "max_residual": self.max_residual,
        }


def eval_power_form(f: PowerForm, b: object, x: object) -> Real:
    b = as_real(b)
    if isinstance(x, Scale):
        xs = x
    else:
        xs = as_scale(x)
    if f.kind == "log":
        return f.a * xs.log_value + b
    return f.a * tpow(xs, f.p) + b


def _basis(t: Scale, p: Real) -> Real:
    return t.log_value if p == 0 else tpow(t, p) - 1


def fit_power_form(T: ScaleSet, c: Cocycle, I: Optional[Interval] = None) -> Optional[PowerForm]:
    """Find the single ``a`` with ``c(t) = a (t**p - 1)`` (``a log t`` when p = 0).

    Least squares over the generators other than 1 (only those whose
    equation is not vacuous on I when I is given); the fit is accepted when
    the worst residual is at most ``1e-9 (1 + |a|)``.  None means no power
    form matches, i.e. the data are contradictory.
    """
    p = c.p
    ts = [t for t in T.generators if t != ONE]
    if I is not None:
        ts = [t for t in ts if I.intersect(I.scale(t.inverse().value if t.is_exact else 1 / float(t))) is not None]
    if not ts:
        raise ValueError("no generator other than 1 constrains the fit")
    fs = [_basis(t, p) for t in ts]
    cs = [c.values[t] for t in ts]
    exact = all(isinstance(v, Fraction) for v in fs + cs)
    if exact:
        a: Real = sum(f * v for f, v in zip(fs, cs)) / sum(f * f for f in fs)
    else:
        fs = [float(f) for f in fs]
        num = math.fsum(f * float(v) for f, v in zip(fs, cs))
        a = num / math.fsum(f * f for f in fs)
    worst = max(abs(a * f - v) for f, v in zip(fs, cs))
    if worst > FIT_TOL * (1 + abs(a)):
        return None
    worst = float(worst)
    return PowerForm("log", a, None, worst) if p == 0 else PowerForm("power", a, p, worst)
