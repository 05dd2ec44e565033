"""Positive scale factors and generator sets.

A :class:`Scale` is one of three kinds:

* an exact positive rational (``value`` is a :class:`~fractions.Fraction`),
* a symbolic rational power ``r**e`` of a rational base, kept in canonical
  form (``r > 1`` not a perfect power, ``e`` a non-integer fraction),
* a floating positive real.

Every scale caches its natural logarithm.  Exact and symbolic logarithms are
computed in extended precision and then rounded, so they sit within one unit
in the last place of the true value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache, total_ordering
from typing import Callable, Iterable, Mapping, Optional, Union

import mpmath

from .errors import EmptyGenerators, NonPositiveScale

_WORK_PREC = 96
# Exact comparison of r1**a against r2**b is attempted below this many bits.
_EXACT_COMPARE_BITS = 1 << 22
_LOG_SEPARATION = 1e-12


def _iroot(n: int, k: int) -> Optional[int]:
    """Exact integer k-th root of ``n`` or None."""
    if n < 2:
        return n
    x = 1 << -(-n.bit_length() // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    return x if x**k == n else None


@lru_cache(maxsize=None)
def _primes_upto(n: int) -> tuple[int, ...]:
    if n < 2:
        return ()
    sieve = bytearray([1]) * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, int(n**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return tuple(i for i, flag in enumerate(sieve) if flag)


@lru_cache(maxsize=4096)
def primitive_root(q: Fraction) -> tuple[Fraction, int]:
    """Write ``q = r**k`` with ``r > 1`` rational and not a perfect power.

    ``k`` is negative when ``q < 1``.  ``q`` must be positive and not 1.
    """
    if q <= 0 or q == 1:
        raise ValueError(f"primitive_root needs q > 0, q != 1 (got {q})")
    sign = 1
    if q < 1:
        q, sign = 1 / q, -1
    n, d = q.numerator, q.denominator
    k = 1
    limit = n.bit_length() if d == 1 else min(n.bit_length(), d.bit_length())
    for p in _primes_upto(limit):
        while True:
            rn = _iroot(n, p)
            rd = _iroot(d, p) if rn is not None else None
            if rn is None or rd is None:
                break
            n, d, k = rn, rd, k * p
    return Fraction(n, d), sign * k


def _log_exact(x: Fraction) -> float:
    with mpmath.workprec(_WORK_PREC):
        return float(mpmath.log(mpmath.mpf(x.numerator) / x.denominator))


def _log_power(base: Fraction, exponent: Fraction) -> float:
    with mpmath.workprec(_WORK_PREC):
        lb = mpmath.log(mpmath.mpf(base.numerator) / base.denominator)
        return float(lb * exponent.numerator / exponent.denominator)


def _exp_or_inf(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


@total_ordering
@dataclass(frozen=True, eq=False)
class Scale:
    """A positive multiplicative factor.

    Use the constructors :meth:`exact`, :meth:`real`, :meth:`pow` and
    :meth:`from_log` (or :func:`as_scale`) rather than the raw dataclass.
    """

    value: Union[Fraction, float]
    log_value: float
    power: Optional[tuple[Fraction, Fraction]] = None

    # -- construction -----------------------------------------------------

    @classmethod
    def exact(cls, x: Union[int, Fraction, str]) -> Scale:
        q = Fraction(x)
        if q <= 0:
            raise NonPositiveScale(f"scale must be positive, got {q}")
        return cls(q, _log_exact(q))

    @classmethod
    def real(cls, x: float) -> Scale:
        x = float(x)
        if not x > 0 or math.isinf(x):
            raise NonPositiveScale(f"scale must be a finite positive real, got {x}")
        return cls(x, math.log(x))

    @classmethod
    def from_log(cls, log_value: float) -> Scale:
        return cls(_exp_or_inf(log_value), float(log_value))

    @classmethod
    def pow(cls, base: Union[int, Fraction, str, float, Scale], exponent: Union[int, Fraction, str, float]) -> Scale:
        """``base ** exponent``; symbolic when both are rational."""
        b = as_scale(base)
        if isinstance(exponent, float):
            return b._float_pow(exponent)
        e = Fraction(exponent)
        sym = b.symbolic
        if sym is None:
            return b._float_pow(float(e))
        r, k = sym
        e = e * k
        if r == 1 or e == 0:
            return _ONE
        if e.denominator == 1:
            return cls.exact(r ** int(e))
        log_value = _log_power(r, e)
        return cls(_exp_or_inf(log_value), log_value, (r, e))

    def _float_pow(self, e: float) -> Scale:
        return Scale.from_log(self.log_value * e)

    # -- classification ---------------------------------------------------

    @property
    def is_exact(self) -> bool:
        """True for exact rationals."""
        return isinstance(self.value, Fraction)

    @property
    def is_symbolic(self) -> bool:
        """True for exact rationals and symbolic rational powers."""
        return self.is_exact or self.power is not None

    @property
    def symbolic(self) -> Optional[tuple[Fraction, Fraction]]:
        """Canonical ``(r, e)`` with ``self == r**e``, or None for floats.

        The scale 1 maps to ``(1, 0)``.
        """
        if self.power is not None:
            return self.power
        if isinstance(self.value, Fraction):
            if self.value == 1:
                return (Fraction(1), Fraction(0))
            r, k = primitive_root(self.value)
            return (r, Fraction(k))
        return None

    # -- arithmetic -------------------------------------------------------

    def __mul__(self, other: object) -> Scale:
        if not isinstance(other, Scale):
            try:
                other = as_scale(other)  # type: ignore[arg-type]
            except (TypeError, ValueError):
                return NotImplemented
        if self.is_exact and other.is_exact:
            return Scale.exact(self.value * other.value)
        if self.is_exact and self.value == 1:
            return other
        if other.is_exact and other.value == 1:
            return self
        sa, sb = self.symbolic, other.symbolic
        if sa is not None and sb is not None and sa[0] == sb[0]:
            return Scale.pow(sa[0], sa[1] + sb[1])
        return Scale.from_log(self.log_value + other.log_value)

    __rmul__ = __mul__

    def inverse(self) -> Scale:
        if self.is_exact:
            return Scale(1 / self.value, -self.log_value)
        if self.power is not None:
            r, e = self.power
            return Scale(_exp_or_inf(-self.log_value), -self.log_value, (r, -e))
        return Scale(1.0 / self.value if self.value else math.inf, -self.log_value)

    def __truediv__(self, other: object) -> Scale:
        if not isinstance(other, Scale):
            try:
                other = as_scale(other)  # type: ignore[arg-type]
            except (TypeError, ValueError):
                return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other: object) -> Scale:
        return as_scale(other) * self.inverse()  # type: ignore[arg-type]

    def __pow__(self, n: int) -> Scale:
        if isinstance(n, bool) or not isinstance(n, int):
            return Scale.pow(self, n)
        if self.is_exact:
            return Scale.exact(self.value**n)
        return Scale.pow(self, n) if self.power is not None else Scale.from_log(self.log_value * n)

    def __float__(self) -> float:
        return float(self.value)

    # -- comparison -------------------------------------------------------

    def compare(self, other: Scale) -> int:
        """Three-way comparison; exact whenever both sides are symbolic."""
        a, b = self.value, other.value
        if isinstance(a, Fraction) and isinstance(b, Fraction):
            return (a > b) - (a < b)
        la, lb = self.log_value, other.log_value
        if abs(la - lb) > _LOG_SEPARATION * max(1.0, abs(la), abs(lb)):
            # logs are accurate to a few ulps, so a clear gap decides it
            return (la > lb) - (la < lb)
        sa, sb = self.symbolic, other.symbolic
        if sa is not None and sb is not None:
            res = _compare_powers(sa, sb)
            if res is not None:
                return res
        elif self.power is None and other.power is None:
            # float against float or float against exact rational
            if math.isfinite(a) and math.isfinite(b) and a > 0 and b > 0:
                fa, fb = Fraction(a), Fraction(b)
                return (fa > fb) - (fa < fb)
        la, lb = self.log_value, other.log_value
        return (la > lb) - (la < lb)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Scale):
            try:
                other = as_scale(other)  # type: ignore[arg-type]
            except (TypeError, ValueError, NonPositiveScale):
                return NotImplemented
        if self.power is not None or other.power is not None:
            return self.power == other.power
        return self.value == other.value

    def __hash__(self) -> int:
        if self.power is not None:
            return hash(self.power)
        return hash(self.value)

    def __lt__(self, other: object) -> bool:
        if not isinstance(other, Scale):
            other = as_scale(other)  # type: ignore[arg-type]
        return self.compare(other) < 0

    # -- text -------------------------------------------------------------

    def __str__(self) -> str:
        if self.power is not None:
            r, e = self.power
            return f"{r}^({e})"
        return str(self.value) if self.is_exact else repr(self.value)

    def __repr__(self) -> str:
        return f"Scale({self})"


def _compare_powers(sa: tuple[Fraction, Fraction], sb: tuple[Fraction, Fraction]) -> Optional[int]:
    (r1, e1), (r2, e2) = sa, sb
    if r1 == r2 or e1 == 0 or e2 == 0:
        # r > 1, so r**e is increasing in e; the scale 1 is (1, 0)
        x1 = e1 if r1 != 1 else Fraction(0)
        x2 = e2 if r2 != 1 else Fraction(0)
        if r1 == r2:
            return (x1 > x2) - (x1 < x2)
        if e1 == 0:
            return -1 if x2 > 0 else (1 if x2 < 0 else 0)
        return 1 if x1 > 0 else (-1 if x1 < 0 else 0)
    d = math.lcm(e1.denominator, e2.denominator)
    a, b = int(e1 * d), int(e2 * d)
    bits = abs(a) * max(r1.numerator.bit_length(), r1.denominator.bit_length()) + abs(b) * max(
        r2.numerator.bit_length(), r2.denominator.bit_length()
    )
    if bits > _EXACT_COMPARE_BITS:
        return None
    lhs, rhs = r1**a, r2**b
    return (lhs > rhs) - (lhs < rhs)


_ONE = Scale(Fraction(1), 0.0)
ONE = _ONE


def as_scale(x: Union[Scale, int, Fraction, float, str, Mapping]) -> Scale:
    """Coerce numbers, strings (``"3/2"``, ``"0.25"``, ``"2^(1/3)"``) and JSON to a Scale.

    Decimal strings are read as exact rationals; Python floats stay floating.
    """
    if isinstance(x, Scale):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scales")
    if isinstance(x, (int, Fraction)):
        return Scale.exact(x)
    if isinstance(x, float):
        return Scale.real(x)
    if isinstance(x, str):
        s = x.strip().replace("**", "^")
        if "^" in s:
            base, _, exp = s.partition("^")
            exp = exp.strip().removeprefix("(").removesuffix(")")
            return Scale.pow(as_scale(base), Fraction(exp.strip()))
        try:
            return Scale.exact(Fraction(s))
        except ValueError:
            return Scale.real(float(s))
    if isinstance(x, Mapping):
        return scale_from_json(x)
    raise TypeError(f"cannot interpret {x!r} as a scale")


def scale_to_json(s: Scale) -> dict:
    if s.is_exact:
        return {"num": str(s.value.numerator), "den": str(s.value.denominator)}
    if s.power is not None:
        r, e = s.power
        return {"base": {"num": str(r.numerator), "den": str(r.denominator)}, "exp": str(e)}
    return {"float": repr(float(s.value))}


def scale_from_json(obj: Mapping) -> Scale:
    if "num" in obj:
        return Scale.exact(Fraction(int(obj["num"]), int(obj.get("den", 1))))
    if "float" in obj:
        return Scale.real(float(obj["float"]))
    if "base" in obj:
        return Scale.pow(as_scale(obj["base"]), Fraction(str(obj["exp"])))
    raise ValueError(f"not a scale: {obj!r}")


# ---------------------------------------------------------------------------
# generator sets


def _dedup(items: Iterable[Scale]) -> tuple[Scale, ...]:
    seen: set[Scale] = set()
    out = []
    for s in items:
        if s not in seen:
            seen.add(s)
            out.append(s)
    return tuple(out)


@dataclass(frozen=True)
class ScaleSet:
    """The generator set T together with its star closure T* = T ∪ T⁻¹ ∪ {1}.

    ``truncation`` and ``limit_points`` describe a finite truncation of an
    infinite family: the generators are its first ``truncation`` members
    and ``limit_points`` are the declared accumulation points of the full
    family.  Plain finite sets leave both unset.
    """

    generators: tuple[Scale, ...]
    limit_points: tuple[Scale, ...] = ()
    truncation: Optional[int] = None

    @cached_property
    def star(self) -> tuple[Scale, ...]:
        return tuple(sorted(_dedup([*self.generators, *(g.inverse() for g in self.generators), ONE])))

    @cached_property
    def star_limit_points(self) -> tuple[Scale, ...]:
        return tuple(sorted(_dedup([*self.limit_points, *(c.inverse() for c in self.limit_points)])))

    def closure(self) -> ScaleSet:
        """T* as a generator set in its own right (same family metadata)."""
        return ScaleSet(self.star, self.star_limit_points, self.truncation)

    @property
    def is_exact(self) -> bool:
        return all(s.is_exact for s in self.star)

    @property
    def is_symbolic(self) -> bool:
        return all(s.is_symbolic for s in self.star)

    @property
    def is_family(self) -> bool:
        return self.truncation is not None or bool(self.limit_points)

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def __contains__(self, s: object) -> bool:
        return as_scale(s) in set(self.generators)  # type: ignore[arg-type]


def make_scale_set(
    generators: Iterable,
    limit_points: Iterable = (),
    truncation: Optional[int] = None,
) -> ScaleSet:
    gens = [as_scale(g) for g in generators]
    if not gens:
        raise EmptyGenerators("the generator set T must be nonempty")
    return ScaleSet(_dedup(gens), _dedup(as_scale(c) for c in limit_points), truncation)


def truncated_family(member: Callable[[int], object], depth: int, limit_points: Iterable = ()) -> ScaleSet:
    """Members ``member(1), ..., member(depth)`` of an infinite family."""
    if depth < 1:
        raise EmptyGenerators("truncation depth must be at least 1")
    return make_scale_set([member(k) for k in range(1, depth + 1)], limit_points, truncation=depth)


def power_shift_family(c: object, depth: int) -> ScaleSet:
    """``{c * 2**(1/k) : k = 1..depth}``, accumulating at ``c``."""
    c = as_scale(c)
    return truncated_family(lambda k: c * Scale.pow(2, Fraction(1, k)), depth, [c])


def harmonic_family(depth: int) -> ScaleSet:
    """``{1 + 1/k : k = 1..depth}``, accumulating at 1."""
    return truncated_family(lambda k: Fraction(k + 1, k), depth, [1])


def scale_set_to_json(T: ScaleSet) -> dict:
    out: dict = {"generators": [scale_to_json(g) for g in T.generators]}
    if T.limit_points:
        out["limit_points"] = [scale_to_json(c) for c in T.limit_points]
    if T.truncation is not None:
        out["truncation"] = T.truncation
    return out


def scale_set_from_json(obj) -> ScaleSet:
    if isinstance(obj, Mapping):
        return make_scale_set(obj["generators"], obj.get("limit_points", ()), obj.get("truncation"))
    return make_scale_set(obj)


# ---------------------------------------------------------------------------
# lattice structure


@dataclass(frozen=True)
class LatticeDesc:
    """Every generator is ``base ** exponents[g]`` (integer exponents)."""

    base: Scale
    exponents: Mapping[Scale, Fraction] = field(hash=False)
    certified: bool
    tol: float = 0.0

    @property
    def common_denominator(self) -> int:
        return math.lcm(*(q.denominator for q in self.exponents.values())) if self.exponents else 1


def _fraction_gcd(values: Iterable[Fraction]) -> Fraction:
    vals = [abs(v) for v in values if v != 0]
    if not vals:
        return Fraction(0)
    den = math.lcm(*(v.denominator for v in vals))
    return Fraction(math.gcd(*(int(v * den) for v in vals)), den)


def lattice_detect(T: ScaleSet, tol: float = 1e-13, max_denominator: int = 10**6) -> Optional[LatticeDesc]:
    """Find ``t`` with every generator a rational power of ``t``.

    Symbolic input is decided exactly (two rationals are multiplicatively
    dependent iff their primitive roots coincide).  Floating input is tested
    with continued-fraction approximation of the log ratios, accepting
    denominators up to ``max_denominator`` within relative tolerance
    ``tol``; such detections are flagged ``certified=False``.
    """
    gens = T.generators
    nontrivial = [g for g in gens if not (g.is_exact and g.value == 1)]
    if not nontrivial:
        return LatticeDesc(ONE, {g: Fraction(0) for g in gens}, certified=True)

    if all(g.is_symbolic for g in gens):
        syms = {g: g.symbolic for g in nontrivial}
        bases = {r for r, _ in syms.values()}
        if len(bases) != 1:
            return None
        (r,) = bases
        step = _fraction_gcd(e for _, e in syms.values())
        base = Scale.pow(r, step)
        exps = {g: (syms[g][1] / step if g in syms else Fraction(0)) for g in gens}
        return LatticeDesc(base, exps, certified=True)

    ref = nontrivial[0].log_value
    ratios: dict[Scale, Fraction] = {}
    for g in gens:
        x = g.log_value / ref
        q = Fraction(x).limit_denominator(max_denominator)
        if abs(x - q) > tol * max(1.0, abs(x)):
            return None
        ratios[g] = q
    step = _fraction_gcd(ratios.values())
    base_log = abs(float(step) * ref)
    sign = 1 if step * ref > 0 else -1
    exps = {g: sign * q / step for g, q in ratios.items()}
    return LatticeDesc(Scale.from_log(base_log), exps, certified=False, tol=tol)
