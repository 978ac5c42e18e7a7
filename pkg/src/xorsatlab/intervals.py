"""Outward-rounded interval arithmetic for machine-checkable inequalities.

Every operation returns an enclosure of the exact real image.  Rounding is
handled portably: results are computed in double precision and inflated
outward by 2 ulps per elementary operation (libm's exp/log/cosh are within
1 ulp on this platform, IEEE +-*/ within half an ulp, so 2 ulps is a sound
cushion).  This costs a negligible amount of width at the scales certified
here and avoids non-portable FPU rounding-mode switches.

Beyond the arithmetic core there are enclosures for the special functions
the certificates need: f(x) = e^x - 1 - x (series-protected near 0, where
the direct expression cancels catastrophically), psi(x) = x f'(x)/f(x),
the entropy function, x ln(x/z), and positive-coefficient power series for
the three sign certificates

    e^x + e^{-x} - 2 - x^2   = sum_{j>=2} 2 x^{2j} / (2j)!
    (s-2) e^s + s + 2        = sum_{j>=3} (j-2) s^j / j!
    e^{x^2/2} - cosh x       = sum_{j>=2} x^{2j} (1/(2^j j!) - 1/(2j)!)

whose series forms make the >= 0 lower bound exact at the x = 0 equality
point (a direct interval evaluation can never certify it).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from xorsatlab.formulas import lambda_of

_INF = math.inf


def up(x: float, ulps: int = 2) -> float:
    for _ in range(ulps):
        x = math.nextafter(x, _INF)
    return x


def down(x: float, ulps: int = 2) -> float:
    for _ in range(ulps):
        x = math.nextafter(x, -_INF)
    return x


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self) -> None:
        if math.isnan(self.lo) or math.isnan(self.hi) or self.lo > self.hi:
            raise ValueError(f"invalid interval [{self.lo}, {self.hi}]")

    # -- constructors -------------------------------------------------------

    @staticmethod
    def point(x: float) -> "Interval":
        return Interval(x, x)

    @staticmethod
    def hull(*vals: "Interval") -> "Interval":
        return Interval(min(v.lo for v in vals), max(v.hi for v in vals))

    # -- queries ------------------------------------------------------------

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def subset_of(self, other: "Interval") -> bool:
        return other.lo <= self.lo and self.hi <= other.hi

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "Interval":
        return other if isinstance(other, Interval) else Interval.point(float(other))

    def __add__(self, other) -> "Interval":
        o = self._coerce(other)
        return Interval(down(self.lo + o.lo), up(self.hi + o.hi))

    __radd__ = __add__

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other) -> "Interval":
        o = self._coerce(other)
        return Interval(down(self.lo - o.hi), up(self.hi - o.lo))

    def __rsub__(self, other) -> "Interval":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Interval":
        o = self._coerce(other)
        products = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Interval(down(min(products)), up(max(products)))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Interval":
        o = self._coerce(other)
        if o.lo <= 0.0 <= o.hi:
            raise ZeroDivisionError(f"divisor interval [{o.lo}, {o.hi}] contains zero")
        quotients = (self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi)
        return Interval(down(min(quotients)), up(max(quotients)))

    def __rtruediv__(self, other) -> "Interval":
        return self._coerce(other) / self

    def sq(self) -> "Interval":
        """x^2 as an even power (tighter than self * self when 0 is inside)."""
        if self.lo >= 0.0:
            return Interval(down(self.lo * self.lo), up(self.hi * self.hi))
        if self.hi <= 0.0:
            return Interval(down(self.hi * self.hi), up(self.lo * self.lo))
        m = max(-self.lo, self.hi)
        return Interval(0.0, up(m * m))


def clamp(x: Interval, lo: float, hi: float) -> Interval:
    """Intersect an enclosure with [lo, hi].

    Sound only when the enclosed true values are known to lie in [lo, hi]
    (outward rounding may have pushed the enclosure past a domain edge).
    """
    if x.hi < lo or x.lo > hi:
        raise ValueError("enclosure does not meet the stated domain")
    return Interval(max(x.lo, lo), min(x.hi, hi))


def iconst(fr: Fraction) -> Interval:
    """Enclosure of an exact rational (float() of a Fraction rounds to nearest)."""
    x = float(fr)
    return Interval(down(x, 1), up(x, 1))


def idecimal(text: str) -> Interval:
    """Enclosure of a decimal literal, e.g. idecimal("2.7694")."""
    return iconst(Fraction(text))


# ---------------------------------------------------------------------------
# Monotone elementary functions


def iexp(x: Interval) -> Interval:
    return Interval(max(down(math.exp(x.lo)), 0.0), up(math.exp(x.hi)))


def iexpm1(x: Interval) -> Interval:
    return Interval(max(down(math.expm1(x.lo)), -1.0), up(math.expm1(x.hi)))


def ilog(x: Interval) -> Interval:
    if x.lo <= 0.0:
        raise ValueError(f"log needs a positive interval, got [{x.lo}, {x.hi}]")
    return Interval(down(math.log(x.lo)), up(math.log(x.hi)))


def icosh(x: Interval) -> Interval:
    a, b = abs(x.lo), abs(x.hi)
    big, small = max(a, b), min(a, b)
    lo = 1.0 if x.lo <= 0.0 <= x.hi else down(math.cosh(small))
    return Interval(max(lo, 1.0), up(math.cosh(big)))


# ---------------------------------------------------------------------------
# f(x) = e^x - 1 - x and psi


_F_CUT = 0.25
_F_TERMS = 14


def _f_point(x: float) -> Interval:
    """Tight enclosure of f at one float."""
    if x == 0.0:
        return Interval.point(0.0)
    if abs(x) <= _F_CUT:
        acc = Interval.point(0.0)
        X = Interval.point(x)
        power = X * X
        for j in range(2, _F_TERMS + 1):
            acc = acc + power * iconst(Fraction(1, math.factorial(j)))
            power = power * X
        tail = up(abs(x) ** (_F_TERMS + 1) / math.factorial(_F_TERMS + 1) * 1.1, 4)
        return acc + Interval(-tail, tail)
    xi = Interval.point(x)
    return iexpm1(xi) - xi


def f_int(x: Interval) -> Interval:
    """Enclosure of f over an interval; f decreases on (-inf,0], increases on [0,inf), f(0)=0."""
    if x.lo >= 0.0:
        return Interval(max(_f_point(x.lo).lo, 0.0), _f_point(x.hi).hi)
    if x.hi <= 0.0:
        return Interval(max(_f_point(x.hi).lo, 0.0), _f_point(x.lo).hi)
    return Interval(0.0, max(_f_point(x.lo).hi, _f_point(x.hi).hi))


def fprime_int(x: Interval) -> Interval:
    return iexpm1(x)


def psi_int(x: Interval) -> Interval:
    """x f'(x)/f(x) by direct quotient; meant for intervals well away from 0."""
    if x.lo <= 0.0:
        raise ValueError("psi_int needs a strictly positive interval")
    return x * fprime_int(x) / f_int(x)


def lambda_interval(d: Interval) -> Interval:
    """Verified enclosure of psi^{-1} over d (componentwise, psi increasing).

    Floating-point roots from `lambda_of` are pushed outward until interval
    psi-evaluations confirm bracketing.
    """
    if d.lo <= 2.0:
        raise ValueError("psi^{-1} enclosure needs d > 2")
    lo_guess = lambda_of(d.lo)
    hi_guess = lambda_of(d.hi)
    margin = 1e-11
    lo = lo_guess - margin
    while psi_int(Interval.point(lo)).hi > d.lo:
        margin *= 8.0
        lo = lo_guess - margin
        if margin > 1e-3:
            raise RuntimeError("could not verify lower lambda bracket")
    margin = 1e-11
    hi = hi_guess + margin
    while psi_int(Interval.point(hi)).lo < d.hi:
        margin *= 8.0
        hi = hi_guess + margin
        if margin > 1e-3:
            raise RuntimeError("could not verify upper lambda bracket")
    return Interval(lo, hi)


# ---------------------------------------------------------------------------
# Entropy and x ln(x/z)


def _H_point(a: float) -> Interval:
    if a < 0.0 or a > 1.0:
        raise ValueError("entropy argument must lie in [0, 1]")
    if a == 0.0 or a == 1.0:
        return Interval.point(0.0)
    A = Interval.point(a)
    B = Interval.point(1.0) - A
    return -(A * ilog(A) + B * ilog(B))


def entropy_int(a: Interval) -> Interval:
    """Range of H over a sub-interval of [0, 1] (max ln 2 at 1/2, monotone on each side)."""
    if a.lo < 0.0 or a.hi > 1.0:
        raise ValueError("entropy interval must lie inside [0, 1]")
    ends = (_H_point(a.lo), _H_point(a.hi))
    lo = min(e.lo for e in ends)
    hi = max(e.hi for e in ends)
    if a.lo < 0.5 < a.hi:
        hi = max(hi, up(math.log(2.0)))
    return Interval(max(lo, 0.0), hi)


def ixlog_ratio(a: Interval, z: float) -> Interval:
    """Range of t(x) = x ln(x/z) over a >= 0 (minimum -z/e at x = z/e, t(0) = 0)."""
    if a.lo < 0.0:
        raise ValueError("x ln(x/z) enclosure needs x >= 0")
    if z <= 0.0:
        raise ValueError("z must be positive")

    def t_point(x: float) -> Interval:
        if x == 0.0:
            return Interval.point(0.0)
        X = Interval.point(x)
        return X * ilog(X / Interval.point(z))

    ends = (t_point(a.lo), t_point(a.hi))
    lo = min(e.lo for e in ends)
    hi = max(e.hi for e in ends)
    crit = z / math.e
    if a.lo < crit < a.hi:
        lo = min(lo, down(-z / math.e, 4))
    return Interval(lo, hi)


# ---------------------------------------------------------------------------
# Positive-coefficient series for the sign certificates


def _positive_even_series(x: Interval, coeffs: list[tuple[int, Fraction]], tail_scale: Fraction) -> Interval:
    """sum over (j, c_j >= 0) of c_j * u^j with u = x^2, plus a [0, tail] remainder.

    Sound for |x| <= 1 when tail_scale bounds the first omitted coefficient
    times a geometric safety factor; the lower endpoint never dips below the
    rounded-down partial sum, which is what certifies >= 0 at u = 0.
    """
    u = x.sq()
    acc = Interval.point(0.0)
    upow = Interval.point(1.0)
    last_j = 0
    for j, c in coeffs:
        while last_j < j:
            upow = upow * u
            last_j += 1
        acc = acc + upow * iconst(c)
    tail_hi = up(float(tail_scale) * u.hi ** (last_j + 1), 6)
    return acc + Interval(0.0, tail_hi)


@lru_cache(maxsize=None)
def _coeffs_cosh_gap() -> tuple:
    # e^x + e^{-x} - 2 - x^2: coefficients of u^j (u = x^2) are 2/(2j)!
    return tuple((j, Fraction(2, math.factorial(2 * j))) for j in range(2, 13))


@lru_cache(maxsize=None)
def _coeffs_gauss_gap() -> tuple:
    # e^{x^2/2} - cosh x: coefficients 1/(2^j j!) - 1/(2j)!
    return tuple(
        (j, Fraction(1, 2**j * math.factorial(j)) - Fraction(1, math.factorial(2 * j)))
        for j in range(2, 13)
    )


def cosh_gap(x: Interval) -> Interval:
    """e^x + e^{-x} - 2 - x^2 (the psi' numerator times e^{-x}); >= 0 on the reals."""
    if max(abs(x.lo), abs(x.hi)) <= 1.0:
        return _positive_even_series(x, list(_coeffs_cosh_gap()), Fraction(2, math.factorial(28)) * 2)
    return icosh(x) * 2 - 2 - x.sq()


def rate_numerator(s: Interval) -> Interval:
    """(s-2) e^s + s + 2 = sum_{j>=3} (j-2) s^j / j!; >= 0 for s >= 0."""
    if s.lo < 0.0:
        raise ValueError("rate_numerator is certified for s >= 0 only")
    if s.hi <= 1.0:
        acc = Interval.point(0.0)
        spow = s * s * s
        for j in range(3, 17):
            acc = acc + spow * iconst(Fraction(j - 2, math.factorial(j)))
            spow = spow * s
        tail_hi = up(float(Fraction(16, math.factorial(17))) * s.hi**17 * 2.0, 6)
        return acc + Interval(0.0, tail_hi)
    return (s - 2) * iexp(s) + s + 2


def gauss_cosh_gap(x: Interval) -> Interval:
    """e^{x^2/2} - cosh x; >= 0 on the reals."""
    if max(abs(x.lo), abs(x.hi)) <= 0.75:
        first_omitted = Fraction(1, 2**13 * math.factorial(13)) - Fraction(1, math.factorial(26))
        return _positive_even_series(x, list(_coeffs_gauss_gap()), first_omitted * 2)
    half_sq = x.sq() * 0.5
    return iexp(half_sq) - icosh(x)


__all__ = [
    "Interval",
    "clamp",
    "cosh_gap",
    "down",
    "entropy_int",
    "f_int",
    "fprime_int",
    "gauss_cosh_gap",
    "icosh",
    "iconst",
    "idecimal",
    "iexp",
    "iexpm1",
    "ilog",
    "ixlog_ratio",
    "lambda_interval",
    "psi_int",
    "rate_numerator",
    "up",
    "_H_point",
    "_f_point",
]
