"""Exact scalar helpers: rational complex numbers, rational multiples of
powers of e, and lossless conversions between Fraction and mpmath types.

Everything here exists so that the rational-arithmetic paths stay exact and
the floating paths can be re-run at any precision from exact inputs.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp

INF = float("inf")

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*/\s*(\d+)\s*$")
# forms like "1/(4e)", "R/(8e)", "3/(2 e)"
_OVER_E_RE = re.compile(r"^\s*([+-]?[\dR./]+)\s*/\s*\(\s*([\d.]*)\s*\*?\s*e\s*\)\s*$")


def is_exact(x) -> bool:
    """True for scalar types whose value is independent of working precision."""
    return isinstance(x, (int, Fraction, ComplexFraction))


def parse_real(text):
    """Parse a real number given as int, float, Fraction, or string.

    Strings may be decimal ("2.5"), rational ("5/2"), or "inf"/"-inf".
    Decimal and rational strings convert exactly to Fraction so that they can
    feed the exact-arithmetic paths.
    """
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if isinstance(text, float):
        if math.isinf(text):
            return INF if text > 0 else -INF
        return Fraction(text)
    if isinstance(text, str):
        s = text.strip()
        if s in ("inf", "+inf", "Infinity"):
            return INF
        if s == "-inf":
            return -INF
        m = _RATIONAL_RE.match(s)
        if m:
            return Fraction(int(m.group(1)), int(m.group(2)))
        return Fraction(s)
    raise TypeError(f"cannot parse real value from {text!r}")


def mpf_to_fraction(x) -> Fraction:
    """Exact conversion of an mpf to Fraction (every mpf is dyadic)."""
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    sign, man, exp, _ = x._mpf_
    if man == 0:
        if exp == 0:
            return Fraction(0)
        raise ValueError(f"non-finite mpf {x!r} has no rational value")
    val = Fraction(man) * Fraction(2) ** exp
    return -val if sign else val


def to_mpf(x):
    """Convert an exact or floating real scalar to mpf at ambient precision."""
    if isinstance(x, EScaled):
        return x.to_mpf()
    if x == INF:
        return mp.inf
    if x == -INF:
        return mp.ninf
    return mp.mpf(x)


def to_mpc(x):
    """Convert any supported scalar to mpc at ambient precision."""
    if isinstance(x, ComplexFraction):
        return mp.mpc(mp.mpf(x.re), mp.mpf(x.im))
    if isinstance(x, EScaled):
        return mp.mpc(x.to_mpf())
    return mp.mpc(x)


def abs_scalar(x):
    """Modulus of any supported scalar; exact Fraction when the input is an
    exact real or an exact complex with a zero component."""
    if isinstance(x, (int, Fraction)):
        return abs(Fraction(x))
    if isinstance(x, ComplexFraction):
        if x.im == 0:
            return abs(x.re)
        if x.re == 0:
            return abs(x.im)
        return mp.sqrt(mp.mpf(x.re) ** 2 + mp.mpf(x.im) ** 2)
    return abs(to_mpc(x))


@dataclass(frozen=True)
class ComplexFraction:
    """Complex number with exact rational real and imaginary parts.

    Supports the ring operations plus division, enough for exact power-series
    arithmetic. Mixed operations with int/Fraction promote the real scalar.
    """

    re: Fraction
    im: Fraction

    @staticmethod
    def from_scalar(x) -> "ComplexFraction":
        if isinstance(x, ComplexFraction):
            return x
        return ComplexFraction(Fraction(x), Fraction(0))

    def __add__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return ComplexFraction(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return ComplexFraction(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return ComplexFraction(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return ComplexFraction(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by exact complex zero")
        return ComplexFraction(
            (self.re * o.re + self.im * o.im) / d,
            (self.im * o.re - self.re * o.im) / d,
        )

    def __rtruediv__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o / self

    def __neg__(self):
        return ComplexFraction(-self.re, -self.im)

    def __eq__(self, other):
        if isinstance(other, ComplexFraction):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def conjugate(self) -> "ComplexFraction":
        return ComplexFraction(self.re, -self.im)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __repr__(self):
        return f"ComplexFraction({self.re}, {self.im})"


def _coerce(x):
    if isinstance(x, ComplexFraction):
        return x
    if isinstance(x, (int, Fraction)):
        return ComplexFraction(Fraction(x), Fraction(0))
    return NotImplemented


I_EXACT = ComplexFraction(Fraction(0), Fraction(1))

# (-i)^k cycle used when contracting operator symbols against D^k / i^k
NEG_I_POW = (
    ComplexFraction(Fraction(1), Fraction(0)),
    ComplexFraction(Fraction(0), Fraction(-1)),
    ComplexFraction(Fraction(-1), Fraction(0)),
    ComplexFraction(Fraction(0), Fraction(1)),
)

# i^k cycle
I_POW = (
    ComplexFraction(Fraction(1), Fraction(0)),
    ComplexFraction(Fraction(0), Fraction(1)),
    ComplexFraction(Fraction(-1), Fraction(0)),
    ComplexFraction(Fraction(0), Fraction(-1)),
)


@dataclass(frozen=True)
class EScaled:
    """A real value of the form coef * e**e_exp with exact rational coef.

    Keeping the power of e symbolic lets expressions like R/(4eB) with
    B = R/(8e) collapse to exact rationals: the admissible-domain formula is
    then evaluated in exact arithmetic.
    """

    coef: Fraction
    e_exp: int = 0

    @staticmethod
    def from_value(x) -> "EScaled":
        if isinstance(x, EScaled):
            return x
        return EScaled(parse_real(x), 0)

    def to_mpf(self):
        v = mp.mpf(self.coef)
        if self.e_exp:
            v = v * mp.e ** self.e_exp
        return v

    def scale(self, q, extra_e: int = 0) -> "EScaled":
        return EScaled(self.coef * Fraction(q), self.e_exp + extra_e)

    def as_exact(self):
        """Fraction if the e power cancels, else None."""
        if self.e_exp == 0:
            return self.coef
        return None

    def __float__(self):
        return float(self.coef) * math.e ** self.e_exp

    def is_positive(self) -> bool:
        return self.coef > 0

    def __repr__(self):
        if self.e_exp == 0:
            return f"EScaled({self.coef})"
        return f"EScaled({self.coef}*e^{self.e_exp})"


def parse_growth_rate(text, radius=None):
    """Parse a growth parameter B.

    Accepts plain numbers (exact rational), strings like "1/(4e)" or
    "2/(8 e)", and "R/(8e)" where R substitutes the supplied radius.
    Returns an EScaled.
    """
    if isinstance(text, EScaled):
        return text
    if isinstance(text, (int, float, Fraction)):
        return EScaled(parse_real(text), 0)
    s = str(text).strip()
    m = _OVER_E_RE.match(s)
    if m:
        num_s, den_s = m.group(1), m.group(2)
        if num_s.strip() == "R":
            if radius is None or radius == INF:
                raise ValueError("growth rate references R but no finite radius is available")
            num = Fraction(radius)
        else:
            num = parse_real(num_s)
        den = parse_real(den_s) if den_s else Fraction(1)
        return EScaled(num / den, -1)
    return EScaled(parse_real(s), 0)


def format_mpf(x, digits: int = 17) -> str:
    """Deterministic decimal rendering of an mpf/mpc for reports."""
    if isinstance(x, Fraction):
        x = mp.mpf(x)
    return mpmath.nstr(x, digits, strip_zeros=False)
