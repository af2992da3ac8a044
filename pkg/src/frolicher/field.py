"""Exact arithmetic over the Gaussian rationals Q(i).

Real values are carried as ``gmpy2.mpq``; a :class:`GaussianRational` is only
materialised when the imaginary part is nonzero.  Every function here accepts
either representation, and :func:`gq` normalises back to ``mpq`` whenever the
imaginary part vanishes.  Equal numbers therefore always have one canonical
representation.
"""
from __future__ import annotations

import re
from numbers import Rational

from gmpy2 import mpq

__all__ = [
    "GaussianRational",
    "gq",
    "conj",
    "is_zero",
    "real_part",
    "imag_part",
    "parse_scalar",
    "format_scalar",
    "format_rational",
    "ZERO",
    "ONE",
    "I",
    "FormatError",
]


class FormatError(ValueError):
    """Malformed scalar or document content."""


_MPQ = type(mpq(0))


def _q(x) -> mpq:
    if isinstance(x, _MPQ):
        return x
    if isinstance(x, GaussianRational):
        raise TypeError("expected a rational, got a Gaussian rational")
    return mpq(x)


class GaussianRational:
    """An element ``re + i*im`` of Q(i) with ``im != 0``.

    Instances are immutable.  Construct through :func:`gq`, which returns a plain
    ``mpq`` for real values.
    """

    __slots__ = ("re", "im")

    def __init__(self, re, im):
        object.__setattr__(self, "re", _q(re))
        object.__setattr__(self, "im", _q(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    def __repr__(self):
        return f"GaussianRational({format_rational(self.re)!r}, {format_rational(self.im)!r})"

    def __str__(self):
        re_, im_ = self.re, self.im
        if re_ == 0:
            return f"{pretty(im_)}*i"
        sign = "+" if im_ > 0 else "-"
        return f"{pretty(re_)}{sign}{pretty(abs(im_))}*i"

    def __hash__(self):
        return hash((self.re, self.im))

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (_MPQ, int, Rational)):
            return False  # im != 0 by construction
        return NotImplemented

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __bool__(self):
        return True

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __add__(self, other):
        if isinstance(other, GaussianRational):
            return gq(self.re + other.re, self.im + other.im)
        if isinstance(other, (_MPQ, int, Rational)):
            return GaussianRational(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, GaussianRational):
            return gq(self.re - other.re, self.im - other.im)
        if isinstance(other, (_MPQ, int, Rational)):
            return GaussianRational(self.re - other, self.im)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (_MPQ, int, Rational)):
            return GaussianRational(other - self.re, -self.im)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, GaussianRational):
            a, b, c, d = self.re, self.im, other.re, other.im
            return gq(a * c - b * d, a * d + b * c)
        if isinstance(other, (_MPQ, int, Rational)):
            if other == 0:
                return mpq(0)
            return GaussianRational(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, GaussianRational):
            c, d = other.re, other.im
            den = c * c + d * d
            a, b = self.re, self.im
            return gq((a * c + b * d) / den, (b * c - a * d) / den)
        if isinstance(other, (_MPQ, int, Rational)):
            if other == 0:
                raise ZeroDivisionError("division by zero in Q(i)")
            return GaussianRational(self.re / other, self.im / other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (_MPQ, int, Rational)):
            c, d = self.re, self.im
            den = c * c + d * d
            return gq(other * c / den, -other * d / den)
        return NotImplemented

    def conjugate(self):
        return GaussianRational(self.re, -self.im)


def gq(re, im=0):
    """Canonical Q(i) value: ``mpq`` when real, else :class:`GaussianRational`."""
    im = _q(im)
    if im == 0:
        return _q(re)
    return GaussianRational(re, im)


ZERO = mpq(0)
ONE = mpq(1)
I = GaussianRational(0, 1)


def conj(x):
    if isinstance(x, GaussianRational):
        return GaussianRational(x.re, -x.im)
    return x


def is_zero(x) -> bool:
    return not isinstance(x, GaussianRational) and x == 0


def real_part(x) -> mpq:
    return x.re if isinstance(x, GaussianRational) else _q(x)


def imag_part(x) -> mpq:
    return x.im if isinstance(x, GaussianRational) else mpq(0)


_RAT = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def _parse_rational(s) -> mpq:
    if isinstance(s, bool):
        raise FormatError(f"not a rational: {s!r}")
    if isinstance(s, int):
        return mpq(s)
    if not isinstance(s, str):
        raise FormatError(f"rationals must be 'p/q' strings or integers, got {s!r}")
    m = _RAT.match(s)
    if not m:
        raise FormatError(f"malformed rational {s!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise FormatError(f"zero denominator in {s!r}")
    return mpq(num, den)


def parse_scalar(obj):
    """Parse ``"p/q"``, an integer, or ``["p/q", "r/s"]`` into a Q(i) value."""
    if isinstance(obj, (list, tuple)):
        if len(obj) != 2:
            raise FormatError(f"Gaussian rational needs [re, im], got {obj!r}")
        return gq(_parse_rational(obj[0]), _parse_rational(obj[1]))
    return _parse_rational(obj)


def format_rational(x) -> str:
    x = _q(x)
    return f"{int(x.numerator)}/{int(x.denominator)}"


def format_scalar(x):
    """Serialise: reals as ``"p/q"``, non-real values as ``["p/q", "r/s"]``."""
    if isinstance(x, GaussianRational):
        return [format_rational(x.re), format_rational(x.im)]
    return format_rational(x)


def pretty(x) -> str:
    """Short human form (``-2``, ``1/2``, ``1+2*i``)."""
    if isinstance(x, GaussianRational):
        return str(x)
    x = _q(x)
    if x.denominator == 1:
        return str(int(x.numerator))
    return format_rational(x)
