"""Exact complex scalars with rational real and imaginary parts."""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational

from .errors import ParseError

__all__ = ["GaussianRational", "parse_gaussian", "ZERO", "ONE", "I"]


class GaussianRational:
    """A complex number ``re + im*i`` with ``re`` and ``im`` in Q.

    Both parts are stored as :class:`fractions.Fraction`, so they are always
    in lowest terms with a positive denominator.  Instances are immutable and
    hashable; equality is structural.

    >>> z = GaussianRational(1, Fraction(-1, 2))
    >>> z * z.conjugate()
    GaussianRational(5/4)
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, GaussianRational):
            re, im = re.re, re.im + Fraction(im)
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @classmethod
    def coerce(cls, value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Rational)):
            return cls(value)
        if isinstance(value, complex):
            # only exactly representable inputs make sense here
            return cls(Fraction(value.real), Fraction(value.imag))
        if isinstance(value, str):
            return parse_gaussian(value)
        raise TypeError(f"cannot convert {type(value).__name__} to GaussianRational")

    @classmethod
    def _wrap(cls, re, im):
        obj = object.__new__(cls)
        object.__setattr__(obj, "re", re)
        object.__setattr__(obj, "im", im)
        return obj

    # arithmetic -----------------------------------------------------------

    def __add__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational._wrap(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational._wrap(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        a, b, c, d = self.re, self.im, o.re, o.im
        return GaussianRational._wrap(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        q = self * o.conjugate()
        return GaussianRational._wrap(q.re / n, q.im / n)

    def __rtruediv__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return o / self

    def __neg__(self):
        return GaussianRational._wrap(-self.re, -self.im)

    def __pos__(self):
        return self

    def conjugate(self) -> "GaussianRational":
        return GaussianRational._wrap(self.re, -self.im)

    def norm(self) -> Fraction:
        """Squared modulus ``re**2 + im**2``."""
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def __bool__(self):
        return not self.is_zero()

    # comparison -----------------------------------------------------------

    def __eq__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    # text -----------------------------------------------------------------

    def __str__(self):
        re_, im_ = self.re, self.im
        if not im_:
            return str(re_)
        if im_ == 1:
            ims = "i"
        elif im_ == -1:
            ims = "-i"
        else:
            ims = f"{im_}*i"
        if not re_:
            return ims
        if ims.startswith("-"):
            return f"{re_}{ims}"
        return f"{re_}+{ims}"

    def __repr__(self):
        return f"GaussianRational({self})"


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)

_NUM = r"\d+(?:/\d+)?"
_PART = re.compile(
    r"\s*([+-]?)\s*(?:(" + _NUM + r")\s*(\*\s*i)?|(i))\s*"
)


def parse_gaussian(text: str) -> GaussianRational:
    """Parse ``a``, ``b*i``, ``i``, ``a+b*i`` with rational ``a`` and ``b``.

    >>> parse_gaussian("1/2-3*i")
    GaussianRational(1/2-3*i)
    """
    pos = 0
    re_ = Fraction(0)
    im_ = Fraction(0)
    seen = 0
    n = len(text)
    while pos < n:
        m = _PART.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError("malformed complex number", pos, ["rational", "i"])
        sign, num, star_i, bare_i = m.groups()
        if seen and not sign:
            raise ParseError("missing sign between parts", pos, ["+", "-"])
        value = Fraction(num) if num else Fraction(1)
        if sign == "-":
            value = -value
        if star_i or bare_i:
            im_ += value
        else:
            re_ += value
        seen += 1
        pos = m.end()
    if not seen:
        raise ParseError("empty complex number", 0, ["rational", "i"])
    return GaussianRational(re_, im_)
