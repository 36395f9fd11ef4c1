"""Extended-precision real scalars with an explicit binary precision.

``ExtReal`` is a thin immutable wrapper around mpmath's raw ``mpf`` tuples.
Every operation passes its precision to libmp explicitly, so no global
context is ever read or mutated and values are safe to share between
threads.  Binary operations between values of different precision are
rounded to the smaller of the two precisions.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

from mpmath import libmp

MIN_PREC = 64
DEFAULT_PREC = 256

_RND = libmp.round_nearest


def _check_prec(prec):
    if int(prec) != prec or prec < MIN_PREC:
        raise ValueError(f"precision must be an integer >= {MIN_PREC}, got {prec!r}")
    return int(prec)


def _raw_from(value, prec):
    if isinstance(value, ExtReal):
        return libmp.normalize(*value._v, prec, _RND) if value._v[1] else value._v
    if isinstance(value, bool):
        value = int(value)
    if isinstance(value, int):
        return libmp.from_int(value, prec, _RND)
    if isinstance(value, Rational):
        return libmp.from_rational(int(value.numerator), int(value.denominator), prec, _RND)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError("non-finite floats are not representable")
        return libmp.from_float(value, prec, _RND)
    if isinstance(value, str):
        return _raw_from(Fraction(value.strip().replace("−", "-")), prec)
    if isinstance(value, tuple) and len(value) == 4:
        return libmp.normalize(*value, prec, _RND) if value[1] else value
    raise TypeError(f"cannot convert {type(value).__name__} to ExtReal")


class ExtReal:
    """Real number held to ``prec`` bits, correctly rounded on every operation."""

    __slots__ = ("_v", "prec")

    def __init__(self, value=0, prec=DEFAULT_PREC):
        prec = _check_prec(prec)
        object.__setattr__(self, "prec", prec)
        object.__setattr__(self, "_v", _raw_from(value, prec))

    def __setattr__(self, name, value):
        raise AttributeError("ExtReal is immutable")

    @classmethod
    def _wrap(cls, raw, prec):
        obj = object.__new__(cls)
        object.__setattr__(obj, "prec", prec)
        object.__setattr__(obj, "_v", raw)
        return obj

    def __reduce__(self):
        sign, man, exp, bc = self._v
        return (_unpickle, (sign, int(man), exp, bc, self.prec))

    @property
    def raw(self):
        """The underlying libmp ``(sign, man, exp, bc)`` tuple."""
        return self._v

    def with_prec(self, prec):
        """Round (or widen) to a new precision; widening is exact."""
        prec = _check_prec(prec)
        return ExtReal._wrap(_raw_from(self, prec), prec)

    # -- coercion ---------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, ExtReal):
            return other._v, min(self.prec, other.prec)
        try:
            return _raw_from(other, self.prec), self.prec
        except TypeError:
            return None, None

    def _binop(self, other, fn, swap=False):
        raw, prec = self._coerce(other)
        if raw is None:
            return NotImplemented
        a, b = (raw, self._v) if swap else (self._v, raw)
        return ExtReal._wrap(fn(a, b, prec, _RND), prec)

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        return self._binop(other, libmp.mpf_add)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binop(other, libmp.mpf_sub)

    def __rsub__(self, other):
        return self._binop(other, libmp.mpf_sub, swap=True)

    def __mul__(self, other):
        return self._binop(other, libmp.mpf_mul)

    __rmul__ = __mul__

    def __truediv__(self, other):
        raw, _ = self._coerce(other)
        if raw is not None and raw == libmp.fzero:
            raise ZeroDivisionError("ExtReal division by zero")
        return self._binop(other, libmp.mpf_div)

    def __rtruediv__(self, other):
        if self._v == libmp.fzero:
            raise ZeroDivisionError("ExtReal division by zero")
        return self._binop(other, libmp.mpf_div, swap=True)

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0 and self._v == libmp.fzero:
            raise ZeroDivisionError("zero to a negative power")
        return ExtReal._wrap(libmp.mpf_pow_int(self._v, n, self.prec, _RND), self.prec)

    def __neg__(self):
        return ExtReal._wrap(libmp.mpf_neg(self._v), self.prec)

    def __pos__(self):
        return self

    def __abs__(self):
        return ExtReal._wrap(libmp.mpf_abs(self._v), self.prec)

    def ldexp(self, n):
        """Exact multiplication by ``2**n``."""
        return ExtReal._wrap(libmp.mpf_shift(self._v, n), self.prec)

    # -- comparisons ------------------------------------------------------

    def _cmp(self, other):
        if isinstance(other, ExtReal):
            return libmp.mpf_cmp(self._v, other._v)
        if isinstance(other, (int, Rational)):
            # exact comparison: scale the rational instead of rounding it
            other = Fraction(other)
            return _sign(self.to_fraction() - other)
        if isinstance(other, float):
            return libmp.mpf_cmp(self._v, libmp.from_float(other))
        return None

    def __eq__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c == 0

    def __lt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c >= 0

    def __hash__(self):
        return hash(self.to_fraction())

    def __bool__(self):
        return self._v != libmp.fzero

    # -- conversions ------------------------------------------------------

    def __float__(self):
        return libmp.to_float(self._v)

    def __int__(self):
        return int(libmp.to_int(self._v))

    def to_fraction(self):
        p, q = libmp.to_rational(self._v)
        return Fraction(p, q)

    def nint(self):
        """Nearest integer (ties to even) as a Python int."""
        return int(libmp.to_int(libmp.mpf_nint(self._v, self.prec, _RND)))

    def is_integer(self):
        sign, man, exp, bc = self._v
        return man == 0 or exp >= 0

    @property
    def sign(self):
        return libmp.mpf_sign(self._v)

    def is_zero(self):
        return self._v == libmp.fzero

    def exponent(self):
        """``e`` with ``2**(e-1) <= |x| < 2**e``; ``None`` for zero."""
        sign, man, exp, bc = self._v
        return None if not man else exp + bc

    def ulp(self):
        """Weight of the last bit at this precision."""
        e = self.exponent()
        if e is None:
            return ExtReal._wrap(libmp.from_man_exp(1, -self.prec), self.prec)
        return ExtReal._wrap(libmp.from_man_exp(1, e - self.prec), self.prec)

    def to_decimal(self, digits=None):
        """Decimal string with ``digits`` significant digits (default ceil(0.302 P))."""
        if digits is None:
            digits = decimal_digits(self.prec)
        if self.is_integer() and abs(self._v[1]) and self.exponent() <= 3.3 * digits:
            return str(int(self))
        if self.is_zero():
            return "0"
        return libmp.to_str(self._v, digits, strip_zeros=False)

    def __str__(self):
        return self.to_decimal(min(decimal_digits(self.prec), 30))

    def __repr__(self):
        return f"ExtReal('{self.to_decimal()}', prec={self.prec})"

    # -- elementary functions --------------------------------------------

    def sqrt(self):
        if self.sign < 0:
            raise ValueError("square root of a negative number")
        return ExtReal._wrap(libmp.mpf_sqrt(self._v, self.prec, _RND), self.prec)

    def exp(self):
        return ExtReal._wrap(libmp.mpf_exp(self._v, self.prec, _RND), self.prec)

    def log(self):
        if self.sign <= 0:
            raise ValueError("logarithm of a non-positive number")
        return ExtReal._wrap(libmp.mpf_log(self._v, self.prec, _RND), self.prec)

    def sin(self):
        return ExtReal._wrap(libmp.mpf_sin(self._v, self.prec, _RND), self.prec)

    def cos(self):
        return ExtReal._wrap(libmp.mpf_cos(self._v, self.prec, _RND), self.prec)

    def cos_sin(self):
        c, s = libmp.mpf_cos_sin(self._v, self.prec, _RND)
        return ExtReal._wrap(c, self.prec), ExtReal._wrap(s, self.prec)


def _sign(x):
    return (x > 0) - (x < 0)


def decimal_digits(prec):
    """Significant decimal digits printed for a precision of ``prec`` bits."""
    return math.ceil(prec * 0.302)


def ext(value, prec=DEFAULT_PREC):
    """Coerce ``value`` to an ExtReal at ``prec`` bits (ExtReals are re-rounded)."""
    if isinstance(value, ExtReal) and value.prec == prec:
        return value
    return ExtReal(value, prec)


def rel_error(a, b):
    """``|a/b - 1|`` as an ExtReal, or ``|a|`` when ``b`` is zero."""
    if b == 0:
        return abs(a)
    return abs(a / b - 1)


def _unpickle(sign, man, exp, bc, prec):
    return ExtReal._wrap((sign, libmp.MPZ(man), exp, bc), prec)
