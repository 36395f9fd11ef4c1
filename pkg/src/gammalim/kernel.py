"""Pointwise Gamma, log-Gamma, polygamma and cotangent derivatives on the real line.

All routines take an output precision ``prec`` (bits), compute internally
with ``config.guard_bits`` extra bits and round once at the end.  Negative
arguments go through Euler reflection; the sine and cotangent factors are
evaluated on the argument reduced modulo 1, which is exact in binary, so
nothing cancels as the argument approaches a pole.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from mpmath import libmp

from .errors import CotPole, GammaLimError, NonPositiveArgument, PoleArgument
from .numerics import DEFAULT_PREC, ExtReal, bernoulli, const_pi, ext


class NearPoleArgument(GammaLimError, ValueError):
    """Argument too close to a pole for the pointwise recurrences."""


@dataclass(frozen=True)
class KernelConfig:
    # below this pole distance gamma_derivative defers to poles.eval_near_pole
    min_pole_distance: Fraction = Fraction(1, 8)
    # asymptotic series are applied once x >= max(asymptotic_min, P / asymptotic_prec_divisor)
    asymptotic_min: int = 20
    asymptotic_prec_divisor: int = 8
    guard_bits: int = 32
    # positive integers up to this bound take the exact factorial path
    exact_factorial_limit: int = 2000


DEFAULT_CONFIG = KernelConfig()


@dataclass(frozen=True)
class EvalPoint:
    """A real argument together with its distance to the nearest pole 0, -1, -2, ..."""

    x: ExtReal
    pole_distance: ExtReal

    @classmethod
    def of(cls, x, prec=DEFAULT_PREC):
        if isinstance(x, EvalPoint):
            return x
        x = ext(x, prec) if not isinstance(x, ExtReal) else x
        if x >= 0:
            return cls(x, x)
        n = min(x.nint(), 0)
        return cls(x, abs(_exact_sub(x, n)))

    @property
    def on_pole(self):
        return self.pole_distance.is_zero()

    @property
    def nearest_pole(self):
        """Index m of the nearest pole -m."""
        return 0 if self.x >= 0 else -min(self.x.nint(), 0)


def _exact_sub(x, n):
    """x - n without rounding (result keeps x's nominal precision)."""
    return ExtReal._wrap(libmp.mpf_sub(x.raw, libmp.from_int(n)), x.prec)


def _exact_rsub(n, x):
    return ExtReal._wrap(libmp.mpf_sub(libmp.from_int(n), x.raw), x.prec)


def _point(x, prec, config):
    pt = EvalPoint.of(x, prec + config.guard_bits)
    wx = pt.x if pt.x.prec >= prec + config.guard_bits else pt.x.with_prec(prec + config.guard_bits)
    return pt, wx


def _asymptotic_threshold(prec, config):
    return max(config.asymptotic_min, -(-prec // config.asymptotic_prec_divisor))


# -- sine / cotangent on the reduced argument --------------------------------


def _sin_pi(x, wp):
    """sin(pi x) using the exact reduction x = n + t, |t| <= 1/2."""
    n = x.nint()
    t = _exact_sub(x, n).with_prec(wp)
    s = (const_pi(wp) * t).sin()
    return -s if n % 2 else s


def _cot_pi(x, wp):
    n = x.nint()
    t = _exact_sub(x, n).with_prec(wp)
    if t.is_zero():
        raise CotPole(f"cot(pi x) has a pole at x = {n}")
    c, s = (const_pi(wp) * t).cos_sin()
    return c / s


_cot_table = [(0, 1)]
_cot_lock = threading.Lock()


def cot_derivative_polynomial(i):
    """Integer coefficients (by ascending power of c) of P_i with cot^(i)(x) = P_i(cot x).

    P_0(c) = c and P_{i+1}(c) = -(1 + c^2) P_i'(c).
    """
    if i < 0:
        raise ValueError("derivative order must be non-negative")
    if i >= len(_cot_table):
        with _cot_lock:
            while len(_cot_table) <= i:
                p = _cot_table[-1]
                dp = [j * p[j] for j in range(1, len(p))]
                nxt = [0] * (len(dp) + 2)
                for j, a in enumerate(dp):
                    nxt[j] -= a
                    nxt[j + 2] -= a
                _cot_table.append(tuple(nxt))
    return _cot_table[i]


def _eval_int_poly(coeffs, c):
    acc = ExtReal(coeffs[-1], c.prec)
    for a in reversed(coeffs[:-1]):
        acc = acc * c + a
    return acc


def cot_derivative(i, x, prec=None):
    """i-th derivative of cot evaluated at ``x`` (radians)."""
    x = ext(x, prec or DEFAULT_PREC) if not isinstance(x, ExtReal) else x
    prec = prec or x.prec
    wp = prec + 16
    c, s = x.with_prec(wp).cos_sin()
    if x.is_zero() or s.exponent() < -(wp - 8) + (x.exponent() or 0):
        raise CotPole(f"cot has a pole at {x}")
    return _eval_int_poly(cot_derivative_polynomial(i), c / s).with_prec(prec)


def _cot_pi_derivative(i, x, wp):
    """pi^(i+1) * cot^(i)(pi x), the reflection term for polygamma."""
    c = _cot_pi(x, wp)
    return _eval_int_poly(cot_derivative_polynomial(i), c) * const_pi(wp) ** (i + 1)


# -- log Gamma / Gamma ---------------------------------------------------------


def _shift_count(x, threshold):
    return max(0, int(threshold - float(x)) + 1) if x < threshold else 0


def _log_gamma_pos(x, wp, config):
    threshold = _asymptotic_threshold(wp, config)
    while True:
        shift = _shift_count(x, threshold)
        y = x + shift
        yinv = 1 / y
        y2inv = yinv * yinv
        eps = ExtReal(1, wp).ldexp(-wp)
        pi = const_pi(wp)
        acc = (y - Fraction(1, 2)) * y.log() - y + (2 * pi).log() / 2
        scale = abs(acc) + 1
        power = yinv
        prev = None
        converged = False
        for k in range(1, wp):
            b = bernoulli(2 * k)
            term = power * Fraction(b.numerator, b.denominator * 2 * k * (2 * k - 1))
            mag = abs(term)
            if mag <= eps * scale:
                converged = True
                break
            if prev is not None and mag > prev:
                break
            acc = acc + term
            prev = mag
            power = power * y2inv
        if converged:
            break
        threshold *= 2
    if shift:
        prod = ExtReal(1, wp)
        for j in range(shift):
            prod = prod * (x + j)
        acc = acc - prod.log()
    return acc


def log_gamma(x, prec=DEFAULT_PREC, config=DEFAULT_CONFIG):
    """ln Gamma(x) for x > 0."""
    x = x.x if isinstance(x, EvalPoint) else x
    wp = prec + config.guard_bits
    wx = ext(x, wp) if not isinstance(x, ExtReal) else x.with_prec(max(x.prec, wp))
    if wx <= 0:
        raise NonPositiveArgument(f"log_gamma needs x > 0, got {wx}")
    if wx.is_integer() and wx <= config.exact_factorial_limit:
        return ExtReal(factorial(int(wx) - 1), wp).log().with_prec(prec)
    return _log_gamma_pos(wx, wp, config).with_prec(prec)


def _gamma_pos(x, wp, config):
    if x.is_integer() and x <= config.exact_factorial_limit:
        return ExtReal(factorial(int(x) - 1), wp)
    extra = (abs(x) + 2).exponent() + 8
    return _log_gamma_pos(x.with_prec(wp + extra), wp + extra, config).exp().with_prec(wp)


def gamma(x, prec=DEFAULT_PREC, config=DEFAULT_CONFIG):
    """Gamma(x) for real x off the poles; x < 1/2 goes through reflection."""
    pt, wx = _point(x, prec, config)
    if pt.on_pole:
        raise PoleArgument(pt.x.to_decimal(), 1)
    wp = wx.prec
    if wx >= Fraction(1, 2):
        return _gamma_pos(wx, wp, config).with_prec(prec)
    one_minus = _exact_rsub(1, wx)
    g = _gamma_pos(one_minus, wp, config)
    return (const_pi(wp) / (_sin_pi(wx, wp) * g)).with_prec(prec)


# -- polygamma ------------------------------------------------------------------


def _polygamma_asymptotic(i, y, wp):
    """Asymptotic expansion at large y; returns None if it diverges before converging."""
    eps = ExtReal(1, wp).ldexp(-wp)
    yinv = 1 / y
    y2inv = yinv * yinv
    if i == 0:
        acc = y.log() - yinv / 2
        power = y2inv
    else:
        lead = yinv ** i
        acc = lead * factorial(i - 1) + lead * yinv * Fraction(factorial(i), 2)
        power = lead * y2inv
    scale = abs(acc)
    prev = None
    # (2k+i-1)! / (2k)! for k = 1, updated in place
    fact_ratio = Fraction(factorial(i + 1), 2) if i else None
    for k in range(1, 4 * wp):
        b = bernoulli(2 * k)
        if i == 0:
            coef = Fraction(b.numerator, b.denominator * 2 * k)
            term = -(power * coef)
        else:
            term = power * (b * fact_ratio)
            fact_ratio = fact_ratio * Fraction((2 * k + i) * (2 * k + i + 1), (2 * k + 1) * (2 * k + 2))
        mag = abs(term)
        if mag <= eps * scale:
            break
        if prev is not None and mag > prev:
            return None
        acc = acc + term
        prev = mag
        power = power * y2inv
    else:
        return None
    if i and i % 2 == 0:
        acc = -acc
    return acc


def _polygamma_pos(i, x, wp, config):
    threshold = max(_asymptotic_threshold(wp, config), i // 2)
    while True:
        shift = _shift_count(x, threshold)
        asym = _polygamma_asymptotic(i, x + shift, wp)
        if asym is not None:
            break
        threshold *= 2
    if not shift:
        return asym
    s = ExtReal(0, wp)
    if i == 0:
        for j in range(shift):
            s = s + 1 / (x + j)
        return asym - s
    for j in range(shift):
        s = s + (x + j) ** (-(i + 1))
    s = s * factorial(i)
    # psi^(i)(x) = psi^(i)(x + S) + (-1)^(i+1) i! sum_{j<S} (x+j)^-(i+1)
    return asym + s if i % 2 else asym - s


def polygamma(i, x, prec=DEFAULT_PREC, config=DEFAULT_CONFIG):
    """psi^(i)(x) for real x off the poles."""
    if i < 0:
        raise ValueError("polygamma order must be non-negative")
    pt, wx = _point(x, prec, config)
    if pt.on_pole:
        raise PoleArgument(pt.x.to_decimal(), i + 1)
    wp = wx.prec
    if wx > 0:
        return _polygamma_pos(i, wx, wp, config).with_prec(prec)
    # (-1)^i psi^(i)(1-x) - psi^(i)(x) = pi^(i+1) cot^(i)(pi x)
    extra = (abs(wx) + 2).exponent() * (i + 1)
    wp2 = wp + extra
    wx2 = wx.with_prec(wp2)
    mirrored = _polygamma_pos(i, _exact_rsub(1, wx2), wp2, config)
    if i % 2:
        mirrored = -mirrored
    return (mirrored - _cot_pi_derivative(i, wx2, wp2)).with_prec(prec)


def gamma_derivative(i, x, prec=DEFAULT_PREC, config=DEFAULT_CONFIG):
    """Gamma^(i)(x) via G_{k+1} = sum_j C(k, j) G_j psi^(k-j) starting from G_0 = Gamma(x)."""
    if i < 0:
        raise ValueError("derivative order must be non-negative")
    if i == 0:
        return gamma(x, prec, config)
    pt, wx = _point(x, prec, config)
    if pt.on_pole:
        raise PoleArgument(pt.x.to_decimal(), i + 1)
    if pt.pole_distance < config.min_pole_distance:
        raise NearPoleArgument(
            f"x = {pt.x} lies within {config.min_pole_distance} of pole "
            f"-{pt.nearest_pole}; use poles.eval_near_pole instead"
        )
    wp = wx.prec + 8 * i
    wx = wx.with_prec(wp)
    psis = [polygamma(j, wx, wp, config) for j in range(i)]
    gs = [gamma(wx, wp, config)]
    for k in range(i):
        acc = ExtReal(0, wp)
        for j in range(k + 1):
            acc = acc + gs[j] * psis[k - j] * comb(k, j)
        gs.append(acc)
    return gs[i].with_prec(prec)
