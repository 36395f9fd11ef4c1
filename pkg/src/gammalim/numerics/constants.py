"""pi and Euler's gamma at arbitrary precision, each cross-checked by two routes.

Both constants are computed in binary fixed point (Python integers scaled by
2**wp) so that neither route shares code with the special-function kernel.
"""

from __future__ import annotations

import math

from mpmath import libmp

from ._memo import once_per_key
from .extreal import ExtReal, _check_prec

_GUARD = 24


class ConstantMismatch(ArithmeticError):
    pass


def _fixed_to_ext(x, wp, prec):
    return ExtReal._wrap(libmp.from_man_exp(x, -wp, prec, libmp.round_nearest), prec)


def _acot_fixed(n, one):
    # arccot(n) = sum (-1)^k / ((2k+1) n^(2k+1))
    total = term = one // n
    n2 = n * n
    k = 1
    while term:
        term //= n2
        total += (-term if k % 2 else term) // (2 * k + 1)
        k += 1
    return total


def pi_machin(wp):
    """pi * 2**wp via Machin's formula 16 acot 5 - 4 acot 239."""
    one = 1 << (wp + 16)
    return (16 * _acot_fixed(5, one) - 4 * _acot_fixed(239, one)) >> 16


def pi_gauss_legendre(wp):
    """pi * 2**wp via the Gauss-Legendre AGM iteration."""
    w = wp + 32
    one = 1 << w
    a = one
    b = math.isqrt(one * one // 2)
    t = one // 4
    p = 1
    while abs(a - b) > 4:
        an = (a + b) // 2
        b = math.isqrt(a * b)
        t -= p * (a - an) ** 2 // one
        a = an
        p *= 2
    return ((a + b) ** 2 // (4 * t)) >> 32


def _ln_fixed(n, wp):
    # ln n via libmp (mpf_log is independent of the constants computed here)
    return libmp.to_fixed(libmp.mpf_log(libmp.from_int(n), wp + 8), wp)


def euler_brent_mcmillan(wp):
    """gamma * 2**wp via Brent-McMillan's Bessel-function formula (B1)."""
    w = wp + 32
    one = 1 << w
    n = int(wp * math.log(2) / 4) + 2
    n2 = n * n
    alpha = 3.59112147666862
    kmax = int(alpha * n) + 2
    ln_n = _ln_fixed(n, w)
    a = -ln_n
    b = one
    u = a
    v = b
    for k in range(1, kmax + 1):
        b = b * n2 // (k * k)
        a = (a * n2 // k + b) // k
        u += a
        v += b
    return (u * one // v) >> 32


def euler_maclaurin(wp):
    """gamma * 2**wp via H_N - ln N - 1/(2N) + sum B_2k / (2k N^2k)."""
    from .bernoulli import bernoulli

    w = wp + 32
    one = 1 << w
    n = max(10, int(0.12 * wp) + 10)
    h = sum(one // j for j in range(1, n))
    total = h + one // (2 * n) - _ln_fixed(n, w)
    # the correction series diverges past 2k ~ 2 pi N; stop once terms vanish
    k = 1
    while True:
        b = bernoulli(2 * k)
        term = one * b.numerator // (b.denominator * 2 * k * n ** (2 * k))
        if abs(term) < 2:
            break
        total += term
        k += 1
    # H_{N-1} + 1/(2N) corresponds to H_N - 1/(2N)
    return total >> 32


def _cross_checked(route_a, route_b, prec, name):
    wp = prec + _GUARD
    x = route_a(wp)
    y = route_b(wp)
    if abs(x - y) > (1 << (_GUARD + 16)):
        raise ConstantMismatch(f"{name}: independent routes disagree at {prec} bits")
    return _fixed_to_ext(x, wp, prec)


@once_per_key
def const_pi(prec):
    """pi to ``prec`` bits; Machin and Gauss-Legendre must agree first."""
    prec = _check_prec(prec)
    return _cross_checked(pi_machin, pi_gauss_legendre, prec, "pi")


@once_per_key
def const_euler_gamma(prec):
    """Euler-Mascheroni constant to ``prec`` bits, two routes cross-checked."""
    prec = _check_prec(prec)
    return _cross_checked(euler_brent_mcmillan, euler_maclaurin, prec, "euler_gamma")
