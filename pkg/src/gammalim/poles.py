"""Laurent expansions of Gamma, Gamma^(i) and psi^(i) around the poles z = -m.

Near z = -m write w = z + m and

    Gamma(-m + w) = (-1)^m / (m! w) * f_m(w),

where f_m is analytic on |w| < 1 with f_m(0) = 1.  By reflection

    f_m(w) = [pi w / sin(pi w)] * [m! / Gamma(1 + m - w)],

and both factors have explicit Taylor coefficients: the first from even
Bernoulli numbers, the second from the ODE g' = g * psi(1 + m - w).
Everything else in this module (derivatives of Gamma, the polygamma
principal parts, pole-aware evaluation) is built from these jets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

from mpmath import libmp

from . import kernel
from .errors import ExactPole, OutOfRadius, PrecisionExhausted
from .numerics import (
    DEFAULT_PREC,
    ExtReal,
    Jet,
    bernoulli,
    const_pi,
    decimal_digits,
    ext,
    jet_differentiate,
    jet_exp_ode,
    jet_mul,
    jet_reciprocal,
)
from .numerics._memo import once_per_key

DEFAULT_DEGREE = 16
# half of the radius 1/4 on which the factorization is stated
NEAR_POLE_RADIUS = Fraction(1, 8)
_GUARD = 32

FUNCTIONS = ("gamma", "gamma_deriv", "psi_deriv")


class DualPathMismatch(ArithmeticError):
    """Leibniz and termwise constructions of a Gamma^(i) expansion disagree."""


@dataclass(frozen=True)
class LaurentSeries:
    """sum_{j=-p}^{top} a_j w^j with w = z + m, valid for 0 < |w| < 1/4.

    ``coeffs[0]`` is a_{-p}; ``exact_leading`` holds the closed-form value of
    a_{-p} when one is known.
    """

    pole_index: int
    pole_order: int
    coeffs: tuple
    function: str = "gamma"
    derivative_order: int = 0
    exact_leading: Fraction | None = field(default=None, compare=False)

    def __post_init__(self):
        if not isinstance(self.coeffs, tuple):
            object.__setattr__(self, "coeffs", tuple(self.coeffs))
        if self.pole_order < 0:
            raise ValueError("pole order must be non-negative")
        if len(self.coeffs) <= self.pole_order:
            raise ValueError("a Laurent series must reach at least the w^0 term")

    @property
    def top_power(self):
        return len(self.coeffs) - 1 - self.pole_order

    @property
    def prec(self):
        return min(c.prec for c in self.coeffs)

    @property
    def leading(self):
        return self.coeffs[0]

    def powers(self):
        return range(-self.pole_order, self.top_power + 1)

    def coeff(self, power):
        if power > self.top_power:
            raise IndexError(f"w^{power} is beyond the truncation order {self.top_power}")
        if power < -self.pole_order:
            return ExtReal(0, self.prec)
        return self.coeffs[power + self.pole_order]

    def regular_part(self):
        """Jet of the w^0 .. w^top coefficients."""
        return Jet(self.coeffs[self.pole_order :])

    def differentiate(self):
        """Termwise d/dw; a pole of order p > 0 becomes one of order p + 1."""
        p = self.pole_order
        if p == 0:
            if len(self.coeffs) < 2:
                raise ValueError("nothing left to differentiate")
            out = tuple(self.coeffs[j] * j for j in range(1, len(self.coeffs)))
            return LaurentSeries(self.pole_index, 0, out, self.function, self.derivative_order + 1)
        out = tuple(c * j for j, c in zip(self.powers(), self.coeffs))
        lead = None if self.exact_leading is None else self.exact_leading * -p
        return LaurentSeries(
            self.pole_index, p + 1, out, self.function, self.derivative_order + 1, lead
        )

    def compose_affine(self, s):
        """Series in u with w = s*u: a_j becomes a_j s^j (including negative j)."""
        s = ext(s, self.prec) if not isinstance(s, ExtReal) else s
        out = [c * s ** j for j, c in zip(self.powers(), self.coeffs)]
        return LaurentSeries(
            self.pole_index, self.pole_order, tuple(out), self.function, self.derivative_order
        )

    def __mul__(self, other):
        p = self.pole_order + other.pole_order
        top = min(self.top_power - other.pole_order, other.top_power - self.pole_order)
        out = []
        for power in range(-p, top + 1):
            acc = None
            for j in self.powers():
                k = power - j
                if -other.pole_order <= k <= other.top_power:
                    t = self.coeff(j) * other.coeff(k)
                    acc = t if acc is None else acc + t
            out.append(acc)
        return LaurentSeries(self.pole_index, p, tuple(out), "product")

    def terms(self, w):
        """The individual terms a_j w^j, lowest power first."""
        w = ext(w, self.prec) if not isinstance(w, ExtReal) else w
        return [c * w ** j for j, c in zip(self.powers(), self.coeffs)]

    def evaluate(self, w):
        """Sum of the series at ``w`` (Horner on the regular factor, then w^-p)."""
        return self.evaluate_with_error(w)[0]

    def evaluate_with_error(self, w):
        """(value, truncation-error estimate).

        The estimate is twice the larger of the last two retained terms, a
        geometric-tail heuristic for |w| <= 1/8.
        """
        prec = self.prec
        rnd = libmp.round_nearest
        wr = ext(w, prec).raw if not isinstance(w, ExtReal) else w.raw
        raws = [c.raw for c in self.coeffs]
        acc = raws[-1]
        for c in reversed(raws[:-1]):
            acc = libmp.mpf_add(libmp.mpf_mul(acc, wr, prec, rnd), c, prec, rnd)
        if self.pole_order:
            acc = libmp.mpf_mul(acc, libmp.mpf_pow_int(wr, -self.pole_order, prec, rnd), prec, rnd)
        wpow = libmp.mpf_pow_int(wr, self.top_power - 1, prec, rnd)
        t1 = libmp.mpf_abs(libmp.mpf_mul(raws[-2], wpow, prec, rnd)) if len(raws) > 1 else libmp.fzero
        t2 = libmp.mpf_abs(libmp.mpf_mul(raws[-1], libmp.mpf_mul(wpow, wr, prec, rnd), prec, rnd))
        est = libmp.mpf_shift(t1 if libmp.mpf_cmp(t1, t2) > 0 else t2, 1)
        return ExtReal._wrap(acc, prec), ExtReal._wrap(est, prec)

    def to_json_dict(self, digits=None):
        digits = digits or decimal_digits(self.prec)
        doc = {
            "function": self.function,
            "pole_index": self.pole_index,
            "pole_order": self.pole_order,
            "precision_bits": self.prec,
            "coefficients": [
                {"power": j, "value": c.to_decimal(digits)} for j, c in zip(self.powers(), self.coeffs)
            ],
        }
        if self.function != "gamma" or self.derivative_order:
            doc["derivative_order"] = self.derivative_order
        if self.exact_leading is not None:
            doc["leading_coefficient"] = _fraction_str(self.exact_leading)
        return doc


def _fraction_str(q):
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class FnJet:
    """Taylor jet of f_m(-m + w) in w."""

    m: int
    jet: Jet

    @property
    def coeffs(self):
        return self.jet.coeffs

    @property
    def degree(self):
        return self.jet.degree


# -- the analytic factor f_m ----------------------------------------------------


def pi_w_over_sin_jet(degree, prec):
    """Jet of pi w / sin(pi w): only even powers, from B_2j."""
    pi2 = const_pi(prec) ** 2
    zero = ExtReal(0, prec)
    out = [zero] * (degree + 1)
    pw = ExtReal(1, prec)
    for j in range(degree // 2 + 1):
        b = bernoulli(2 * j)
        q = Fraction((-1) ** (j + 1) * (2 ** (2 * j) - 2) * b.numerator, b.denominator * factorial(2 * j))
        out[2 * j] = pw * q
        pw = pw * pi2
    return Jet(tuple(out))


def reciprocal_gamma_shift_jet(m, degree, prec):
    """Jet of m! / Gamma(1 + m - w).

    Its logarithmic derivative is psi(1 + m - w) = sum_j psi^(j)(1+m) (-w)^j / j!.
    """
    if degree == 0:
        return Jet.unit(0, prec)
    log_der = []
    for j in range(degree):
        v = kernel.polygamma(j, m + 1, prec) / factorial(j)
        log_der.append(-v if j % 2 else v)
    return jet_exp_ode(Jet(tuple(log_der)), ExtReal(1, prec))


@once_per_key
def _fn_jet(m, degree, prec):
    wp = prec + _GUARD
    f = jet_mul(pi_w_over_sin_jet(degree, wp), reciprocal_gamma_shift_jet(m, degree, wp))
    return FnJet(m, Jet(tuple(c.with_prec(prec) for c in f.coeffs)))


def fn_jet(m, degree=DEFAULT_DEGREE, prec=DEFAULT_PREC):
    """Taylor jet at w = 0 of f_m, the analytic factor of Gamma at -m."""
    if m < 0 or degree < 0:
        raise ValueError("pole index and degree must be non-negative")
    return _fn_jet(int(m), int(degree), int(prec))


# -- Laurent series -------------------------------------------------------------


def _residue(m):
    return Fraction((-1) ** m, factorial(m))


def gamma_laurent(m, degree=DEFAULT_DEGREE, prec=DEFAULT_PREC):
    """Gamma around -m: simple pole with residue (-1)^m / m!, terms through w^(degree-1)."""
    f = fn_jet(m, degree, prec)
    r = _residue(m)
    return LaurentSeries(m, 1, tuple(c * r for c in f.coeffs), "gamma", 0, r)


def _leibniz_laurent(i, m, degree, prec):
    """Coefficients of Gamma^(i) at -m by the product rule, with per-power summand scales.

    Gamma^(i) = ((-1)^m/m!) sum_l C(i,l) (-1)^l l! w^-(l+1) f_m^(i-l)(w)
    """
    f = fn_jet(m, degree, prec).jet
    zero = ExtReal(0, prec)
    size = degree + 1
    out = [zero] * size
    scale = [zero] * size
    r = _residue(m)
    for ell in range(i + 1):
        weight = r * comb(i, ell) * (-1) ** ell * factorial(ell)
        df = jet_differentiate(f, i - ell) if i > ell else f
        for t, c in enumerate(df.coeffs):
            slot = t - ell + i  # power t - (ell + 1), offset by the pole order i + 1
            term = c * weight
            out[slot] = out[slot] + term
            scale[slot] = scale[slot] + abs(term)
    return tuple(out), tuple(scale)


def _termwise_laurent(i, m, degree, prec):
    s = gamma_laurent(m, degree, prec)
    for _ in range(i):
        s = s.differentiate()
    return s.coeffs


def dual_path_discrepancy(a, b, scale, prec):
    """|a - b| measured in units of 2^-P times max(|a|, |b|, summand scale)."""
    ref = max(abs(a), abs(b), scale)
    if ref.is_zero():
        return ExtReal(0, prec)
    return abs(a - b) / ref * ExtReal(1, prec).ldexp(prec)


@once_per_key
def _gamma_derivative_laurent(i, m, degree, prec, method):
    if method == "termwise":
        coeffs = _termwise_laurent(i, m, degree, prec)
    else:
        coeffs, scales = _leibniz_laurent(i, m, degree, prec)
    if method == "both":
        other = _termwise_laurent(i, m, degree, prec)
        limit = 2**40
        bad = [
            j - i - 1
            for j, (a, b, s) in enumerate(zip(coeffs, other, scales))
            if dual_path_discrepancy(a, b, s, prec) > limit
        ]
        if bad:
            raise DualPathMismatch(
                f"Gamma^({i}) at -{m}: Leibniz and termwise coefficients differ at powers {bad}"
            )
        # termwise differentiation produces the structural zeros exactly
        coeffs = tuple(b if b.is_zero() else a for a, b in zip(coeffs, other))
    lead = Fraction((-1) ** (m + i) * factorial(i), factorial(m))
    return LaurentSeries(m, i + 1, coeffs, "gamma_deriv", i, lead)


def gamma_derivative_laurent(i, m, degree=DEFAULT_DEGREE, prec=DEFAULT_PREC, method="both"):
    """Gamma^(i) around -m: pole of order i + 1, terms through w^(degree-i-1).

    ``method`` is "leibniz" (product rule on the factorization), "termwise"
    (differentiate the Gamma series i times) or "both", which builds the two
    and raises DualPathMismatch unless every coefficient agrees to 2^(40-P).
    """
    if i < 0 or m < 0:
        raise ValueError("derivative order and pole index must be non-negative")
    if degree < i + 1:
        raise ValueError(f"degree must be at least {i + 1} to reach the w^0 term")
    if method not in ("leibniz", "termwise", "both"):
        raise ValueError(f"unknown method {method!r}")
    return _gamma_derivative_laurent(int(i), int(m), int(degree), int(prec), method)


@once_per_key
def _psi_laurent(i, m, degree, prec):
    f = fn_jet(m, degree, prec).jet
    log_der = jet_mul(jet_differentiate(f), jet_reciprocal(f.truncate(degree - 1)))
    regular = jet_differentiate(log_der, i) if i else log_der
    principal = Fraction((-1) ** (i + 1) * factorial(i))
    zero = ExtReal(0, prec)
    coeffs = (ExtReal(principal, prec),) + (zero,) * i + regular.coeffs
    return LaurentSeries(m, i + 1, coeffs, "psi_deriv", i, principal)


def psi_laurent(i, m, degree=DEFAULT_DEGREE, prec=DEFAULT_PREC):
    """psi^(i) around -m: (-1)^(i+1) i! / w^(i+1) plus the i-th derivative of f_m'/f_m."""
    if i < 0 or m < 0:
        raise ValueError("derivative order and pole index must be non-negative")
    if degree < i + 1:
        raise ValueError(f"degree must be at least {i + 1} to reach the w^0 term")
    return _psi_laurent(int(i), int(m), int(degree), int(prec))


def laurent(function, order, m, degree=DEFAULT_DEGREE, prec=DEFAULT_PREC):
    """Dispatch on ``function`` in {"gamma", "gamma_deriv", "psi_deriv"}."""
    function = _canonical(function)
    if function == "psi_deriv":
        return psi_laurent(order, m, degree, prec)
    if order == 0:
        return gamma_laurent(m, degree, prec)
    return gamma_derivative_laurent(order, m, degree, prec)


def _canonical(function):
    aliases = {"psi": "psi_deriv", "polygamma": "psi_deriv", "digamma": "psi_deriv"}
    function = aliases.get(function, function)
    if function not in FUNCTIONS:
        raise ValueError(f"unknown function {function!r}; expected one of {FUNCTIONS}")
    return function


# -- evaluation inside the pole neighbourhood ---------------------------------


def degree_for(order, radius, prec):
    """Smallest multiple of 16 whose truncated series should reach 2^(32-P) at |w| = radius."""
    bits = -math.log2(float(radius))
    need = (prec - 32 + 8) / bits + 4
    d = order + 1 + max(0, int(math.ceil(need)))
    return max(DEFAULT_DEGREE, -(-d // 16) * 16)


def series_for(function, order, m, radius, prec=DEFAULT_PREC, max_degree=None):
    """Laurent series accurate to about 2^(32-P) relative for 0 < |w| <= radius."""
    function = _canonical(function)
    radius = ext(radius, prec)
    target = ExtReal(1, prec).ldexp(32 - prec)
    degree = degree_for(order, radius, prec)
    max_degree = max_degree or 8 * prec
    while degree <= max_degree:
        s = laurent(function, order, m, degree, prec)
        value, est = s.evaluate_with_error(radius)
        if not value.is_zero() and est <= target * abs(value):
            return s
        degree += 16
    raise PrecisionExhausted(
        f"{function}({order}) at -{m}: no degree <= {max_degree} reaches 2^{32 - prec} at |w| = {radius}"
    )


def eval_near_pole(function, z, prec=DEFAULT_PREC, order=0, radius=NEAR_POLE_RADIUS):
    """Evaluate Gamma, Gamma^(order) or psi^(order) at z with 0 < |z + m| < radius.

    The degree of the expansion grows until its truncation estimate falls
    below 2^(32-P) relative to the value.
    """
    function = _canonical(function)
    if function == "gamma" and order:
        function = "gamma_deriv"
    if function == "gamma_deriv" and order == 0:
        function = "gamma"
    z = ext(z, prec) if not isinstance(z, ExtReal) else z
    m = max(0, -z.nint())
    w = ExtReal._wrap(libmp.mpf_add(z.raw, libmp.from_int(m)), prec)
    if w.is_zero():
        raise ExactPole(f"-{m}", order + 1)
    if abs(w) >= radius:
        raise OutOfRadius(f"|z + {m}| = {abs(w)} is not below the working radius {radius}")
    s = series_for(function, order, m, abs(w), prec)
    return s.evaluate(w)


def gamma_taylor_jet(x0, degree, prec=DEFAULT_PREC):
    """Taylor jet of Gamma at a regular point x0, from f_0(w) = Gamma(1 + w).

    The f_0 jet is re-centred at y = x0 - round(x0) (|y| <= 1/2), then the
    integer shift to x0 is applied with the recurrence Gamma(z + 1) = z Gamma(z).
    """
    wp = prec + _GUARD
    x0 = ext(x0, wp)
    n = x0.nint()
    y = ExtReal._wrap(libmp.mpf_sub(x0.raw, libmp.from_int(n)), wp)
    if y.is_zero() and n <= 0:
        raise ExactPole(str(n), 1)
    if y.is_zero():
        big = degree
    else:
        bits = -math.log2(abs(float(y)))
        big = degree + int((wp + 16 + degree * math.log2(wp)) / bits) + 1
    f = fn_jet(0, big, wp).coeffs
    centred = []
    for r in range(degree + 1):
        acc = ExtReal(0, wp)
        if y.is_zero():
            acc = f[r]
        else:
            ypow = ExtReal(1, wp)
            for j in range(r, big + 1):
                acc = acc + f[j] * ypow * comb(j, r)
                ypow = ypow * y
        centred.append(acc)
    g = Jet(tuple(centred))
    shift = n - 1  # x0 = 1 + y + shift
    base = 1 + y
    if shift > 0:
        for j in range(shift):
            g = jet_mul(g, Jet.from_values([base + j, 1] + [0] * (degree - 1), wp))
    elif shift < 0:
        for j in range(1, -shift + 1):
            g = jet_mul(g, jet_reciprocal(Jet.from_values([base - j, 1] + [0] * (degree - 1), wp)))
    return Jet(tuple(c.with_prec(prec) for c in g.coeffs))
