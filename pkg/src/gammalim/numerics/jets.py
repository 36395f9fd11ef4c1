"""Truncated Taylor series ("jets") with ExtReal coefficients.

A jet of degree D is the polynomial c_0 + c_1 w + ... + c_D w^D regarded
modulo w^(D+1).  Binary operations truncate to the smaller degree.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import DegreeZero, ZeroConstantTerm
from .extreal import DEFAULT_PREC, ExtReal, ext


@dataclass(frozen=True)
class Jet:
    coeffs: tuple

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("a jet needs at least one coefficient")
        if not isinstance(self.coeffs, tuple):
            object.__setattr__(self, "coeffs", tuple(self.coeffs))

    @classmethod
    def from_values(cls, values, prec=DEFAULT_PREC):
        return cls(tuple(ext(v, prec) for v in values))

    @classmethod
    def constant(cls, value, degree, prec=DEFAULT_PREC):
        zero = ExtReal(0, prec)
        return cls((ext(value, prec),) + (zero,) * degree)

    @classmethod
    def unit(cls, degree, prec=DEFAULT_PREC):
        return cls.constant(1, degree, prec)

    @classmethod
    def zero(cls, degree, prec=DEFAULT_PREC):
        return cls.constant(0, degree, prec)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def prec(self):
        return min(c.prec for c in self.coeffs)

    def __getitem__(self, j):
        return self.coeffs[j]

    def __len__(self):
        return len(self.coeffs)

    def truncate(self, degree):
        if degree > self.degree:
            raise ValueError("cannot raise the degree of a jet by truncation")
        return Jet(self.coeffs[: degree + 1])

    def __add__(self, other):
        return jet_add(self, other)

    def __sub__(self, other):
        return jet_add(self, jet_scale(other, -1))

    def __mul__(self, other):
        if isinstance(other, Jet):
            return jet_mul(self, other)
        return jet_scale(self, other)

    __rmul__ = __mul__

    def __neg__(self):
        return jet_scale(self, -1)

    def __call__(self, w):
        """Evaluate the truncated polynomial at ``w`` (Horner)."""
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * w + c
        return acc


def jet_add(a, b):
    d = min(a.degree, b.degree)
    return Jet(tuple(a.coeffs[j] + b.coeffs[j] for j in range(d + 1)))


def jet_scale(a, s):
    return Jet(tuple(c * s for c in a.coeffs))


def jet_mul(a, b):
    """Cauchy product truncated to the smaller degree."""
    d = min(a.degree, b.degree)
    ac, bc = a.coeffs, b.coeffs
    out = []
    for k in range(d + 1):
        acc = ac[0] * bc[k]
        for j in range(1, k + 1):
            acc = acc + ac[j] * bc[k - j]
        out.append(acc)
    return Jet(tuple(out))


def jet_reciprocal(a):
    """Jet ``b`` with ``a * b == 1`` through degree ``a.degree``."""
    c = a.coeffs
    if c[0].is_zero():
        raise ZeroConstantTerm("jet reciprocal needs a non-zero constant term")
    inv0 = 1 / c[0]
    out = [inv0]
    for k in range(1, len(c)):
        acc = c[1] * out[k - 1]
        for j in range(2, k + 1):
            acc = acc + c[j] * out[k - j]
        out.append(-acc * inv0)
    return Jet(tuple(out))


def jet_differentiate(a, times=1):
    """d/dw applied ``times`` times; each application lowers the degree by one."""
    for _ in range(times):
        if a.degree == 0:
            raise DegreeZero("cannot differentiate a degree-0 jet")
        a = Jet(tuple(a.coeffs[j + 1] * (j + 1) for j in range(a.degree)))
    return a


def jet_compose_affine(a, s):
    """Substitute w = s*u: coefficient j is multiplied by s**j."""
    out = []
    p = None
    for j, c in enumerate(a.coeffs):
        out.append(c if j == 0 else c * p)
        p = s if p is None else p * s
    return Jet(tuple(out))


def jet_exp_ode(log_derivative, c0):
    """Solve g' = g * L for the jet ``g`` with g(0) = c0.

    ``log_derivative`` is the jet of L; the result has degree one higher.
    Coefficient recurrence: (k+1) g_{k+1} = sum_{j<=k} L_j g_{k-j}.
    """
    lc = log_derivative.coeffs
    g = [c0]
    for k in range(len(lc)):
        acc = lc[0] * g[k]
        for j in range(1, k + 1):
            acc = acc + lc[j] * g[k - j]
        g.append(acc / (k + 1))
    return Jet(tuple(g))
