"""Ratio limits of Gamma^(i) and psi^(i) at the poles: closed forms and numerics.

For positive integers n, q and non-negative integers i, k:

    lim_{z -> -k} Gamma^(i)(nz) / Gamma^(i)(qz) = (-1)^((n-q)k) (q/n)^(i+1) (qk)! / (nk)!
    lim_{z -> -k} psi^(i)(nz)   / psi^(i)(qz)   = (q/n)^(i+1)

The closed forms are exact rationals.  ``numeric_ratio_limit`` estimates the
same limits independently: it samples the ratio at z = -k +/- h0 r^j,
evaluating numerator and denominator from their Laurent expansions at the
scaled poles -nk and -qk, and Richardson-extrapolates h -> 0.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import factorial

from . import kernel, poles
from .errors import GammaLimError, PrecisionExhausted, ScheduleOutOfRadius
from .numerics import DEFAULT_PREC, ExtReal, decimal_digits, ext

FAMILIES = ("gamma_deriv", "psi_deriv")
_FAMILY_ALIASES = {"gamma": "gamma_deriv", "psi": "psi_deriv", "polygamma": "psi_deriv"}

DEFAULT_H0 = Fraction(1, 64)
DEFAULT_RATIO = Fraction(1, 2)
DEFAULT_STEPS = 24
DEFAULT_TOL = Fraction(1, 10**15)
DEFAULT_TWO_SIDED_TOL = Fraction(1, 10**12)


def canonical_family(family):
    family = _FAMILY_ALIASES.get(family, family)
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
    return family


@dataclass(frozen=True)
class RatioLimitSpec:
    family: str
    n: int
    q: int
    i: int
    k: int

    def __post_init__(self):
        object.__setattr__(self, "family", canonical_family(self.family))
        for name in ("n", "q", "i", "k"):
            v = getattr(self, name)
            if isinstance(v, bool) or int(v) != v:
                raise ValueError(f"{name} must be an integer, got {v!r}")
            object.__setattr__(self, name, int(v))
        if self.n < 1 or self.q < 1:
            raise ValueError("n and q must be positive integers")
        if self.i < 0 or self.k < 0:
            raise ValueError("i and k must be non-negative integers")

    def to_json_dict(self):
        return {"family": self.family, "n": self.n, "q": self.q, "i": self.i, "k": self.k}


@dataclass(frozen=True)
class ClosedFormValue:
    sign: int
    magnitude: Fraction

    @property
    def value(self):
        return self.sign * self.magnitude

    def to_ext(self, prec=DEFAULT_PREC):
        return ExtReal(self.value, prec)

    def __str__(self):
        v = self.value
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"

    def to_json_dict(self):
        return {"sign": self.sign, "num": self.magnitude.numerator, "den": self.magnitude.denominator}


def closed_gamma_ratio(spec):
    """(-1)^((n-q)k) (q/n)^(i+1) (qk)!/(nk)! as an exact signed rational."""
    if spec.family != "gamma_deriv":
        raise ValueError("closed_gamma_ratio needs a gamma_deriv spec")
    n, q, i, k = spec.n, spec.q, spec.i, spec.k
    sign = -1 if ((n - q) * k) % 2 else 1
    mag = Fraction(q, n) ** (i + 1) * Fraction(factorial(q * k), factorial(n * k))
    return ClosedFormValue(sign, mag)


def closed_psi_ratio(spec):
    """(q/n)^(i+1); independent of k."""
    if spec.family != "psi_deriv":
        raise ValueError("closed_psi_ratio needs a psi_deriv spec")
    return ClosedFormValue(1, Fraction(spec.q, spec.n) ** (spec.i + 1))


def closed_form(spec):
    return closed_gamma_ratio(spec) if spec.family == "gamma_deriv" else closed_psi_ratio(spec)


# -- numerics ---------------------------------------------------------------------


@dataclass(frozen=True)
class Sample:
    side: str
    h: ExtReal
    value: ExtReal
    path: str


@dataclass(frozen=True)
class ConvergenceReport:
    spec: RatioLimitSpec
    samples: tuple
    extrapolated: ExtReal | None
    closed_form: ClosedFormValue
    relative_error: ExtReal | None
    observed_order: ExtReal | None
    side: str
    precision: int
    error_estimate: ExtReal | None = None
    side_values: dict = field(default_factory=dict)
    two_sided_gap: ExtReal | None = None
    status: str = "ok"

    @property
    def paths(self):
        counts = {}
        for s in self.samples:
            counts[s.path] = counts.get(s.path, 0) + 1
        return counts

    def passes(self, tol=DEFAULT_TOL, two_sided_tol=DEFAULT_TWO_SIDED_TOL):
        if self.status != "ok" or self.relative_error is None:
            return False
        if self.relative_error > tol:
            return False
        return self.two_sided_gap is None or self.two_sided_gap <= two_sided_tol

    def to_json_dict(self):
        digits = decimal_digits(self.precision)

        def dec(x, d=digits):
            return None if x is None else x.to_decimal(d)

        return {
            "spec": self.spec.to_json_dict(),
            "side": self.side,
            "precision_bits": self.precision,
            "status": self.status,
            "samples": [
                {"side": s.side, "h": dec(s.h), "value": dec(s.value), "path": s.path}
                for s in self.samples
            ],
            "extrapolated": dec(self.extrapolated),
            "side_values": {k: dec(v) for k, v in sorted(self.side_values.items())},
            "closed_form": self.closed_form.to_json_dict(),
            "relative_error": dec(self.relative_error, 6),
            "error_estimate": dec(self.error_estimate, 6),
            "two_sided_gap": dec(self.two_sided_gap, 6),
            "observed_order": dec(self.observed_order, 6),
            "paths": dict(sorted(self.paths.items())),
        }

    def csv_rows(self):
        """One row per sample followed by a summary row."""
        digits = decimal_digits(self.precision)
        sp = self.spec
        head = [sp.family, sp.n, sp.q, sp.i, sp.k]
        rows = [head + ["sample", s.side, s.h.to_decimal(digits), s.value.to_decimal(digits), s.path, "", "", "", "", self.status] for s in self.samples]
        rows.append(
            head
            + [
                "summary",
                self.side,
                "",
                "",
                "",
                "" if self.extrapolated is None else self.extrapolated.to_decimal(digits),
                str(self.closed_form),
                "" if self.relative_error is None else self.relative_error.to_decimal(6),
                "" if self.observed_order is None else self.observed_order.to_decimal(6),
                self.status,
            ]
        )
        return rows


CSV_HEADER = [
    "family", "n", "q", "i", "k", "row", "side", "h", "value", "path",
    "extrapolated", "closed_form", "relative_error", "observed_order", "status",
]


def richardson(values, ratio):
    """Richardson table for samples at h0 r^j with error in powers h, h^2, ...

    Returns (best estimate, error estimate): the last-row entry whose column
    changed least between the last two rows.
    """
    n = len(values)
    rows = [[v] for v in values]
    for j in range(1, n):
        for level in range(1, j + 1):
            factor = (1 / ratio) ** level - 1
            prev, cur = rows[j - 1][level - 1], rows[j][level - 1]
            rows[j].append(cur + (cur - prev) / factor)
    best, best_err = rows[-1][0], abs(rows[-1][0] - rows[-2][0])
    for level in range(1, n - 1):
        err = abs(rows[-1][level] - rows[-2][level])
        if err < best_err:
            best, best_err = rows[-1][level], err
    return best, best_err


def observed_order(values, ratio, noise):
    """Median convergence order from consecutive sample triples above the noise floor."""
    orders = []
    log_r = -math.log2(float(ratio))
    for a, b, c in zip(values, values[1:], values[2:]):
        d1, d2 = abs(a - b), abs(b - c)
        if d2 <= noise * 2**20 or d1.is_zero():
            continue
        orders.append((d1 / d2).log() / (math.log(2) * log_r))
    if not orders:
        return None
    orders.sort()
    return orders[len(orders) // 2]


class _Evaluator:
    """Evaluates F(c z) near the pole -c k, F = Gamma^(i) or psi^(i)."""

    def __init__(self, family, i, c, k, radius, h0, prec):
        self.function = "gamma" if family == "gamma_deriv" and i == 0 else (
            "gamma_deriv" if family == "gamma_deriv" else "psi_deriv"
        )
        self.family, self.i, self.c, self.k, self.prec = family, i, c, k, prec
        self.radius = radius
        self.kernel_config = kernel.KernelConfig(min_pole_distance=Fraction(radius))
        reach = min(Fraction(c) * h0, Fraction(radius))
        series = poles.series_for(self.function, i, c * k, reach, prec)
        # substitute w = c*u so the series is in the offset u = z + k itself
        self.series = series.compose_affine(c)

    def __call__(self, u):
        if abs(u) * self.c < self.radius:
            return self.series.evaluate(u), "laurent"
        x = ExtReal(-self.c * self.k, self.prec) + u * self.c
        if self.family == "gamma_deriv":
            v = kernel.gamma_derivative(self.i, x, self.prec, self.kernel_config)
        else:
            v = kernel.polygamma(self.i, x, self.prec, self.kernel_config)
        return v, "kernel"


def _check_schedule(spec, h0, ratio, steps):
    if not 0 < ratio < 1:
        raise ValueError("ratio must lie strictly between 0 and 1")
    if steps < 4:
        raise ValueError("at least 4 steps are needed")
    limit = Fraction(1, 16 * max(spec.n, spec.q))
    if not 0 < h0 <= limit:
        raise ScheduleOutOfRadius(
            f"h0 = {h0} must satisfy 0 < h0 <= 1/(16 max(n, q)) = {limit}"
        )


def numeric_ratio_limit(
    spec,
    h0=DEFAULT_H0,
    ratio=DEFAULT_RATIO,
    steps=DEFAULT_STEPS,
    prec=DEFAULT_PREC,
    side="both",
    radius=poles.NEAR_POLE_RADIUS,
):
    """Estimate the ratio limit by sampling z = -k + s h0 r^j and extrapolating."""
    h0, ratio = Fraction(h0), Fraction(ratio)
    _check_schedule(spec, h0, ratio, steps)
    if side not in ("above", "below", "both"):
        raise ValueError("side must be 'above', 'below' or 'both'")
    num = _Evaluator(spec.family, spec.i, spec.n, spec.k, radius, h0, prec)
    den = num if spec.n == spec.q else _Evaluator(spec.family, spec.i, spec.q, spec.k, radius, h0, prec)
    r_ext = ExtReal(ratio, prec)
    closed = closed_form(spec)

    samples = []
    side_values = {}
    estimates = []
    orders = []
    for s in ("above", "below") if side == "both" else (side,):
        sign = 1 if s == "above" else -1
        values = []
        for j in range(steps):
            h = ExtReal(h0 * ratio**j, prec)
            u = h if sign > 0 else -h
            a, pa = num(u)
            b, pb = den(u)
            v = a / b
            values.append(v)
            samples.append(Sample(s, h, v, pa if pa == pb else f"{pa}/{pb}"))
        best, err = richardson(values, r_ext)
        noise = ExtReal(1, prec).ldexp(32 - prec) * max(abs(v) for v in values)
        if err > abs(best).ldexp(-(prec // 4)):
            raise PrecisionExhausted(
                f"{spec}: {s} extrapolation error estimate {err.to_decimal(6)} exceeds the noise "
                f"budget at {prec} bits; use more steps or raise the precision"
            )
        side_values[s] = best
        estimates.append(err)
        order = observed_order(values, r_ext, noise)
        if order is not None:
            orders.append(order)

    if side == "both":
        a, b = side_values["above"], side_values["below"]
        extrapolated = (a + b) / 2
        gap = abs(a - b) / abs(extrapolated) if not extrapolated.is_zero() else abs(a - b)
    else:
        extrapolated = side_values[side]
        gap = None
    closed_ext = closed.to_ext(prec)
    return ConvergenceReport(
        spec=spec,
        samples=tuple(samples),
        extrapolated=extrapolated,
        closed_form=closed,
        relative_error=abs(extrapolated / closed_ext - 1),
        observed_order=min(orders) if orders else None,
        side=side,
        precision=prec,
        error_estimate=max(estimates),
        side_values=side_values,
        two_sided_gap=gap,
    )


def _parse_range(r):
    if isinstance(r, str):
        lo, sep, hi = r.partition("..")
        if not sep:
            lo = hi = r
        r = range(int(lo), int(hi) + 1)
    r = list(r)
    if not r:
        raise ValueError("every grid range must be non-empty")
    return r


def _grid_point(args):
    spec, kwargs = args
    try:
        return numeric_ratio_limit(spec, **kwargs)
    except (GammaLimError, ArithmeticError, ValueError) as exc:
        return ConvergenceReport(
            spec=spec,
            samples=(),
            extrapolated=None,
            closed_form=closed_form(spec),
            relative_error=None,
            observed_order=None,
            side=kwargs.get("side", "both"),
            precision=kwargs.get("prec", DEFAULT_PREC),
            status=f"error: {type(exc).__name__}: {exc}",
        )


def verify_grid(
    n_range,
    q_range,
    i_range,
    k_range,
    families=("gamma_deriv",),
    prec=DEFAULT_PREC,
    h0=DEFAULT_H0,
    ratio=DEFAULT_RATIO,
    steps=DEFAULT_STEPS,
    side="both",
    workers=1,
):
    """One ConvergenceReport per (family, n, q, i, k), in that nesting order.

    Failures at a single point are recorded in that report's ``status``
    rather than aborting the grid.  ``workers > 1`` spreads points over
    processes; the output order does not depend on it.
    """
    ranges = [_parse_range(r) for r in (n_range, q_range, i_range, k_range)]
    families = [canonical_family(f) for f in ([families] if isinstance(families, str) else families)]
    if not families:
        raise ValueError("at least one family is required")
    kwargs = {"h0": h0, "ratio": ratio, "steps": steps, "prec": prec, "side": side}
    jobs = [
        (RatioLimitSpec(f, n, q, i, k), kwargs)
        for f in families
        for n, q, i, k in product(*ranges)
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_grid_point, jobs, chunksize=4))
    return [_grid_point(job) for job in jobs]


def summarize(reports, tol=DEFAULT_TOL, two_sided_tol=DEFAULT_TWO_SIDED_TOL):
    passed = sum(r.passes(tol, two_sided_tol) for r in reports)
    errors = sum(r.status != "ok" for r in reports)
    return {"total": len(reports), "passed": passed, "failed": len(reports) - passed, "errors": errors}
