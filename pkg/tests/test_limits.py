import csv
import io
import json
from fractions import Fraction
from math import factorial

import mpmath
import pytest

from gammalim import kernel, poles
from gammalim.errors import PrecisionExhausted, ScheduleOutOfRadius
from gammalim.limits import (
    CSV_HEADER,
    RatioLimitSpec,
    closed_form,
    closed_gamma_ratio,
    closed_psi_ratio,
    numeric_ratio_limit,
    richardson,
    summarize,
    verify_grid,
)
from gammalim.numerics import ExtReal

P = 256
TOL = Fraction(1, 10**15)


def G(n, q, i, k):
    return RatioLimitSpec("gamma_deriv", n, q, i, k)


def S(n, q, i, k):
    return RatioLimitSpec("psi_deriv", n, q, i, k)


# -- specs and closed forms -----------------------------------------------------------


def test_spec_validation():
    with pytest.raises(ValueError):
        G(0, 1, 0, 0)
    with pytest.raises(ValueError):
        S(1, 1, -1, 0)
    with pytest.raises(ValueError):
        RatioLimitSpec("zeta", 1, 1, 0, 0)
    assert RatioLimitSpec("psi", 1, 2, 0, 0).family == "psi_deriv"


def test_gamma_closed_examples():
    assert closed_gamma_ratio(G(3, 3, 2, 4)).value == 1
    assert closed_gamma_ratio(G(2, 1, 0, 1)).value == Fraction(-1, 4)
    assert closed_gamma_ratio(G(3, 2, 2, 1)).value == Fraction(-8, 81)
    assert str(closed_gamma_ratio(G(2, 1, 0, 1))) == "-1/4"


def test_psi_closed_examples():
    assert closed_psi_ratio(S(4, 4, 3, 2)).value == 1
    assert closed_psi_ratio(S(2, 1, 0, 3)).value == Fraction(1, 2)
    assert closed_psi_ratio(S(2, 3, 2, 0)).value == Fraction(27, 8)


def test_closed_form_json():
    assert closed_form(G(2, 1, 0, 1)).to_json_dict() == {"sign": -1, "num": 1, "den": 4}


def test_family_mismatch():
    with pytest.raises(ValueError):
        closed_psi_ratio(G(1, 1, 0, 0))


def test_reciprocity():
    for n in range(1, 7):
        for q in range(1, 7):
            for i in range(7):
                for k in range(5):
                    assert closed_form(G(n, q, i, k)).value * closed_form(G(q, n, i, k)).value == 1
                    assert closed_form(S(n, q, i, k)).value * closed_form(S(q, n, i, k)).value == 1


def test_psi_k_independence():
    for n, q, i in [(2, 1, 0), (3, 5, 2), (6, 4, 5)]:
        assert len({closed_psi_ratio(S(n, q, i, k)).value for k in range(6)}) == 1


def test_reduction_chain():
    for n in range(1, 7):
        for q in range(1, 7):
            for k in range(5):
                reflected = (-1) ** ((n - q) * k % 2) * Fraction(q, n) * Fraction(factorial(q * k), factorial(n * k))
                assert closed_gamma_ratio(G(n, q, 0, k)).value == reflected
                assert closed_psi_ratio(S(n, q, 0, k)).value == Fraction(q, n)


def test_sign_rule():
    for n in range(1, 5):
        for q in range(1, 5):
            for k in range(4):
                assert closed_gamma_ratio(G(n, q, 2, k)).sign == (-1) ** ((n - q) * k)
                assert closed_psi_ratio(S(n, q, 2, k)).sign == 1


# -- independent brute-force oracle -----------------------------------------------------


def test_brute_force_gamma_ratio_oracle():
    """Gamma(2z)/Gamma(z) at z = -1 + 2^-j, Richardson in mpmath, no gammalim involved."""
    mpmath.mp.prec = 400
    vals = [mpmath.gamma(2 * (-1 + mpmath.mpf(2) ** -j)) / mpmath.gamma(-1 + mpmath.mpf(2) ** -j) for j in range(20, 41)]
    table = list(vals)
    for level in range(1, 6):
        f = mpmath.mpf(2) ** level
        table = [(f * table[t + 1] - table[t]) / (f - 1) for t in range(len(table) - 1)]
    assert abs(table[-1] + mpmath.mpf(1) / 4) < mpmath.mpf("1e-60")


# -- numeric limits -----------------------------------------------------------------------


def test_numeric_identity():
    rep = numeric_ratio_limit(G(1, 1, 3, 2))
    assert rep.extrapolated == 1
    assert rep.relative_error <= ExtReal(1, P).ldexp(-P // 2)


def test_numeric_gamma_acceptance_path():
    rep = numeric_ratio_limit(G(2, 1, 0, 1), h0=Fraction(1, 64), ratio=Fraction(1, 2), steps=24, prec=P)
    assert rep.relative_error <= TOL
    assert abs(rep.extrapolated + Fraction(1, 4)) < Fraction(1, 10**15)
    assert rep.passes()


def test_numeric_psi():
    rep = numeric_ratio_limit(S(3, 2, 1, 2))
    assert abs(rep.extrapolated - Fraction(4, 9)) < Fraction(1, 10**15)


def test_numeric_cross_checks_closed_examples():
    for spec, expected in [(G(3, 2, 2, 1), Fraction(-8, 81)), (S(2, 3, 2, 0), Fraction(27, 8))]:
        rep = numeric_ratio_limit(spec, h0=Fraction(1, 64))
        assert abs(rep.extrapolated / expected - 1) <= TOL


def test_samples_are_decreasing_and_two_sided():
    rep = numeric_ratio_limit(G(2, 3, 1, 1), h0=Fraction(1, 64), steps=14)
    for side in ("above", "below"):
        hs = [s.h for s in rep.samples if s.side == side]
        assert len(hs) == 14
        assert all(a > b for a, b in zip(hs, hs[1:]))
    assert rep.two_sided_gap < Fraction(1, 10**12)
    assert set(rep.side_values) == {"above", "below"}


def test_one_sided_runs():
    above = numeric_ratio_limit(G(3, 1, 2, 2), h0=Fraction(1, 64), side="above")
    below = numeric_ratio_limit(G(3, 1, 2, 2), h0=Fraction(1, 64), side="below")
    assert above.two_sided_gap is None
    assert abs(above.extrapolated / below.extrapolated - 1) < Fraction(1, 10**12)


def test_schedule_out_of_radius():
    with pytest.raises(ScheduleOutOfRadius):
        numeric_ratio_limit(G(5, 1, 0, 1), h0=Fraction(1, 64))
    numeric_ratio_limit(G(5, 1, 0, 1), h0=Fraction(1, 80), steps=14)


def test_schedule_validation():
    with pytest.raises(ValueError):
        numeric_ratio_limit(G(1, 1, 0, 0), steps=3)
    with pytest.raises(ValueError):
        numeric_ratio_limit(G(1, 1, 0, 0), ratio=1)
    with pytest.raises(ValueError):
        numeric_ratio_limit(G(1, 1, 0, 0), side="left")


def test_gamma_deriv_blowup_is_bounded():
    """h^(i+1) |Gamma^(i)(n(-k + h))| stays within fixed positive bounds."""
    n, i, k = 3, 2, 1
    for j in range(24):
        h = ExtReal(Fraction(1, 64) / 2**j, P)
        z = ExtReal(-k, P) + h
        v = poles.eval_near_pole("gamma_deriv", z * n, P, order=i)
        scaled = abs(v) * h ** (i + 1)
        # limit: i!/(n^(i+1) (nk)!) = 2/(27*6)
        assert Fraction(1, 200) < scaled < Fraction(1, 20)


def test_observed_order_matches_pole_structure():
    for i in range(3):
        rep = numeric_ratio_limit(G(2, 1, i, 1), h0=Fraction(1, 64), steps=16)
        assert rep.observed_order is not None
        assert abs(rep.observed_order - (i + 1)) < Fraction(1, 4)


def test_kernel_fallback_recorded():
    rep = numeric_ratio_limit(G(2, 1, 1, 1), radius=Fraction(1, 64))
    assert rep.paths.get("kernel", 0) > 0
    assert rep.paths.get("laurent", 0) > 0
    assert rep.relative_error <= TOL


def test_precision_exhausted_is_reported():
    with pytest.raises(PrecisionExhausted, match="extrapolation error"):
        numeric_ratio_limit(G(4, 1, 3, 3), steps=4, ratio=Fraction(9, 10))


def test_richardson_on_polynomial_in_h():
    r = ExtReal(Fraction(1, 2), P)
    values = [ExtReal(3, P) + ExtReal(Fraction(1, 2**j), P) * 5 - ExtReal(Fraction(1, 4**j), P) for j in range(8)]
    best, err = richardson(values, r)
    assert abs(best - 3) < ExtReal(1, P).ldexp(-200)


# -- grids and reports ---------------------------------------------------------------------


def test_verify_grid_small_gamma():
    reps = verify_grid("1..2", "1..2", "0..0", "0..0", families=("gamma_deriv",))
    assert len(reps) == 4
    assert all(r.passes(TOL) for r in reps)
    assert summarize(reps) == {"total": 4, "passed": 4, "failed": 0, "errors": 0}


def test_verify_grid_empty_range():
    with pytest.raises(ValueError):
        verify_grid("1..1", "1..1", [], "0..0")


def test_verify_grid_psi_identity():
    reps = verify_grid("1..1", "1..1", "0..2", "0..1", families="psi")
    assert len(reps) == 6
    assert all(r.extrapolated == 1 for r in reps)


def test_verify_grid_records_point_errors():
    reps = verify_grid([1, 5], [1], [0], [1], h0=Fraction(1, 64), steps=14)
    assert reps[0].status == "ok"
    assert reps[1].status.startswith("error: ScheduleOutOfRadius")
    assert not reps[1].passes()
    assert summarize(reps)["errors"] == 1


def test_verify_grid_order_independent_of_workers():
    args = ("1..2", "1..2", "1..1", "1..1")
    a = verify_grid(*args, families=("gamma", "psi"), steps=14)
    b = verify_grid(*args, families=("gamma", "psi"), steps=14, workers=2)
    assert [r.spec for r in a] == [r.spec for r in b]
    assert [json.dumps(r.to_json_dict()) for r in a] == [json.dumps(r.to_json_dict()) for r in b]


def test_report_json_and_csv():
    rep = numeric_ratio_limit(S(2, 1, 0, 1), steps=14)
    doc = rep.to_json_dict()
    for key in ("spec", "samples", "extrapolated", "closed_form", "relative_error", "observed_order", "paths"):
        assert key in doc
    assert doc["closed_form"] == {"sign": 1, "num": 1, "den": 2}
    assert doc["paths"] == {"laurent": 28}
    assert json.loads(json.dumps(doc)) == doc

    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(CSV_HEADER)
    w.writerows(rep.csv_rows())
    rows = list(csv.reader(io.StringIO(buf.getvalue())))
    assert len(rows) == 1 + 28 + 1
    assert rows[-1][CSV_HEADER.index("row")] == "summary"
    assert rows[-1][CSV_HEADER.index("closed_form")] == "1/2"
