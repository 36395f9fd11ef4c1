"""Command-line front end: ``gammalim {eval,laurent,limit,verify}``.

Exit codes: 0 success, 1 verification failure (including an exhausted
precision budget), 2 pole argument, 3 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from . import kernel, limits, poles
from .errors import GammaLimError, NonPositiveArgument, PoleArgument, PrecisionExhausted
from .numerics import MIN_PREC, ExtReal, decimal_digits

EXIT_OK, EXIT_FAIL, EXIT_POLE, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_rational(text):
    """Exact rational from '5', '-5/2', '0.125' or '1e-3'; unicode minus accepted."""
    try:
        return Fraction(text.strip().replace("−", "-"))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse {text!r} as a rational or decimal number") from exc


def parse_range(text):
    lo, sep, hi = text.partition("..")
    try:
        lo, hi = (int(lo), int(hi)) if sep else (int(lo), int(lo))
    except ValueError as exc:
        raise UsageError(f"malformed range {text!r}; expected a..b") from exc
    if lo > hi:
        raise UsageError(f"empty range {text!r}: {lo} > {hi}")
    return range(lo, hi + 1)


def _default_prec():
    env = os.environ.get("GAMMALIM_PREC")
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"GAMMALIM_PREC={env!r} is not an integer") from None
    return 256


def _global_options():
    p = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    p.add_argument("--prec", type=int, help="working precision in bits (default 256, env GAMMALIM_PREC)")
    p.add_argument("--degree", type=int, help="jet degree for f_m expansions (default 16)")
    p.add_argument("--out", help="write the result to this file")
    p.add_argument("--format", choices=("json", "csv", "text"), help="output format (default text)")
    p.add_argument("--tol", help="relative pass tolerance (default 1e-15)")
    p.add_argument("--h0", help="first sampling offset (default 1/64)")
    p.add_argument("--ratio", help="geometric step ratio (default 1/2)")
    p.add_argument("--steps", type=int, help="number of samples per side (default 24)")
    p.add_argument("--side", choices=("above", "below", "both"), help="approach side (default both)")
    return p


def build_parser():
    common = _global_options()
    parser = _Parser(prog="gammalim", parents=[common], description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ev = sub.add_parser("eval", parents=[common], help="evaluate Gamma^(i), psi^(i) or ln Gamma")
    ev.add_argument("--function", required=True, choices=("gamma", "polygamma", "psi", "loggamma"))
    ev.add_argument("--i", type=int, default=0)
    ev.add_argument("--x", required=True)

    la = sub.add_parser("laurent", parents=[common], help="Laurent coefficients at z = -m")
    la.add_argument("--function", required=True, choices=("gamma", "psi", "polygamma"))
    la.add_argument("--i", type=int, default=0)
    la.add_argument("--pole", type=int, required=True)
    la.add_argument("--order", type=int, help="highest power of w = z + m (default: from --degree)")

    li = sub.add_parser("limit", parents=[common], help="closed-form ratio limit")
    li.add_argument("--family", required=True, choices=("gamma", "psi"))
    for name in ("n", "q", "i", "k"):
        li.add_argument(f"--{name}", type=int, required=True)
    li.add_argument("--numeric", action="store_true", help="also run the numerical estimator")

    ve = sub.add_parser("verify", parents=[common], help="check a grid of limits numerically")
    for name in ("n", "q", "i", "k"):
        ve.add_argument(f"--{name}", required=True, help="inclusive range a..b")
    ve.add_argument("--family", action="append", choices=("gamma", "psi", "both"))
    ve.add_argument("--workers", type=int, default=1)
    return parser


def _config(args):
    prec = getattr(args, "prec", None) or _default_prec()
    if prec < MIN_PREC:
        raise UsageError(f"--prec must be at least {MIN_PREC}")
    cfg = {
        "prec": prec,
        "degree": getattr(args, "degree", poles.DEFAULT_DEGREE),
        "out": getattr(args, "out", None),
        "format": getattr(args, "format", "text"),
        "tol": parse_rational(getattr(args, "tol", "1e-15")),
        "h0": parse_rational(getattr(args, "h0", "1/64")),
        "ratio": parse_rational(getattr(args, "ratio", "1/2")),
        "steps": getattr(args, "steps", limits.DEFAULT_STEPS),
        "side": getattr(args, "side", "both"),
    }
    if not 0 < cfg["ratio"] < 1:
        raise UsageError("--ratio must lie strictly between 0 and 1")
    if cfg["steps"] < 4:
        raise UsageError("--steps must be at least 4")
    if cfg["degree"] < 0:
        raise UsageError("--degree must be non-negative")
    return cfg


def dump_json(doc):
    """Canonical JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _emit(cfg, text):
    if cfg["out"]:
        with open(cfg["out"], "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- eval --------------------------------------------------------------------------


def _fmt_fraction(q):
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def cmd_eval(args, cfg):
    prec = cfg["prec"]
    xq = parse_rational(args.x)
    fn, i = args.function, args.i
    if i < 0:
        raise UsageError("--i must be non-negative")
    if fn == "loggamma":
        if i:
            raise UsageError("loggamma takes no derivative order")
        try:
            value = kernel.log_gamma(xq, prec)
        except NonPositiveArgument as exc:
            raise UsageError(str(exc)) from exc
        path = "direct"
    else:
        if xq.denominator == 1 and xq <= 0:
            raise PoleArgument(_fmt_fraction(xq), i + 1)
        x = ExtReal(xq, prec)
        pt = kernel.EvalPoint.of(x, prec)
        family = "gamma" if fn == "gamma" else "psi_deriv"
        if pt.pole_distance < poles.NEAR_POLE_RADIUS:
            value = poles.eval_near_pole(family, x, prec, order=i)
            path = "laurent"
        elif fn == "gamma":
            value = kernel.gamma_derivative(i, x, prec)
            path = "reflection" if xq < Fraction(1, 2) else "direct"
        else:
            value = kernel.polygamma(i, x, prec)
            path = "reflection" if xq <= 0 else "direct"
    digits = decimal_digits(prec)
    doc = {
        "function": fn,
        "i": i,
        "x": _fmt_fraction(xq),
        "precision_bits": prec,
        "value": value.to_decimal(digits),
        "path": path,
    }
    if cfg["format"] == "json":
        _emit(cfg, dump_json(doc))
    elif cfg["format"] == "csv":
        keys = sorted(doc)
        _emit(cfg, _csv_text(keys, [[doc[k] for k in keys]]))
    else:
        _emit(cfg, f"{doc['value']}\npath: {path}\n")
    return EXIT_OK


# -- laurent -------------------------------------------------------------------------


def cmd_laurent(args, cfg):
    order = args.order if args.order is not None else cfg["degree"] - args.i - 1
    if args.pole < 0 or order < 0 or args.i < 0:
        raise UsageError("--pole, --order and --i must be non-negative")
    family = "gamma" if args.function == "gamma" else "psi_deriv"
    degree = order + args.i + 1
    series = poles.laurent(family, args.i, args.pole, degree, cfg["prec"])
    doc = series.to_json_dict()
    if cfg["format"] == "json":
        _emit(cfg, dump_json(doc))
    elif cfg["format"] == "csv":
        rows = [[c["power"], c["value"]] for c in doc["coefficients"]]
        _emit(cfg, _csv_text(["power", "value"], rows))
    else:
        lines = [
            f"{doc['function']} (derivative order {series.derivative_order}) at z = {-series.pole_index}: "
            f"pole of order {series.pole_order}"
        ]
        if "leading_coefficient" in doc:
            lines.append(f"leading coefficient a_{-series.pole_order} = {doc['leading_coefficient']}")
        lines += [f"a_{c['power']} = {c['value']}" for c in doc["coefficients"]]
        _emit(cfg, "\n".join(lines) + "\n")
    return EXIT_OK


# -- limit ---------------------------------------------------------------------------


def _schedule(cfg):
    return {"h0": cfg["h0"], "ratio": cfg["ratio"], "steps": cfg["steps"], "prec": cfg["prec"], "side": cfg["side"]}


def cmd_limit(args, cfg):
    try:
        spec = limits.RatioLimitSpec(args.family, args.n, args.q, args.i, args.k)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    closed = limits.closed_form(spec)
    digits = decimal_digits(cfg["prec"])
    decimal = closed.to_ext(cfg["prec"]).to_decimal(digits)
    report = None
    if args.numeric:
        try:
            report = limits.numeric_ratio_limit(spec, **_schedule(cfg))
        except limits.ScheduleOutOfRadius as exc:
            raise UsageError(str(exc)) from exc
    if cfg["format"] == "json":
        doc = {"spec": spec.to_json_dict(), "closed_form": closed.to_json_dict(), "value": str(closed), "decimal": decimal}
        if report is not None:
            doc["report"] = report.to_json_dict()
            doc["pass"] = report.passes(cfg["tol"])
        _emit(cfg, dump_json(doc))
    elif cfg["format"] == "csv":
        if report is None:
            _emit(cfg, _csv_text(["family", "n", "q", "i", "k", "closed_form", "decimal"],
                                 [[spec.family, spec.n, spec.q, spec.i, spec.k, str(closed), decimal]]))
        else:
            _emit(cfg, _csv_text(limits.CSV_HEADER, report.csv_rows()))
    else:
        lines = [str(closed), f"= {decimal}"]
        if report is not None:
            lines += _report_lines(report, cfg["tol"])
        _emit(cfg, "\n".join(lines) + "\n")
    if report is not None and not report.passes(cfg["tol"]):
        return EXIT_FAIL
    return EXIT_OK


def _report_lines(r, tol):
    def d(x):
        return "n/a" if x is None else x.to_decimal(6)

    return [
        f"extrapolated:   {r.extrapolated.to_decimal(30) if r.extrapolated is not None else 'n/a'}",
        f"relative error: {d(r.relative_error)}",
        f"two-sided gap:  {d(r.two_sided_gap)}",
        f"observed order: {d(r.observed_order)}",
        f"paths:          {', '.join(f'{k}={v}' for k, v in sorted(r.paths.items()))}",
        f"status:         {'PASS' if r.passes(tol) else 'FAIL'} at tol {float(tol):g} ({r.status})",
    ]


# -- verify --------------------------------------------------------------------------


def cmd_verify(args, cfg):
    ranges = [parse_range(getattr(args, name)) for name in ("n", "q", "i", "k")]
    fams = args.family or ["gamma"]
    families = []
    for f in fams:
        for g in (("gamma", "psi") if f == "both" else (f,)):
            if limits.canonical_family(g) not in families:
                families.append(limits.canonical_family(g))
    if ranges[0][0] < 1 or ranges[1][0] < 1 or ranges[2][0] < 0 or ranges[3][0] < 0:
        raise UsageError("n, q must be >= 1 and i, k >= 0")
    try:
        reports = limits.verify_grid(*ranges, families=families, workers=args.workers, **_schedule(cfg))
    except limits.ScheduleOutOfRadius as exc:
        raise UsageError(str(exc)) from exc
    tol = cfg["tol"]
    summary = limits.summarize(reports, tol)
    summary["tolerance"] = _fmt_fraction(tol)

    fmt = cfg["format"]
    if cfg["out"] and fmt == "text":
        fmt = "csv" if cfg["out"].endswith(".csv") else "json"
    if fmt == "json":
        doc = {"summary": summary, "reports": [dict(r.to_json_dict(), **{"pass": r.passes(tol)}) for r in reports]}
        body = dump_json(doc)
    elif fmt == "csv":
        rows = [row for r in reports for row in r.csv_rows()]
        body = _csv_text(limits.CSV_HEADER, rows)
    else:
        body = None
    if body is not None:
        _emit(cfg, body)

    table = sys.stdout if (body is None or cfg["out"]) else sys.stderr
    table.write(f"{'family':<12}{'n':>3}{'q':>3}{'i':>3}{'k':>3}  {'closed form':<22}{'rel. error':<14}result\n")
    for r in reports:
        s = r.spec
        err = "-" if r.relative_error is None else r.relative_error.to_decimal(3)
        table.write(
            f"{s.family:<12}{s.n:>3}{s.q:>3}{s.i:>3}{s.k:>3}  {str(r.closed_form):<22}{err:<14}"
            f"{'pass' if r.passes(tol) else 'FAIL ' + r.status}\n"
        )
    table.write(f"{summary['passed']}/{summary['total']} passed at tolerance {float(tol):g}\n")
    return EXIT_OK if summary["passed"] == summary["total"] else EXIT_FAIL


COMMANDS = {"eval": cmd_eval, "laurent": cmd_laurent, "limit": cmd_limit, "verify": cmd_verify}


_NUMERIC_OPTIONS = ("--x", "--tol", "--h0", "--ratio")


def _attach_negative_values(argv):
    """Rewrite ``--x -5/2`` as ``--x=-5/2``; argparse would read -5/2 as an option."""
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _NUMERIC_OPTIONS:
            nxt = next(it, None)
            if nxt is not None and nxt[:1] in ("-", "−"):
                out.append(f"{tok}={nxt}")
                continue
            out.append(tok)
            if nxt is not None:
                out.append(nxt)
        else:
            out.append(tok)
    return out


def main(argv=None):
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_attach_negative_values(argv))
    try:
        cfg = _config(args)
        return COMMANDS[args.command](args, cfg)
    except PoleArgument as exc:
        print(f"gammalim: {exc}", file=sys.stderr)
        return EXIT_POLE
    except PrecisionExhausted as exc:
        print(f"gammalim: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (UsageError, ValueError, GammaLimError) as exc:
        print(f"gammalim: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
