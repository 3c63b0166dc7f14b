"""Command-line front end.

    qturan eval FUNCTION [flags]      evaluate one function
    qturan verify TARGET [flags]      verify one parameter point (or an n-range)
    qturan sweep TARGET [flags]       verify a product grid of parameter points
    qturan limits [flags]             q -> 1 convergence table

Exit codes: 0 success / all verified, 1 a theorem violation, 2 bad input or
domain error, 3 some report inconclusive.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from decimal import Decimal
from fractions import Fraction
from typing import Optional, Sequence

from . import classical, qfunctions
from .backend import NumericBackend, parse_number, to_fraction
from .errors import QTuranError
from .qfunctions import PhiParams, QContext, QKummerParams, QRatioParams, Variant
from .reports import format_decimal, reports_to_csv, reports_to_jsonl, to_human
from .series import DEFAULT_EPS
from .verifier import (
    GridSpec,
    ParameterPoint,
    Status,
    SweepSpec,
    Target,
    TolPolicy,
    run_target,
    sweep,
)

EXIT_OK, EXIT_VIOLATED, EXIT_DOMAIN, EXIT_INCONCLUSIVE = 0, 1, 2, 3

EVAL_FUNCTIONS = ("qpoch", "qkummer", "qphi", "h", "hr", "1f1", "pfq", "hclassical", "f", "g", "theta")


class UsageError(Exception):
    pass


def _number(text: str) -> Fraction:
    try:
        return parse_number(text)
    except QTuranError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _int_range(text: str) -> list:
    """``"3"``, ``"1..10"`` or ``"1,4,7"``."""
    out = []
    for part in text.split(","):
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


def _candidates(text: str) -> list:
    """Sweep axis values: comma list of numbers, integer ranges ``lo..hi`` or vectors ``1;2``."""
    out: list = []
    for part in text.split(","):
        if ";" in part:
            out.append(tuple(parse_number(v) for v in part.split(";")))
        elif ".." in part:
            lo, hi = part.split("..")
            out.extend(Fraction(v) for v in range(int(lo), int(hi) + 1))
        else:
            out.append(parse_number(part))
    return out


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--backend", choices=("float", "rational"), default="float")
    p.add_argument("--precision", type=int, default=256, metavar="BITS")
    p.add_argument("--eps", type=_number, default=DEFAULT_EPS)
    p.add_argument("--format", choices=("json", "csv", "human"), default="human")
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--digits", type=int, default=20, help="significant digits in human output")


def _param_flags(p: argparse.ArgumentParser, multi: bool = False) -> None:
    kind = str if multi else _number
    p.add_argument("--q", type=kind, action="append" if multi else "store")
    for name in ("a", "b", "c"):
        p.add_argument(f"--{name}", type=kind, action="append", default=[])
    p.add_argument("--x", type=_number)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qturan", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate a function")
    p.add_argument("function", choices=EVAL_FUNCTIONS)
    _param_flags(p)
    _common(p)
    p.add_argument("--variant", choices=("displayed", "standard"), default="displayed")
    p.add_argument("--a-exp", type=_number, help="qpoch: use a = q**A_EXP")
    p.add_argument("--n", type=str, help="integer (or 'inf' for qpoch)")

    for name in ("verify", "sweep"):
        p = sub.add_parser(name, help=f"{name} a verification target")
        p.add_argument("target", choices=[t.value for t in Target])
        _param_flags(p, multi=name == "sweep")
        _common(p)
        p.add_argument("--n", type=str, help="integer, list or range 1..10")
        p.add_argument("--x-grid", type=GridSpec.parse, metavar="LO:HI:COUNT:SPACING")
        p.add_argument("--x-max", type=_number)
        p.add_argument("--tol", type=_number)
        p.add_argument("--coefficient-n-max", type=int, default=30)
        p.add_argument("--no-timing", action="store_true", help="omit wall_time_ms (byte-stable output)")
        if name == "sweep":
            p.add_argument("--workers", type=int, default=1)
            p.add_argument("--exploratory", action="store_true", help="keep points violating the theorem hypotheses")

    p = sub.add_parser("limits", help="q -> 1 convergence of a q-series to its classical limit")
    p.add_argument("--function", choices=("qkummer", "qphi"), default="qkummer")
    p.add_argument("--q-ladder", type=str, required=True, help="comma-separated q values, used in the given order")
    for name in ("a", "b", "c"):
        p.add_argument(f"--{name}", type=_number, action="append", default=[])
    p.add_argument("--x", type=_number, required=True)
    _common(p)
    return parser


def _backend(args) -> NumericBackend:
    if args.backend == "rational":
        return NumericBackend.Rational()
    return NumericBackend.Float(args.precision)


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _warn(message: str) -> None:
    print(f"qturan: warning: {message}", file=sys.stderr)


def _plain(text: str) -> str:
    """Scientific decimal string to the shortest conventional form (``0.25``, ``1``, ``1.5E-9``)."""
    return str(Decimal(text).normalize()) if "e" in text else text


def _require(args, *names) -> None:
    missing = [n for n in names if getattr(args, n) in (None, [])]
    if missing:
        raise UsageError("missing " + ", ".join("--" + m.replace("_", "-") for m in missing))


def _exact_of(value, lower=None, upper=None) -> Optional[Fraction]:
    if isinstance(value, Fraction):
        return value
    if lower is not None and lower == upper:
        return lower
    return None


# --- eval --------------------------------------------------------------------


def _evaluate(args) -> dict:
    backend = _backend(args)
    fn = args.function
    variant = Variant(args.variant)
    result: dict = {"function": fn}

    def ctx():
        _require(args, "q")
        return QContext(args.q, backend, args.eps)

    def series(sv):
        result.update(value=sv.value, terms_used=sv.terms_used, tail_bound=sv.tail_bound,
                      exact=_exact_of(sv.value if backend.is_exact else None))
        if not backend.is_exact and to_fraction(sv.tail_bound) == 0:
            result["exact"] = to_fraction(sv.value)

    def ratio(rv):
        result.update(value=rv.value, terms_used=rv.terms_used, lower=rv.lower, upper=rv.upper,
                      exact=_exact_of(rv.value if backend.is_exact and rv.lower == rv.upper else None, rv.lower, rv.upper))

    if fn == "qpoch":
        _require(args, "n")
        c = ctx()
        if args.a_exp is not None:
            a = c.power(args.a_exp)
        else:
            _require(args, "a")
            a = args.a[0]
        if args.n.strip().lower() in ("inf", "infinity"):
            series(qfunctions.q_pochhammer_infinite(c, a))
        else:
            value = qfunctions.q_pochhammer(c, a, int(args.n))
            result.update(value=value, exact=value if backend.is_exact else None, terms_used=int(args.n), tail_bound=0)
    elif fn == "qkummer":
        _require(args, "a", "c", "x")
        series(qfunctions.q_kummer_phi(ctx(), QKummerParams(args.a[0], args.c[0]), args.x, variant))
    elif fn == "qphi":
        _require(args, "x")
        series(qfunctions.basic_hypergeometric(ctx(), PhiParams(tuple(args.a), tuple(args.b)), args.x))
    elif fn in ("h", "hr"):
        _require(args, "a", "b", "c", "x")
        params = QRatioParams(tuple(args.a), tuple(args.b), tuple(args.c))
        if fn == "h":
            ratio(qfunctions.q_ratio_h(ctx(), params, args.x, variant))
        else:
            ratio(qfunctions.q_ratio_hr(ctx(), params, args.x))
    elif fn == "1f1":
        _require(args, "a", "c", "x")
        series(classical.kummer_1f1(args.a[0], args.c[0], args.x, backend, args.eps))
    elif fn == "pfq":
        _require(args, "x")
        series(classical.generalized_pfq(tuple(args.a), tuple(args.b), args.x, backend, args.eps))
    elif fn == "hclassical":
        _require(args, "a", "b", "c", "x")
        params = classical.ClassicalRatioParams(tuple(args.a), tuple(args.b), tuple(args.c))
        ratio(classical.classical_ratio_h(params, args.x, backend, args.eps))
    elif fn in ("f", "g"):
        _require(args, "n", "x")
        fun = classical.f_ratio if fn == "f" else classical.g_ratio
        ratio(fun(int(args.n), args.x, backend, args.eps))
    elif fn == "theta":
        _require(args, "n")
        value = classical.ramanujan_theta(int(args.n), backend)
        enc = classical.ramanujan_theta_enclosure(int(args.n), backend.precision_bits + 8)
        result.update(value=value, lower=enc.lower, upper=enc.upper, exact=None)
    return result


def _eval_record(result: dict, digits: int) -> dict:
    out = {"function": result["function"], "value": format_decimal(to_fraction(result["value"]), digits)}
    exact = result.get("exact")
    out["exact"] = None if exact is None else str(exact)
    for key in ("terms_used",):
        if key in result:
            out[key] = result[key]
    if "tail_bound" in result:
        out["tail_bound"] = format_decimal(to_fraction(result["tail_bound"]), 6, "ceil")
    for key, mode in (("lower", "floor"), ("upper", "ceil")):
        if key in result:
            out[key] = format_decimal(result[key], digits, mode)
    return out


def _format_eval(args, record: dict) -> str:
    if args.format == "json":
        return json.dumps(record) + "\n"
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(record), lineterminator="\n")
        writer.writeheader()
        writer.writerow(record)
        return buf.getvalue()
    exact = record["exact"]
    if exact is not None:
        approx = format_decimal(Fraction(exact), 6)
        head = exact if "/" not in exact else f"{exact} ≈ {_plain(approx)}"
    else:
        head = f"≈ {_plain(record['value'])}"
    lines = [head]
    for key in ("terms_used", "tail_bound", "lower", "upper"):
        if key in record:
            value = record[key]
            lines.append(f"{key} = {_plain(value) if isinstance(value, str) else value}")
    return "\n".join(lines) + "\n"


def cmd_eval(args) -> int:
    record = _eval_record(_evaluate(args), args.digits)
    _emit(args, _format_eval(args, record))
    return EXIT_OK


# --- verify / sweep ------------------------------------------------------------


def _policy(args) -> TolPolicy:
    backend = _backend(args)
    tol = args.tol if args.tol is not None else (Fraction(0) if backend.is_exact else TolPolicy().tol)
    return TolPolicy(tol, args.eps, backend)


def _grid(args) -> GridSpec:
    if args.x_grid is not None:
        return args.x_grid
    if args.x_max is not None:
        return GridSpec(Fraction(0), args.x_max, 50, "geometric")
    if args.target in (Target.MONOTONE_F.value, Target.CLASSICAL_BOUNDS.value):
        return GridSpec(Fraction(0), Fraction(50), 40, "geometric")
    return GridSpec()


def _write_reports(args, reports) -> None:
    timing = not args.no_timing
    if args.format == "json":
        text = reports_to_jsonl(reports, timing)
    elif args.format == "csv":
        text = reports_to_csv(reports, timing)
    else:
        text = "".join(to_human(r) + "\n" for r in reports)
    _emit(args, text)


def _exit_code(reports) -> int:
    if any(r.counts_as_violation for r in reports):
        return EXIT_VIOLATED
    if any(r.outcome.status is Status.INCONCLUSIVE for r in reports):
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def _points_for_verify(args) -> list:
    target = Target(args.target)
    if target in (Target.MONOTONE_F, Target.CLASSICAL_BOUNDS):
        _require(args, "n")
        return [ParameterPoint(n=n) for n in _int_range(args.n)]
    _require(args, "q", "a", "b", "c")
    return [ParameterPoint(args.q, tuple(args.a), tuple(args.b), tuple(args.c))]


def cmd_verify(args) -> int:
    grid = _grid(args)
    if grid.count == 0:
        _warn("empty grid: no reports produced")
        _write_reports(args, [])
        return EXIT_OK
    policy = _policy(args)
    target = Target(args.target)
    reports = [run_target(target, p, grid, policy, args.coefficient_n_max) for p in _points_for_verify(args)]
    _write_reports(args, reports)
    return _exit_code(reports)


def _points_for_sweep(args) -> list:
    target = Target(args.target)
    if target in (Target.MONOTONE_F, Target.CLASSICAL_BOUNDS):
        _require(args, "n")
        return [ParameterPoint(n=n) for n in _int_range(args.n)]
    _require(args, "q", "a", "b", "c")
    axes = {
        "q": [v for text in args.q for v in _candidates(text)],
        "a": [v for text in args.a for v in _candidates(text)],
        "b": [v for text in args.b for v in _candidates(text)],
        "c": [v for text in args.c for v in _candidates(text)],
    }
    points = []
    for p in SweepSpec.product(**axes):
        try:
            params = p.ratio_params()
        except QTuranError:
            continue
        if args.exploratory or qfunctions.theorem_hypotheses(params)[0]:
            points.append(p)
    return points


def cmd_sweep(args) -> int:
    grid = _grid(args)
    points = _points_for_sweep(args)
    if not points or grid.count == 0:
        _warn("empty sweep: no reports produced")
    spec = SweepSpec(tuple(points), grid, _policy(args), args.coefficient_n_max)
    reports = sweep(spec, [Target(args.target)], workers=args.workers) if grid.count else []
    _write_reports(args, reports)
    return _exit_code(reports)


# --- limits --------------------------------------------------------------------


def limit_table(function: str, ladder: Sequence[Fraction], a, b, c, x, backend: NumericBackend, eps) -> list:
    """Rows ``(q, q_value, classical_value, gap)`` in ladder order."""
    if function == "qkummer":
        if len(a) != 1 or len(c) != 1:
            raise UsageError("qkummer limits need one --a and one --c")
        target = classical.kummer_1f1(a[0], c[0], x, backend, eps)
    else:
        target = classical.generalized_pfq(tuple(a), tuple(b), x, backend, eps)
    rows = []
    for q in ladder:
        ctx = QContext(q, backend, eps)
        if function == "qkummer":
            sv = qfunctions.q_kummer_phi(ctx, QKummerParams(a[0], c[0]), x)
        else:
            sv = qfunctions.basic_hypergeometric(ctx, PhiParams(tuple(a), tuple(b)), x)
        gap = abs(to_fraction(sv.value) - to_fraction(target.value))
        rows.append((to_fraction(q), to_fraction(sv.value), to_fraction(target.value), gap))
    return rows


def gaps_nonincreasing(rows) -> bool:
    return all(rows[i + 1][3] <= rows[i][3] for i in range(len(rows) - 1))


def cmd_limits(args) -> int:
    ladder = [parse_number(v) for v in args.q_ladder.split(",") if v.strip()]
    rows = limit_table(args.function, ladder, args.a, args.b, args.c, args.x, _backend(args), args.eps)
    ok = gaps_nonincreasing(rows)
    d = args.digits
    records = [
        {"q": str(q), "q_value": format_decimal(v, d), "classical_value": format_decimal(t, d), "gap": format_decimal(g, d)}
        for q, v, t, g in rows
    ]
    if args.format == "json":
        text = json.dumps({"rows": records, "nonincreasing": ok}) + "\n"
    elif args.format == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=["q", "q_value", "classical_value", "gap"], lineterminator="\n")
        writer.writeheader()
        writer.writerows(records)
        text = buf.getvalue()
    else:
        text = "".join(f"q={r['q']:<10} q-value={r['q_value']}  classical={r['classical_value']}  gap={r['gap']}\n" for r in records)
        text += f"gaps nonincreasing: {'yes' if ok else 'no'}\n"
    _emit(args, text)
    return EXIT_OK if ok else EXIT_VIOLATED


COMMANDS = {"eval": cmd_eval, "verify": cmd_verify, "sweep": cmd_sweep, "limits": cmd_limits}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (QTuranError, UsageError, ValueError, IndexError) as exc:
        print(f"qturan: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
