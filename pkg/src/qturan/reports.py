"""Serialization of verification reports: JSON lines, CSV and a human-readable summary.

Numbers are written as strings.  Rational-backend reports use exact ``p/q``
strings; float-backend reports use scientific decimals with ``DIGITS``
significant digits, rounded outward for lower/upper bounds.  Parsing and
re-serializing a report reproduces its text byte for byte.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Iterable, Optional

from .backend import to_fraction
from .verifier import Outcome, Status, Target, VerificationReport

DIGITS = 40

CSV_COLUMNS = [
    "report",
    "target",
    "params",
    "status",
    "at",
    "reason",
    "margin",
    "tolerances",
    "exploratory",
    "terms_used_max",
    "wall_time_ms",
    "index",
    "x",
    "lower",
    "upper",
]


def format_decimal(x: Fraction, digits: int = DIGITS, mode: str = "nearest") -> str:
    """Canonical scientific notation of ``x`` rounded to ``digits`` significant digits.

    ``mode`` is ``"nearest"`` (ties to even), ``"floor"`` or ``"ceil"``.
    """
    x = to_fraction(x)
    if x == 0:
        return "0"
    sign = "-" if x < 0 else ""
    ax = abs(x)
    e = len(str(ax.numerator)) - len(str(ax.denominator))
    if Fraction(10) ** e > ax:
        e -= 1
    if Fraction(10) ** (e + 1) <= ax:
        e += 1
    scaled = ax / Fraction(10) ** (e - digits + 1)
    m, rem = divmod(scaled.numerator, scaled.denominator)
    up = {
        "nearest": 2 * rem > scaled.denominator or (2 * rem == scaled.denominator and m % 2 == 1),
        "floor": rem != 0 and x < 0,
        "ceil": rem != 0 and x > 0,
    }[mode]
    if up:
        m += 1
    if m == 10**digits:
        m //= 10
        e += 1
    text = str(m).rstrip("0") or "0"
    mantissa = text[0] + ("." + text[1:] if len(text) > 1 else "")
    return f"{sign}{mantissa}e{e:+d}"


def format_exact(x: Fraction) -> str:
    x = to_fraction(x)
    return str(x)


class _Codec:
    def __init__(self, exact: bool, digits: int = DIGITS):
        self.exact = exact
        self.digits = digits

    def num(self, x, mode: str = "nearest") -> Optional[str]:
        if x is None:
            return None
        if self.exact:
            return format_exact(x)
        return format_decimal(x, self.digits, mode)


def _codec(report: VerificationReport) -> _Codec:
    return _Codec(report.tolerances.get("backend") == "rational")


def _params_dict(params: dict) -> dict:
    out = {}
    for key, value in params.items():
        if isinstance(value, (list, tuple)):
            out[key] = [format_exact(v) for v in value]
        elif isinstance(value, (int, Fraction)):
            out[key] = format_exact(value)
        else:
            out[key] = value
    return out


def _tolerances_dict(tol: dict) -> dict:
    out = {}
    for key, value in tol.items():
        out[key] = format_exact(value) if isinstance(value, Fraction) else value
    return out


def _outcome_at(report: VerificationReport, codec: _Codec):
    if report.outcome.at is None:
        return None
    return [codec.num(v) for v in report.outcome.at]


def report_to_dict(report: VerificationReport, timing: bool = True) -> dict:
    codec = _codec(report)
    out = {
        "target": report.target.value,
        "params": _params_dict(report.params),
        "grid": [codec.num(x) for x in report.grid],
        "outcome": {
            "status": report.outcome.status.value,
            "at": _outcome_at(report, codec),
            "reason": report.outcome.reason,
        },
        "margin": codec.num(report.margin, "floor"),
        "tolerances": _tolerances_dict(report.tolerances),
        "samples": [[codec.num(lo, "floor"), codec.num(hi, "ceil")] for lo, hi in report.samples],
        "exploratory": report.exploratory,
        "terms_used_max": report.terms_used_max,
    }
    if timing and report.wall_time_ms is not None:
        out["wall_time_ms"] = report.wall_time_ms
    return out


def _parse_opt(text):
    return None if text is None else to_fraction(text)


def _parse_params(params: dict) -> dict:
    out = {}
    for key, value in params.items():
        if isinstance(value, list):
            out[key] = [to_fraction(v) for v in value]
        elif key == "n":
            out[key] = int(value)
        elif key == "variant":
            out[key] = value
        else:
            out[key] = to_fraction(value)
    return out


def _parse_tolerances(tol: dict) -> dict:
    out = {}
    for key, value in tol.items():
        out[key] = to_fraction(value) if key in ("eps", "tol") else value
    return out


def report_from_dict(data: dict) -> VerificationReport:
    outcome = data["outcome"]
    at = outcome.get("at")
    return VerificationReport(
        target=Target(data["target"]),
        params=_parse_params(data["params"]),
        grid=tuple(to_fraction(x) for x in data["grid"]),
        outcome=Outcome(Status(outcome["status"]), None if at is None else tuple(to_fraction(v) for v in at), outcome.get("reason", "")),
        margin=_parse_opt(data.get("margin")),
        tolerances=_parse_tolerances(data["tolerances"]),
        samples=tuple((to_fraction(lo), to_fraction(hi)) for lo, hi in data.get("samples", [])),
        terms_used_max=int(data.get("terms_used_max", 0)),
        exploratory=bool(data.get("exploratory", False)),
        wall_time_ms=data.get("wall_time_ms"),
    )


def to_json_line(report: VerificationReport, timing: bool = True) -> str:
    return json.dumps(report_to_dict(report, timing))


def from_json_line(line: str) -> VerificationReport:
    return report_from_dict(json.loads(line))


def reports_to_jsonl(reports: Iterable[VerificationReport], timing: bool = True) -> str:
    return "".join(to_json_line(r, timing) + "\n" for r in reports)


def reports_from_jsonl(text: str) -> list:
    return [from_json_line(line) for line in text.splitlines() if line.strip()]


def reports_to_csv(reports: Iterable[VerificationReport], timing: bool = True) -> str:
    """One row per grid point; report-level fields are repeated on every row."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for idx, report in enumerate(reports):
        d = report_to_dict(report, timing)
        common = [
            idx,
            d["target"],
            json.dumps(d["params"]),
            d["outcome"]["status"],
            "" if d["outcome"]["at"] is None else json.dumps(d["outcome"]["at"]),
            d["outcome"]["reason"],
            "" if d["margin"] is None else d["margin"],
            json.dumps(d["tolerances"]),
            int(d["exploratory"]),
            d["terms_used_max"],
            "" if "wall_time_ms" not in d else repr(d["wall_time_ms"]),
        ]
        rows = list(zip(d["grid"], d["samples"])) if d["samples"] else [(x, ("", "")) for x in d["grid"]]
        if not rows:
            writer.writerow(common + ["", "", "", ""])
        for i, (x, (lo, hi)) in enumerate(rows):
            writer.writerow(common + [i, x, lo, hi])
    return buf.getvalue()


def reports_from_csv(text: str) -> list:
    reader = csv.DictReader(io.StringIO(text))
    grouped: dict = {}
    for row in reader:
        grouped.setdefault(row["report"], []).append(row)
    out = []
    for rows in grouped.values():
        first = rows[0]
        points = [r for r in rows if r["index"] != ""]
        samples = [[r["lower"], r["upper"]] for r in points if r["lower"] != ""]
        data = {
            "target": first["target"],
            "params": json.loads(first["params"]),
            "grid": [r["x"] for r in points],
            "outcome": {
                "status": first["status"],
                "at": json.loads(first["at"]) if first["at"] else None,
                "reason": first["reason"],
            },
            "margin": first["margin"] or None,
            "tolerances": json.loads(first["tolerances"]),
            "samples": samples,
            "exploratory": first["exploratory"] == "1",
            "terms_used_max": int(first["terms_used_max"]),
        }
        if first["wall_time_ms"]:
            data["wall_time_ms"] = float(first["wall_time_ms"])
        out.append(report_from_dict(data))
    return out


def to_human(report: VerificationReport) -> str:
    params = " ".join(
        f"{k}={','.join(map(str, v)) if isinstance(v, list) else v}" for k, v in _params_dict(report.params).items()
    )
    line = f"{report.target.value} [{params}] {report.outcome.status.value.upper()}"
    if report.margin is not None:
        line += f" margin={format_decimal(report.margin, 6, 'floor')}"
    line += f" points={len(report.grid)}"
    if report.exploratory:
        line += " (exploratory: hypotheses not met)"
    if report.outcome.at is not None:
        line += f" at={','.join(format_decimal(v, 8) for v in report.outcome.at)}"
    if report.outcome.reason:
        line += f" ({report.outcome.reason})"
    return line
