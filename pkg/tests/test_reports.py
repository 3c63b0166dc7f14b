from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qturan.qfunctions import QContext, QRatioParams
from qturan.reports import (
    format_decimal,
    from_json_line,
    reports_from_csv,
    reports_from_jsonl,
    reports_to_csv,
    reports_to_jsonl,
    to_human,
    to_json_line,
)
from qturan.verifier import GridSpec, ParameterPoint, SweepSpec, Target, TolPolicy, q_kummer_handle, run_target, sweep, verify_turan

HALF = Fraction(1, 2)


@pytest.fixture(scope="module")
def reports():
    spec = SweepSpec(
        (ParameterPoint(HALF, 3, 2, 1), ParameterPoint(HALF, 3, 1, 1), ParameterPoint(Fraction(9, 10), (1, 3), (2,), (1,))),
        GridSpec(count=12),
    )
    out = sweep(spec, [Target.TURAN_QKUMMER, Target.MONOTONE_HR])
    out.append(run_target(Target.COEFFICIENT_MONOTONE, ParameterPoint(HALF, 3, 2, 1), GridSpec(), TolPolicy.exact()))
    out.append(run_target(Target.MONOTONE_HR, ParameterPoint(Fraction(9, 10), (1, 3), (2,), (1,)),
                          GridSpec(Fraction(9, 10), Fraction(19, 20), 2, "linear"), TolPolicy()))
    out.append(run_target(Target.CLASSICAL_BOUNDS, ParameterPoint(n=2), GridSpec(0, 50, 6), TolPolicy()))
    return out


def test_format_decimal_modes():
    third = Fraction(1, 3)
    assert format_decimal(third, 5) == "3.3333e-1"
    assert format_decimal(third, 5, "ceil") == "3.3334e-1"
    assert format_decimal(-third, 5, "floor") == "-3.3334e-1"
    assert format_decimal(Fraction(999999, 10**6), 3, "ceil") == "1e+0"
    assert format_decimal(0) == "0"
    assert format_decimal(Fraction(25, 10), 1) == "2e+0"  # ties to even


@given(st.fractions(min_value=-10**9, max_value=10**9, max_denominator=10**12).filter(bool), st.integers(min_value=1, max_value=50))
def test_directed_rounding_brackets(x, digits):
    lo = Fraction(format_decimal(x, digits, "floor"))
    hi = Fraction(format_decimal(x, digits, "ceil"))
    assert lo <= x <= hi
    assert Fraction(format_decimal(lo, digits, "floor")) == lo


def test_json_round_trip_is_byte_identical(reports):
    for timing in (True, False):
        text = reports_to_jsonl(reports, timing)
        assert reports_to_jsonl(reports_from_jsonl(text), timing) == text
    line = to_json_line(reports[0])
    for key in ("target", "params", "grid", "outcome", "margin", "tolerances", "terms_used_max", "wall_time_ms"):
        assert f'"{key}"' in line
    assert from_json_line(line) == reports[0] or to_json_line(from_json_line(line)) == line


def test_csv_round_trip_is_byte_identical(reports):
    for timing in (True, False):
        text = reports_to_csv(reports, timing)
        assert reports_to_csv(reports_from_csv(text), timing) == text


def test_rational_reports_use_exact_strings(reports):
    coeff = reports_to_jsonl([reports[-3]])
    assert '"margin": "' in coeff and "/" in coeff and "e-" not in coeff.split('"tolerances"')[0].split('"margin"')[1]


def test_serialised_bounds_still_enclose(reports):
    rep = reports[0]
    parsed = from_json_line(to_json_line(rep))
    for (lo, hi), (plo, phi) in zip(rep.samples, parsed.samples):
        assert plo <= lo and hi <= phi


def test_determinism_without_timing():
    def run():
        fn = q_kummer_handle(QContext(Fraction(3, 10)), QRatioParams(4, 2, 1))
        return reports_to_jsonl([verify_turan(fn, GridSpec(count=15).points(fn.radius))], timing=False)

    assert run() == run()


def test_human_summary(reports):
    text = to_human(reports[0])
    assert text.startswith("turan-qkummer [q=1/2 a=3 b=2 c=1] VERIFIED")
    violated = [r for r in reports if r.outcome.status.value == "violated"]
    assert violated and "at=" in to_human(violated[0])
