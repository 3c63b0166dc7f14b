import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qturan.backend import NumericBackend, to_fraction
from qturan.classical import kummer_1f1
from qturan.errors import BackendError, DomainError, NonTerminating, OutOfConvergenceDomain, PoleParameter
from qturan.qfunctions import (
    ConvergenceClass,
    PhiParams,
    QContext,
    QKummerParams,
    QRatioParams,
    Variant,
    basic_hypergeometric,
    basic_hypergeometric_stream,
    classify_convergence,
    domain_radius,
    q_kummer_phi,
    q_kummer_stream,
    q_pochhammer,
    q_pochhammer_infinite,
    q_ratio,
    q_ratio_h,
    q_ratio_hr,
    theorem_hypotheses,
)
from qturan.series import partial_sums

import oracle

RATIONAL = NumericBackend.Rational()
HALF = Fraction(1, 2)


def close(value, expected, rel=1e-40):
    expected = oracle.frac(expected)
    return abs(to_fraction(value) - expected) <= Fraction(rel) * max(1, abs(expected))


def test_context_rejects_q_outside_unit_interval():
    for q in (0, 1, Fraction(3, 2), -HALF):
        with pytest.raises(DomainError):
            QContext(q)


def test_q_pochhammer_examples():
    ctx = QContext(HALF, RATIONAL)
    assert q_pochhammer(ctx, Fraction(7, 3), 0) == 1
    assert q_pochhammer(ctx, ctx.power(2), 3) == Fraction(315, 512)
    q = Fraction(999, 1000)
    c = QContext(q)
    approx = to_fraction(q_pochhammer(c, c.power(2), 2)) / (1 - q) ** 2
    assert abs(approx - 6) < Fraction(2, 100)


def test_q_pochhammer_matches_mpmath():
    ctx = QContext(Fraction(3, 7))
    for a in (Fraction(1, 5), Fraction(-2, 3), Fraction(9, 4)):
        for n in (1, 5, 17):
            assert close(q_pochhammer(ctx, a, n), oracle.qpoch(a, Fraction(3, 7), n))


@settings(max_examples=30, deadline=None)
@given(
    st.fractions(min_value=Fraction(1, 50), max_value=Fraction(49, 50), max_denominator=50),
    st.fractions(min_value=-3, max_value=3, max_denominator=10),
)
def test_q_pochhammer_recurrence(q, a):
    ctx = QContext(q, RATIONAL)
    prev = q_pochhammer(ctx, a, 0)
    for n in range(100):
        nxt = q_pochhammer(ctx, a, n + 1)
        assert nxt == prev * (1 - a * q**n)
        prev = nxt


def test_infinite_product_enclosure():
    ctx = QContext(HALF, NumericBackend.Float(256), Fraction(1, 10**40))
    sv = q_pochhammer_infinite(ctx, HALF)
    ref = oracle.qpoch(HALF, HALF, math.inf)
    assert abs(to_fraction(sv.value) - oracle.frac(ref)) <= to_fraction(sv.tail_bound) + Fraction(1, 10**55)
    assert to_fraction(sv.tail_bound) <= Fraction(1, 10**39)
    assert q_pochhammer(QContext(HALF, RATIONAL), 0, math.inf) == 1
    with pytest.raises(DomainError):
        q_pochhammer(ctx, HALF, -1)


def test_classify_convergence():
    assert classify_convergence(1, 1) is ConvergenceClass.ENTIRE
    assert classify_convergence(2, 1) is ConvergenceClass.UNIT_DISK
    assert classify_convergence(3, 1) is ConvergenceClass.TERMINATING_ONLY
    assert classify_convergence(0, 0) is ConvergenceClass.ENTIRE


@pytest.mark.parametrize("variant", list(Variant))
def test_q_kummer_at_zero(variant):
    assert q_kummer_phi(QContext(Fraction(1, 3)), QKummerParams(Fraction(5, 2), Fraction(1, 2)), 0, variant).value == 1


def test_q_kummer_partial_sum_and_positivity():
    ctx = QContext(HALF, RATIONAL)
    sums = partial_sums(q_kummer_stream(ctx, QKummerParams(1, 2), 1), 1, RATIONAL)
    assert sums == [1, Fraction(5, 3)]
    assert q_kummer_phi(QContext(HALF), QKummerParams(1, 2), 1).value > Fraction(5, 3)


def test_q_kummer_matches_mpmath_both_variants():
    q, a, c, x = Fraction(3, 5), Fraction(3, 2), Fraction(5, 2), Fraction(2)
    ctx = QContext(q)
    shown = q_kummer_phi(ctx, QKummerParams(a, c), x)
    assert close(shown.value, oracle.phi([a], [c], q, x, kummer=True), 1e-28)
    std = q_kummer_phi(ctx, QKummerParams(a, c), x, Variant.STANDARD)
    assert close(std.value, oracle.phi([a], [c], q, x, balance=1, kummer=True), 1e-28)


def test_standard_variant_converges_everywhere():
    ctx = QContext(HALF)
    big = Fraction(40)
    with pytest.raises(OutOfConvergenceDomain):
        q_kummer_phi(ctx, QKummerParams(1, 2), 2)
    sv = q_kummer_phi(ctx, QKummerParams(1, 2), big, Variant.STANDARD)
    assert close(sv.value, oracle.phi([1], [2], HALF, big, balance=1, kummer=True), 1e-25)


def test_displayed_series_terminates_for_nonpositive_integer_a():
    ctx = QContext(HALF, RATIONAL)
    sv = q_kummer_phi(ctx, QKummerParams(-2, 1), 10)
    assert sv.terminated and sv.tail_bound == 0 and sv.terms_used == 3


def test_pole_parameters_rejected():
    with pytest.raises(PoleParameter):
        q_kummer_phi(QContext(HALF), QKummerParams(1, -1), HALF)
    with pytest.raises(PoleParameter):
        basic_hypergeometric(QContext(HALF), PhiParams((1, 1), (0,)), HALF)


def test_q_limit_approaches_kummer():
    target = to_fraction(kummer_1f1(1, 2, 1).value)
    assert abs(target - oracle.frac(oracle.hyp([1], [2], 1))) < Fraction(1, 10**30)
    gaps = [abs(to_fraction(q_kummer_phi(QContext(q), QKummerParams(1, 2), 1).value) - target) for q in ("0.9", "0.99", "0.999")]
    assert gaps[0] > gaps[1] > gaps[2]


def test_basic_hypergeometric_examples():
    ctx = QContext(HALF)
    assert basic_hypergeometric(ctx, PhiParams((1, 2), (3,)), 0).value == 1
    with pytest.raises(OutOfConvergenceDomain):
        basic_hypergeometric(ctx, PhiParams((1, 1), (2,)), 1)
    with pytest.raises(NonTerminating):
        basic_hypergeometric(ctx, PhiParams((1, 1, 1), (2,)), HALF)
    # p > r + 1 is fine when a numerator parameter terminates the series
    assert basic_hypergeometric(ctx, PhiParams((-2, 1, 1), (2,)), HALF).terminated


def test_two_phi_one_against_200_term_rational_sum():
    params = PhiParams((1, 1), (2,))
    exact = basic_hypergeometric_stream(QContext(HALF, RATIONAL), params, HALF)
    reference = partial_sums(exact, 199, RATIONAL)[-1]
    sv = basic_hypergeometric(QContext(HALF), params, HALF)
    assert abs(to_fraction(sv.value) - reference) <= to_fraction(sv.tail_bound) + Fraction(1, 10**55)
    assert close(sv.value, oracle.phi([1, 1], [2], HALF, HALF), 1e-29)


def test_basic_hypergeometric_balance_factor_matches_mpmath():
    q, x = Fraction(2, 3), Fraction(7, 2)
    sv = basic_hypergeometric(QContext(q), PhiParams((Fraction(1, 2),), (Fraction(3, 2), 2)), x)
    assert close(sv.value, oracle.phi([Fraction(1, 2)], [Fraction(3, 2), 2], q, x, balance=2), 1e-28)


@settings(max_examples=25, deadline=None)
@given(
    st.sampled_from([Fraction(1, 3), HALF, Fraction(4, 5)]),
    st.lists(st.integers(min_value=-2, max_value=4), min_size=1, max_size=3),
    st.lists(st.integers(min_value=1, max_value=4), min_size=1, max_size=2),
    st.fractions(min_value=-3, max_value=3, max_denominator=7),
)
def test_stream_reconstruction_equals_direct_terms(q, upper, lower, x):
    ctx = QContext(q, RATIONAL)
    stream = basic_hypergeometric_stream(ctx, PhiParams(tuple(upper), tuple(lower)), x)
    balance = 1 + len(lower) - len(upper)
    for n in range(8):
        direct = x**n / q_pochhammer(ctx, q, n)
        for a in upper:
            direct *= q_pochhammer(ctx, q**a, n)
        for b in lower:
            direct /= q_pochhammer(ctx, q**b, n)
        direct *= ((-1) ** n * q ** (n * (n - 1) // 2)) ** balance if balance >= 0 else 1
        if balance < 0:
            direct /= ((-1) ** n * q ** (n * (n - 1) // 2)) ** (-balance)
        assert stream.term(n) == direct


def test_rational_backend_rejects_fractional_exponents():
    with pytest.raises(BackendError):
        q_kummer_phi(QContext(HALF, RATIONAL), QKummerParams(HALF, 2), HALF)


def test_q_ratio_h_examples():
    ctx = QContext(HALF)
    for x in (0, Fraction(1, 4), Fraction(3, 2)):
        r = q_ratio_h(ctx, QRatioParams(3, 2, 0), x)
        assert r.enclosure.contains(1)
    assert q_ratio_h(ctx, QRatioParams(3, 2, 1), 0).lower == 1
    assert q_ratio_h(ctx, QRatioParams(3, 2, 1), Fraction(1, 10**6)).lower > 1
    r = q_ratio_h(ctx, QRatioParams(3, 2, 1), HALF)
    assert r.lower >= 1
    ref = oracle.phi_ratio([3], [2], [1], HALF, HALF, kummer=True)
    assert close(r.value, ref, 1e-28)
    assert r.upper - r.lower < Fraction(1, 10**28)


def test_q_ratio_h_hypothesis_flag():
    ctx = QContext(HALF)
    with pytest.raises(DomainError):
        q_ratio_h(ctx, QRatioParams(1, 2, 1), HALF, check_hypotheses=True)
    q_ratio_h(ctx, QRatioParams(1, 2, 1), HALF)  # evaluated without the flag
    assert theorem_hypotheses(QRatioParams(3, 2, 1))[0]
    assert not theorem_hypotheses(QRatioParams(3, 2, 2))[0]
    assert not theorem_hypotheses(QRatioParams(3, Fraction(3, 2), 1))[0] is False


def test_q_ratio_hr_examples():
    ctx = QContext(HALF)
    params = QRatioParams((1, 2), (2,), (HALF,))
    assert q_ratio_hr(ctx, params, 0).lower == 1
    assert q_ratio_hr(ctx, QRatioParams((1, 2), (2,), (0,)), HALF).enclosure.contains(1)
    r = q_ratio_hr(ctx, params, HALF)
    assert r.lower > 1
    ref = oracle.phi_ratio([1, 2], [2], [HALF], HALF, HALF)
    assert close(r.value, ref, 1e-29)
    with pytest.raises(OutOfConvergenceDomain):
        q_ratio_hr(ctx, params, 1)


def test_ratio_dispatch_and_radius():
    ctx = QContext(Fraction(1, 4))
    kummer, hyper = QRatioParams(3, 2, 1), QRatioParams((1, 2), (2,), (1,))
    assert domain_radius(ctx, kummer) == Fraction(4, 3)
    assert domain_radius(ctx, hyper) == 1
    assert q_ratio(ctx, kummer, HALF).value == q_ratio_h(ctx, kummer, HALF).value
    assert q_ratio(ctx, hyper, HALF).value == q_ratio_hr(ctx, hyper, HALF).value
    with pytest.raises(DomainError):
        QRatioParams((1, 2), (2,), (1, 1))
    with pytest.raises(DomainError):
        QRatioParams((1, 2, 3), (2,), (1,))


@settings(max_examples=25, deadline=None)
@given(
    st.sampled_from([Fraction(1, 10), Fraction(1, 2), Fraction(9, 10)]),
    st.integers(min_value=2, max_value=5),
    st.integers(min_value=1, max_value=4),
    st.integers(min_value=1, max_value=3),
    st.fractions(min_value=0, max_value=Fraction(19, 20), max_denominator=40),
)
def test_positive_terms_and_turan_for_hypothesis_points(q, b, c, da, u):
    if c >= b:
        c = b - 1
    params = QRatioParams(b + da, b, c)
    ctx = QContext(q)
    x = u / (1 - q)
    phi = q_kummer_phi(ctx, QKummerParams(b + da, b), x)
    assert phi.value >= 1
    assert q_ratio_h(ctx, params, x).lower >= 1 - Fraction(1, 10**20)
