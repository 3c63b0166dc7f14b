from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qturan.backend import NumericBackend, to_fraction
from qturan.errors import NoGeometricBound, SeriesOverflow
from qturan.qfunctions import QContext, QKummerParams, q_kummer_stream
from qturan.series import TermStream, geometric_stream, partial_sums, sum_with_tail_bound

RATIONAL = NumericBackend.Rational()
FLOAT = NumericBackend.Float(256)


def exact_partial_sum(stream, n, backend=RATIONAL):
    return partial_sums(stream, n - 1, backend)[-1]


@pytest.mark.parametrize("backend", [RATIONAL, FLOAT])
def test_zero_argument_stops_after_first_term(backend):
    sv = sum_with_tail_bound(geometric_stream(0, backend), backend)
    assert sv.value == 1 and sv.terms_used == 1 and sv.tail_bound == 0
    assert sv.terminated


@pytest.mark.parametrize("backend", [RATIONAL, FLOAT])
def test_geometric_half(backend):
    eps = Fraction(1, 10**12)
    sv = sum_with_tail_bound(geometric_stream(Fraction(1, 2), backend), backend, eps)
    assert abs(to_fraction(sv.value) - 2) <= eps
    assert sv.enclosure().contains(2)
    assert to_fraction(sv.tail_bound) <= eps * (1 + Fraction(1, 10**6))


def test_q_kummer_terms_against_long_rational_sum():
    ctx = QContext(Fraction(1, 2), RATIONAL)
    stream = q_kummer_stream(ctx, QKummerParams(1, 2), Fraction(1, 2))
    reference = exact_partial_sum(stream, 60)
    for backend in (RATIONAL, FLOAT):
        s = q_kummer_stream(QContext(Fraction(1, 2), backend), QKummerParams(1, 2), Fraction(1, 2))
        sv = sum_with_tail_bound(s, backend, Fraction(1, 10**20))
        assert abs(to_fraction(sv.value) - reference) <= to_fraction(sv.tail_bound) + Fraction(1, 10**40)


def test_partial_sums_examples():
    assert partial_sums(geometric_stream(Fraction(1, 2), RATIONAL), 2, RATIONAL) == [1, Fraction(3, 2), Fraction(7, 4)]
    assert partial_sums(geometric_stream(Fraction(1, 3), RATIONAL), 0, RATIONAL) == [1]
    ctx = QContext(Fraction(1, 2), RATIONAL)
    sums = partial_sums(q_kummer_stream(ctx, QKummerParams(1, 2), 1), 3, RATIONAL)
    assert sums[:2] == [1, Fraction(5, 3)]
    assert all(s > Fraction(5, 3) for s in sums[2:])
    with pytest.raises(ValueError):
        partial_sums(geometric_stream(1, RATIONAL), -1, RATIONAL)


def test_ratio_one_has_no_geometric_bound():
    with pytest.raises(NoGeometricBound):
        sum_with_tail_bound(geometric_stream(1, RATIONAL), RATIONAL, n_max=100)


def test_n_max_returns_best_available_bound():
    sv = sum_with_tail_bound(geometric_stream(Fraction(9, 10), RATIONAL), RATIONAL, Fraction(1, 10**30), n_max=50)
    assert sv.terms_used == 50
    assert sv.tail_bound > Fraction(1, 10**30)
    assert sv.enclosure().contains(10)


def test_overflow_is_signalled():
    with FLOAT.context():
        huge = FLOAT.convert(2) ** (2**28)
    stream = TermStream(FLOAT.one(), lambda n: huge, lambda n: None if n < 100 else Fraction(1, 2))
    with pytest.raises(SeriesOverflow):
        sum_with_tail_bound(stream, FLOAT, n_max=200)


kummer_cases = st.tuples(
    st.sampled_from([Fraction(1, 10), Fraction(1, 3), Fraction(1, 2), Fraction(3, 4), Fraction(9, 10)]),
    st.integers(min_value=0, max_value=5),
    st.integers(min_value=1, max_value=5),
    st.fractions(min_value=0, max_value=Fraction(9, 10), max_denominator=20),
)


@settings(max_examples=40, deadline=None)
@given(kummer_cases, st.sampled_from([RATIONAL, FLOAT]))
def test_tail_bound_is_sound(case, backend):
    q, a, c, u = case
    x = u / (1 - q)  # (1 - q) x = u < 1
    ctx = QContext(q, backend)
    stream = q_kummer_stream(ctx, QKummerParams(a, c), x)
    sv = sum_with_tail_bound(stream, backend, Fraction(1, 10**8), n_max=5000)
    exact = q_kummer_stream(QContext(q, RATIONAL), QKummerParams(a, c), x)
    reference = exact_partial_sum(exact, 2 * sv.terms_used)
    assert abs(reference - to_fraction(sv.value)) <= to_fraction(sv.tail_bound)


@settings(max_examples=30, deadline=None)
@given(kummer_cases, st.integers(min_value=2, max_value=30), st.integers(min_value=1, max_value=10))
def test_tail_bound_refines_monotonically(case, digits, extra):
    q, a, c, u = case
    x = u / (1 - q)
    stream = q_kummer_stream(QContext(q, FLOAT), QKummerParams(a, c), x)
    loose = sum_with_tail_bound(stream, FLOAT, Fraction(1, 10**digits))
    tight = sum_with_tail_bound(stream, FLOAT, Fraction(1, 10 ** (digits + extra)))
    assert tight.tail_bound <= loose.tail_bound
    capped = sum_with_tail_bound(stream, FLOAT, Fraction(1, 10**60), n_max=20)
    longer = sum_with_tail_bound(stream, FLOAT, Fraction(1, 10**60), n_max=40)
    assert longer.tail_bound <= capped.tail_bound


@settings(max_examples=50, deadline=None)
@given(
    st.fractions(min_value=Fraction(1, 100), max_value=Fraction(99, 100), max_denominator=1000),
    st.integers(min_value=-3, max_value=6),
    st.integers(min_value=1, max_value=6),
    st.fractions(min_value=-5, max_value=5, max_denominator=1000),
)
def test_backends_agree_on_fixed_truncation(q, a, c, x):
    n = 100
    f = partial_sums(q_kummer_stream(QContext(q, FLOAT), QKummerParams(a, c), x), n, FLOAT)[-1]
    r = partial_sums(q_kummer_stream(QContext(q, RATIONAL), QKummerParams(a, c), x), n, RATIONAL)[-1]
    assert abs(to_fraction(f) - r) <= abs(r) * Fraction(1, 2**200) or r == to_fraction(f)
