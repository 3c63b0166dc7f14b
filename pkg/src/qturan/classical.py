"""Classical reference functions: exponential sections and remainders, 1F1, pFq and their ratios.

These are the ``q -> 1`` limits of the functions in :mod:`qturan.qfunctions`
and the exponential-remainder quotients ``f_n``/``g_n``.
"""

from __future__ import annotations

import functools
import math
import threading
from dataclasses import dataclass
from fractions import Fraction

import gmpy2

from .backend import Enclosure, Number, NumericBackend, to_fraction
from .errors import BackendError, DomainError, NonTerminating, OutOfConvergenceDomain, PoleParameter, PrecisionExhausted
from .qfunctions import ConvergenceClass, RatioValue, unit_ratio, classify_convergence, ratio_of_series
from .series import DEFAULT_EPS, DEFAULT_N_MAX, SeriesValue, TermStream, sum_with_tail_bound

FLOAT256 = NumericBackend.Float(256)


def _params(values) -> tuple:
    if isinstance(values, (int, float, str, Fraction)):
        values = (values,)
    return tuple(to_fraction(v) for v in values)


def _nonpositive_integer(v: Fraction) -> bool:
    return v.denominator == 1 and v <= 0


class _PFQCoefficients:
    """Lazily grown ratios ``prod (a_j + n) / (prod (b_j + n) (n + 1))``."""

    def __init__(self, backend: NumericBackend, upper: tuple, lower: tuple):
        for b in lower:
            if _nonpositive_integer(b):
                raise PoleParameter(f"lower parameter {b} is a nonpositive integer")
        self.backend = backend
        self.upper = upper
        self.lower_ext = lower + (Fraction(1),)
        with backend.context():
            self.one = backend.one()
            self.up_b = [backend.convert(a) for a in upper]
            self.low_b = [backend.convert(b) for b in self.lower_ext]
        self._ratios: list = []
        self._lock = threading.Lock()
        amp = 3.0
        for v in upper + lower:
            shifted = [abs(v + n) for n in range(max(0, math.floor(-v) - 1), max(0, math.floor(-v)) + 3)]
            nearest = min(s for s in shifted if s != 0)
            amp += 2.0 + float(abs(v) / nearest)
        self.amplification = amp

    def ratio(self, n: int) -> Number:
        try:
            return self._ratios[n]
        except IndexError:
            self._extend(max(n + 1, 2 * len(self._ratios), 32))
            return self._ratios[n]

    def _extend(self, upto: int) -> None:
        backend = self.backend
        with self._lock, backend.context():
            for n in range(len(self._ratios), upto):
                num = self.one
                for a, ab in zip(self.upper, self.up_b):
                    if a + n == 0:
                        num = backend.zero()
                        break
                    num = num * (ab + n)
                den = self.one
                for bb in self.low_b:
                    den = den * (bb + n)
                self._ratios.append(num / den)

    def bound(self, n: int):
        if len(self.upper) > len(self.lower_ext):
            return None
        if any(b + n <= 0 for b in self.lower_ext):
            return None
        backend = self.backend
        with backend.context():
            val = self.one
            k = len(self.upper)
            for ab, bb in zip(self.up_b, self.low_b[:k]):
                g = abs(ab + n) / (bb + n)
                if g > self.one:
                    val = val * g
            for bb in self.low_b[k:]:
                val = val / (bb + n)
            return val


@functools.lru_cache(maxsize=1024)
def _coefficients(backend: NumericBackend, upper: tuple, lower: tuple) -> _PFQCoefficients:
    return _PFQCoefficients(backend, upper, lower)


def pfq_stream(upper, lower, x, backend: NumericBackend = FLOAT256, first_term=1) -> TermStream:
    """Term stream of ``first_term * pFq(upper; lower; x)``."""
    coef = _coefficients(backend, _params(upper), _params(lower))
    with backend.context():
        xb = backend.convert(x)
        ax = abs(xb)
        t0 = backend.convert(first_term)

    def ratio(n):
        return xb * coef.ratio(n)

    def bound(n):
        b = coef.bound(n)
        return None if b is None else b * ax

    return TermStream(t0, ratio, bound, coef.amplification)


def generalized_pfq(upper, lower, x, backend: NumericBackend = FLOAT256, eps=DEFAULT_EPS, n_max: int = DEFAULT_N_MAX) -> SeriesValue:
    """``pFq(a_1..a_p; b_1..b_r; x)`` with a certified tail bound."""
    upper, lower, x = _params(upper), _params(lower), to_fraction(x)
    for b in lower:
        if _nonpositive_integer(b):
            raise PoleParameter(f"lower parameter {b} is a nonpositive integer")
    terminating = any(_nonpositive_integer(a) for a in upper)
    if x != 0 and not terminating:
        cls = classify_convergence(len(upper), len(lower))
        if cls is ConvergenceClass.UNIT_DISK and abs(x) >= 1:
            raise OutOfConvergenceDomain(f"{len(upper)}F{len(lower)} needs |x| < 1, got {x}")
        if cls is ConvergenceClass.TERMINATING_ONLY:
            raise NonTerminating(f"{len(upper)}F{len(lower)} converges only at x = 0 unless it terminates")
    return sum_with_tail_bound(pfq_stream(upper, lower, x, backend), backend, eps, n_max)


def kummer_1f1(a, c, x, backend: NumericBackend = FLOAT256, eps=DEFAULT_EPS, n_max: int = DEFAULT_N_MAX) -> SeriesValue:
    """Kummer's ``1F1(a; c; x)``."""
    return generalized_pfq((a,), (c,), x, backend, eps, n_max)


# --- exponential sections and remainders -------------------------------------


@dataclass(frozen=True)
class ExpSplit:
    """``exp(x) = section + remainder`` with ``section = S_n(x)`` and ``remainder = R_n(x)``."""

    n: int
    x: Fraction
    section: Number
    remainder: Number
    remainder_bound: Number
    terms_used: int


def _remainder(n: int, x: Fraction, backend: NumericBackend, eps) -> SeriesValue:
    # R_n(x) = x^(n+1)/(n+1)! * 1F1(1; n+2; x), summed forward from its first term
    if x == 0:
        return SeriesValue(backend.zero(), 1, backend.zero(), True)
    first = x ** (n + 1) / math.factorial(n + 1)
    stream = pfq_stream((1,), (n + 2,), x, backend, first_term=first)
    # tolerance relative to the leading term, which is below the remainder for x > 0
    return sum_with_tail_bound(stream, backend, to_fraction(eps) * first, DEFAULT_N_MAX)


def exp_split(n: int, x, backend: NumericBackend = FLOAT256, eps=DEFAULT_EPS) -> ExpSplit:
    if n < 0:
        raise DomainError("n must be nonnegative")
    x = to_fraction(x)
    if x < 0:
        raise DomainError("x must be nonnegative")
    section_exact = sum(x**k / math.factorial(k) for k in range(n + 1))
    rem = _remainder(n, x, backend, eps)
    with backend.context():
        section = backend.convert(section_exact)
    return ExpSplit(n, x, section, rem.value, rem.tail_bound, rem.terms_used)


def f_ratio(n: int, x, backend: NumericBackend = FLOAT256, eps=DEFAULT_EPS) -> RatioValue:
    """``f_n(x) = R_(n-1)(x) R_(n+1)(x) / R_n(x)^2``, with limit ``(n+1)/(n+2)`` at 0."""
    if n < 1:
        raise DomainError("n must be a positive integer")
    x = to_fraction(x)
    if x < 0:
        raise DomainError("x must be nonnegative")
    if x == 0:
        limit = Fraction(n + 1, n + 2)
        with backend.context():
            return RatioValue(backend.convert(limit), Enclosure.point(limit), 1)
    lo = _remainder(n - 1, x, backend, eps)
    hi = _remainder(n + 1, x, backend, eps)
    mid = _remainder(n, x, backend, eps)
    return ratio_of_series(backend, lo, hi, mid)


def g_ratio(n: int, x, backend: NumericBackend = FLOAT256, eps=DEFAULT_EPS) -> RatioValue:
    """``1F1(1; n+1; x) 1F1(1; n+3; x) / 1F1(1; n+2; x)^2``."""
    if n < 1:
        raise DomainError("n must be a positive integer")
    x = to_fraction(x)
    if x < 0:
        raise DomainError("x must be nonnegative")
    return ratio_of_series(
        backend,
        kummer_1f1(1, n + 1, x, backend, eps),
        kummer_1f1(1, n + 3, x, backend, eps),
        kummer_1f1(1, n + 2, x, backend, eps),
    )


def ramanujan_theta_enclosure(n: int, target_bits: int = 256, max_precision: int = 1 << 16) -> Enclosure:
    """Enclosure of ``n! (e^n / 2 - S_(n-1)(n)) / n^n`` of relative width below ``2**-target_bits``.

    ``S_(n-1)(n)`` is exact; ``e^n`` comes from a correctly rounded MPFR
    exponential whose precision starts at ``n log2(e) + 64`` bits and doubles
    until the cancellation is resolved.
    """
    if n < 1:
        raise DomainError("n must be a positive integer")
    section = sum(Fraction(n**k, math.factorial(k)) for k in range(n))
    scale = Fraction(math.factorial(n), n**n)
    prec = max(target_bits, math.ceil(n * math.log2(math.e)) + 64)
    while prec <= max_precision:
        with gmpy2.context(precision=prec):
            e_n = to_fraction(gmpy2.exp(n))
        half_ulp = e_n / (1 << (prec - 1))
        diff = e_n / 2 - section
        enc = Enclosure.around(diff, half_ulp / 2) * Enclosure.point(scale)
        if enc.excludes_zero() and enc.width <= abs(enc.midpoint) / (1 << target_bits):
            return enc
        prec *= 2
    raise PrecisionExhausted(f"theta({n}) unresolved at {max_precision} bits")


def ramanujan_theta(n: int, backend: NumericBackend = FLOAT256) -> Number:
    """Ramanujan's ``theta(n)`` from ``e^n / 2 = S_(n-1)(n) + (n^n / n!) theta(n)``."""
    if backend.is_exact:
        raise BackendError("theta(n) involves e^n and cannot be computed exactly")
    enc = ramanujan_theta_enclosure(n, backend.precision_bits + 8)
    with backend.context():
        return backend.convert(enc.midpoint)


# --- classical ratio functions ------------------------------------------------


@dataclass(frozen=True)
class ClassicalRatioParams:
    """Parameter vectors of ``pFq(a; b-c) pFq(a; b+c) / pFq(a; b)^2``."""

    a: tuple
    b: tuple
    c: tuple

    def __post_init__(self) -> None:
        a, b, c = _params(self.a), _params(self.b), _params(self.c)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        if len(b) != len(c):
            raise DomainError("b and c must have equal length")
        for bj, cj in zip(b, c):
            for v in (bj - cj, bj, bj + cj):
                if _nonpositive_integer(v):
                    raise PoleParameter(f"lower parameter {v} is a nonpositive integer")


def classical_ratio_h(params: ClassicalRatioParams, x, backend: NumericBackend = FLOAT256, eps=DEFAULT_EPS) -> RatioValue:
    """``h(a, b, c, x)`` for 1F1 (scalar parameters) or ``h_{p,q}`` for vectors."""
    if not any(params.c):
        return unit_ratio(backend, generalized_pfq(params.a, params.b, x, backend, eps))
    minus = tuple(b - c for b, c in zip(params.b, params.c))
    plus = tuple(b + c for b, c in zip(params.b, params.c))
    return ratio_of_series(
        backend,
        generalized_pfq(params.a, minus, x, backend, eps),
        generalized_pfq(params.a, plus, x, backend, eps),
        generalized_pfq(params.a, params.b, x, backend, eps),
    )
