"""q-shifted factorials, q-Kummer and basic hypergeometric series, and the q-ratio functions.

All exponents are real numbers ``e`` standing for the parameter ``q**e``;
the rational backend accepts integer exponents only.
"""

from __future__ import annotations

import enum
import functools
import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction

from .backend import Enclosure, Number, NumericBackend, to_fraction
from .errors import (
    BackendError,
    DomainError,
    NonTerminating,
    OutOfConvergenceDomain,
    PoleParameter,
)
from .series import DEFAULT_EPS, DEFAULT_N_MAX, SeriesValue, TermStream, sum_with_tail_bound


@dataclass(frozen=True)
class QContext:
    """The base ``q`` in (0, 1) together with the arithmetic and truncation policy."""

    q: Fraction
    backend: NumericBackend = field(default_factory=NumericBackend.Float)
    eps: Fraction = DEFAULT_EPS
    n_max: int = DEFAULT_N_MAX

    def __post_init__(self) -> None:
        object.__setattr__(self, "q", to_fraction(self.q))
        object.__setattr__(self, "eps", to_fraction(self.eps))
        if not 0 < self.q < 1:
            raise DomainError(f"q must lie in (0, 1), got {self.q}")
        if self.eps <= 0:
            raise DomainError("eps must be positive")

    @functools.cached_property
    def qb(self) -> Number:
        """``q`` converted to the backend."""
        with self.backend.context():
            return self.backend.convert(self.q)

    def power(self, exponent) -> Number:
        return _q_power(self.backend, self.q, to_fraction(exponent))


class Variant(enum.Enum):
    """Which q-Kummer series to sum.

    ``AS_DISPLAYED`` has the all-positive terms
    ``(q^a;q)_n (1-q)^n x^n / ((q^c;q)_n (q;q)_n)``; ``STANDARD`` is
    ``1phi1(q^a; q^c; q, (1-q)x)`` including the factor ``(-1)^n q^(n(n-1)/2)``.
    """

    AS_DISPLAYED = "displayed"
    STANDARD = "standard"


class ConvergenceClass(enum.Enum):
    ENTIRE = "entire"
    UNIT_DISK = "unit-disk"
    TERMINATING_ONLY = "terminating-only"


def _exponents(values) -> tuple:
    if isinstance(values, (int, float, str, Fraction)):
        values = (values,)
    return tuple(to_fraction(v) for v in values)


@dataclass(frozen=True)
class QKummerParams:
    a: Fraction
    c: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", to_fraction(self.a))
        object.__setattr__(self, "c", to_fraction(self.c))


@dataclass(frozen=True)
class PhiParams:
    """Upper exponents ``a_1..a_p`` and lower exponents ``b_1..b_r`` of a basic series."""

    upper: tuple
    lower: tuple

    def __post_init__(self) -> None:
        object.__setattr__(self, "upper", _exponents(self.upper))
        object.__setattr__(self, "lower", _exponents(self.lower))

    @property
    def balance(self) -> int:
        """Exponent ``1 + r - p`` of the factor ``(-1)^n q^(n(n-1)/2)``."""
        return 1 + len(self.lower) - len(self.upper)

    @property
    def terminating(self) -> bool:
        return any(_nonpositive_integer(a) for a in self.upper)


@dataclass(frozen=True)
class QRatioParams:
    """Exponent vectors identifying ``h`` (``len(a) == 1``) or ``h_r`` (``len(a) == r + 1``)."""

    a: tuple
    b: tuple
    c: tuple

    def __post_init__(self) -> None:
        a, b, c = _exponents(self.a), _exponents(self.b), _exponents(self.c)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        if len(b) != len(c) or not b:
            raise DomainError("b and c must be nonempty vectors of equal length")
        if len(a) not in (1, len(b) + 1) or (len(a) == 1 and len(b) != 1):
            raise DomainError(
                f"need len(a) == 1 with scalar b, c (q-Kummer ratio) or len(a) == len(b) + 1, "
                f"got {len(a)} and {len(b)}"
            )

    @property
    def kind(self) -> str:
        return "kummer" if len(self.a) == 1 else "hyper"

    @property
    def r(self) -> int:
        return len(self.b)

    @property
    def lower_minus(self) -> tuple:
        return tuple(b - c for b, c in zip(self.b, self.c))

    @property
    def lower_plus(self) -> tuple:
        return tuple(b + c for b, c in zip(self.b, self.c))


def theorem_hypotheses(params: QRatioParams) -> tuple[bool, str]:
    """Whether ``params`` satisfy the monotonicity theorem for their ratio kind."""
    if params.kind == "kummer":
        (a,), (b,), (c,) = params.a, params.b, params.c
        if a > b > c > 0 and b > 1:
            return True, ""
        return False, f"need a > b > c > 0 and b > 1 (a={a}, b={b}, c={c})"
    for j, (b, c) in enumerate(zip(params.b, params.c)):
        if not (b > c > 0 and b > 1):
            return False, f"need b_j > c_j > 0 and b_j > 1 (j={j + 1}, b={b}, c={c})"
    return True, ""


def classify_convergence(p_count: int, r_count: int) -> ConvergenceClass:
    if p_count < 0 or r_count < 0:
        raise DomainError("parameter counts must be nonnegative")
    if p_count < r_count + 1:
        return ConvergenceClass.ENTIRE
    if p_count == r_count + 1:
        return ConvergenceClass.UNIT_DISK
    return ConvergenceClass.TERMINATING_ONLY


def _nonpositive_integer(e: Fraction) -> bool:
    return e.denominator == 1 and e <= 0


# --- cached q-powers and coefficient ratios ---------------------------------


@functools.lru_cache(maxsize=4096)
def _q_power(backend: NumericBackend, q: Fraction, exponent: Fraction) -> Number:
    with backend.context():
        return backend.power(backend.convert(q), exponent)


class _QCoefficients:
    """Lazily grown coefficient ratios ``c[n+1]/c[n]`` of a basic series (argument excluded)."""

    def __init__(self, backend: NumericBackend, q: Fraction, upper, lower, balance: int):
        self.backend = backend
        self.upper = upper
        self.lower = lower
        self.lower_ext = lower + (Fraction(1),)  # (q;q)_n
        self.balance = balance
        for b in self.lower:
            if _nonpositive_integer(b):
                raise PoleParameter(f"lower exponent {b} makes (q^{b};q)_n vanish")
        if backend.is_exact:
            for e in upper + lower:
                if e.denominator != 1:
                    raise BackendError(f"rational backend needs integer exponents, got {e}")
        with backend.context():
            self.one = backend.one()
            self.qb = backend.convert(q)
            self.q_up = [_q_power(backend, q, e) for e in upper]
            self.q_low = [_q_power(backend, q, e) for e in self.lower_ext]
        self._ratios: list = []
        self._qn: list = []
        self._lock = threading.Lock()
        self.amplification = self._amplification(float(q))

    def _amplification(self, qf: float) -> float:
        amp = 4.0 + 2.0 * abs(self.balance)
        for e in self.upper + self.lower_ext:
            # cancellation in 1 - q^(e+n) is worst where |e+n| is smallest
            centre = max(0, math.floor(-e))
            shifted = [e + n for n in range(max(0, centre - 1), centre + 3)]
            ef = float(min((v for v in shifted if v != 0), key=abs))
            y = qf**ef
            amp += 4.0 + 3.0 * y / abs(1.0 - y)
        return amp

    def q_n(self, n: int) -> Number:
        if n >= len(self._qn):
            self._extend(n + 1)
        return self._qn[n]

    def ratio(self, n: int) -> Number:
        try:
            return self._ratios[n]
        except IndexError:
            self._extend(max(n + 1, 2 * len(self._ratios), 32))
            return self._ratios[n]

    def _extend(self, upto: int) -> None:
        backend = self.backend
        with self._lock, backend.context():
            one = self.one
            while len(self._qn) < upto:
                self._qn.append(backend.power(self.qb, Fraction(len(self._qn))))
            for n in range(len(self._ratios), upto):
                qn = self._qn[n]
                num = one
                for e, qa in zip(self.upper, self.q_up):
                    if e + n == 0:
                        num = backend.zero()
                        break
                    num = num * (one - qa * qn)
                den = one
                for qb in self.q_low:
                    den = den * (one - qb * qn)
                r = num / den
                if self.balance and r != 0:
                    r = r * qn**self.balance
                    if self.balance % 2:
                        r = -r
                self._ratios.append(r)

    def bound(self, n: int):
        """Upper bound on ``sup_{m >= n} |ratio(m)|``, or None when none is available."""
        if self.balance < 0:
            return None
        if any(b + n <= 0 for b in self.lower_ext):
            return None
        qn = self.q_n(n)
        backend = self.backend
        with backend.context():
            one = self.one
            val = one
            k = min(len(self.q_up), len(self.q_low))
            for qa, qb in zip(self.q_up[:k], self.q_low[:k]):
                g = abs(one - qa * qn) / (one - qb * qn)
                if g > one:
                    val = val * g
            for qa in self.q_up[k:]:
                g = abs(one - qa * qn)
                if g > one:
                    val = val * g
            for qb in self.q_low[k:]:
                val = val / (one - qb * qn)
            if self.balance:
                val = val * qn**self.balance
            return val


@functools.lru_cache(maxsize=1024)
def _coefficients(backend: NumericBackend, q: Fraction, upper, lower, balance: int) -> _QCoefficients:
    return _QCoefficients(backend, q, upper, lower, balance)


def _stream(ctx: QContext, upper, lower, balance: int, z) -> TermStream:
    coef = _coefficients(ctx.backend, ctx.q, tuple(upper), tuple(lower), balance)
    backend = ctx.backend
    with backend.context():
        zb = backend.convert(z)
        az = abs(zb)

    def ratio(n):
        return zb * coef.ratio(n)

    def bound(n):
        b = coef.bound(n)
        return None if b is None else b * az

    return TermStream(backend.one(), ratio, bound, coef.amplification)


# --- q-shifted factorials ----------------------------------------------------


def q_pochhammer(ctx: QContext, a, n) -> Number:
    """``(a; q)_n = prod_{k<n} (1 - a q^k)``; ``n`` may be ``math.inf``.

    ``a`` is the value itself, not an exponent (use ``ctx.power(e)`` for ``q**e``).
    """
    if n == math.inf:
        return q_pochhammer_infinite(ctx, a).value
    if n < 0 or int(n) != n:
        raise DomainError(f"n must be a nonnegative integer or inf, got {n}")
    backend = ctx.backend
    with backend.context():
        ab = backend.convert(a)
        one = backend.one()
        qk = one
        out = one
        for _ in range(int(n)):
            out = out * (one - ab * qk)
            qk = qk * ctx.qb
        return out


def q_pochhammer_infinite(ctx: QContext, a, eps=None) -> SeriesValue:
    """Truncated ``(a; q)_inf`` with a certified bound on the neglected factor.

    For ``|a| q^K <= 1/2`` the remaining product ``T`` obeys
    ``|log T| <= s = 2 |a| q^K / (1 - q)`` and so ``|T - 1| <= s / (1 - s)``.
    """
    eps = ctx.eps if eps is None else to_fraction(eps)
    backend = ctx.backend
    with backend.context():
        ab = backend.convert(a)
        one = backend.one()
        half = one / 2
        scale = 2 * abs(ab) / (one - ctx.qb)
        out = one
        qk = one
        k = 0
        while True:
            y = ab * qk
            if y == 0:
                return SeriesValue(out, k, backend.zero(), True)
            if abs(y) <= half:
                s = scale * qk
                if s < one:
                    bound = abs(out) * s / (one - s)
                    if bound <= eps:
                        break
            if k >= ctx.n_max:
                raise DomainError("infinite product did not reach eps within n_max factors")
            out = out * (one - y)
            qk = qk * ctx.qb
            k += 1
        if not backend.is_exact:
            u = backend.convert(backend.unit_roundoff)
            bound = bound * (one + 16 * u) + abs(out) * u * 4 * (k + 1)
        return SeriesValue(out, k, bound, False)


# --- q-Kummer and basic hypergeometric series --------------------------------


def q_kummer_stream(
    ctx: QContext, params: QKummerParams, x, variant: Variant = Variant.AS_DISPLAYED
) -> TermStream:
    z = (1 - ctx.q) * to_fraction(x)
    balance = 0 if variant is Variant.AS_DISPLAYED else 1
    return _stream(ctx, (params.a,), (params.c,), balance, z)


def q_kummer_phi(
    ctx: QContext, params: QKummerParams, x, variant: Variant = Variant.AS_DISPLAYED
) -> SeriesValue:
    """The q-Kummer function ``phi(q^a, q^c; q, x)`` with a certified tail bound."""
    x = to_fraction(x)
    if _nonpositive_integer(params.c):
        raise PoleParameter(f"c = {params.c} makes (q^c;q)_n vanish")
    if (
        variant is Variant.AS_DISPLAYED
        and (1 - ctx.q) * abs(x) >= 1
        and not _nonpositive_integer(params.a)
    ):
        raise OutOfConvergenceDomain(
            f"displayed q-Kummer series needs (1-q)|x| < 1, got (1-q)|x| = {float((1 - ctx.q) * abs(x))}"
        )
    stream = q_kummer_stream(ctx, params, x, variant)
    return sum_with_tail_bound(stream, ctx.backend, ctx.eps, ctx.n_max)


def _check_phi_domain(params: PhiParams, x: Fraction) -> None:
    if x == 0 or params.terminating:
        return
    cls = classify_convergence(len(params.upper), len(params.lower))
    if cls is ConvergenceClass.UNIT_DISK and abs(x) >= 1:
        raise OutOfConvergenceDomain(
            f"{len(params.upper)}phi{len(params.lower)} converges only for |x| < 1, got x = {x}"
        )
    if cls is ConvergenceClass.TERMINATING_ONLY:
        raise NonTerminating(
            f"p = {len(params.upper)} > r + 1 = {len(params.lower) + 1}: "
            "series converges only at x = 0 unless it terminates"
        )


def basic_hypergeometric_stream(ctx: QContext, params: PhiParams, x) -> TermStream:
    return _stream(ctx, params.upper, params.lower, params.balance, to_fraction(x))


def basic_hypergeometric(ctx: QContext, params: PhiParams, x) -> SeriesValue:
    """``pPhi_r(q^a_1..q^a_p; q^b_1..q^b_r; q; x)`` with a certified tail bound."""
    x = to_fraction(x)
    for b in params.lower:
        if _nonpositive_integer(b):
            raise PoleParameter(f"lower exponent {b} makes (q^{b};q)_n vanish")
    _check_phi_domain(params, x)
    stream = basic_hypergeometric_stream(ctx, params, x)
    return sum_with_tail_bound(stream, ctx.backend, ctx.eps, ctx.n_max)


# --- the ratio functions -----------------------------------------------------


@dataclass(frozen=True)
class RatioValue:
    """Point value of a ratio ``F1 F2 / G^2`` and a certified enclosure of the true ratio."""

    value: Number
    enclosure: Enclosure
    terms_used: int

    @property
    def lower(self) -> Fraction:
        return self.enclosure.lower

    @property
    def upper(self) -> Fraction:
        return self.enclosure.upper

    def __float__(self) -> float:
        return float(self.value)


def ratio_of_series(backend: NumericBackend, num1: SeriesValue, num2: SeriesValue, den: SeriesValue) -> RatioValue:
    """Combine three series values into ``num1 * num2 / den**2`` with interval propagation."""
    enc_den = den.enclosure()
    if not enc_den.excludes_zero():
        raise DomainError("denominator enclosure contains zero")
    with backend.context():
        value = num1.value * num2.value / (den.value * den.value)
    enclosure = num1.enclosure() * num2.enclosure() / enc_den.square()
    terms = max(num1.terms_used, num2.terms_used, den.terms_used)
    return RatioValue(value, enclosure, terms)


def unit_ratio(backend: NumericBackend, den: SeriesValue) -> RatioValue:
    # c = 0: numerator and denominator are the same product, so the ratio is exactly 1
    if not den.enclosure().excludes_zero():
        raise DomainError("denominator enclosure contains zero")
    with backend.context():
        return RatioValue(backend.one(), Enclosure.point(1), den.terms_used)


def _require_hypotheses(params: QRatioParams) -> None:
    ok, why = theorem_hypotheses(params)
    if not ok:
        raise DomainError(why)


def q_ratio_h(
    ctx: QContext,
    params: QRatioParams,
    x,
    variant: Variant = Variant.AS_DISPLAYED,
    check_hypotheses: bool = False,
) -> RatioValue:
    """``phi(q^a, q^(b-c)) phi(q^a, q^(b+c)) / phi(q^a, q^b)^2`` at ``x``."""
    if params.kind != "kummer":
        raise DomainError("q_ratio_h needs scalar a, b, c")
    if check_hypotheses:
        _require_hypotheses(params)
    (a,) = params.a
    (b,), (c,) = params.b, params.c
    if c == 0:
        return unit_ratio(ctx.backend, q_kummer_phi(ctx, QKummerParams(a, b), x, variant))
    minus = q_kummer_phi(ctx, QKummerParams(a, b - c), x, variant)
    plus = q_kummer_phi(ctx, QKummerParams(a, b + c), x, variant)
    mid = q_kummer_phi(ctx, QKummerParams(a, b), x, variant)
    return ratio_of_series(ctx.backend, minus, plus, mid)


def q_ratio_hr(
    ctx: QContext, params: QRatioParams, x, check_hypotheses: bool = False
) -> RatioValue:
    """``phi(a; b-c) phi(a; b+c) / phi(a; b)^2`` for ``(r+1)Phi_r`` series at ``x``."""
    if params.kind != "hyper":
        raise DomainError("q_ratio_hr needs len(a) == len(b) + 1")
    if check_hypotheses:
        _require_hypotheses(params)
    if not any(params.c):
        return unit_ratio(ctx.backend, basic_hypergeometric(ctx, PhiParams(params.a, params.b), x))
    minus = basic_hypergeometric(ctx, PhiParams(params.a, params.lower_minus), x)
    plus = basic_hypergeometric(ctx, PhiParams(params.a, params.lower_plus), x)
    mid = basic_hypergeometric(ctx, PhiParams(params.a, params.b), x)
    return ratio_of_series(ctx.backend, minus, plus, mid)


def q_ratio(ctx: QContext, params: QRatioParams, x, **kwargs) -> RatioValue:
    """Dispatch to :func:`q_ratio_h` or :func:`q_ratio_hr` by parameter shape."""
    if params.kind == "kummer":
        return q_ratio_h(ctx, params, x, **kwargs)
    kwargs.pop("variant", None)
    return q_ratio_hr(ctx, params, x, **kwargs)


def domain_radius(ctx: QContext, params: QRatioParams) -> Fraction:
    """Radius of the common convergence disk of the three series in a ratio."""
    if params.kind == "kummer":
        return 1 / (1 - ctx.q)
    return Fraction(1)
