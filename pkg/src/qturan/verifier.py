"""Coefficient-level proof machinery and grid verification of the Turan-type inequalities.

Two independent levels are checked:

* the power-series coefficients: the Cauchy products ``A_n`` (numerator
  product) and ``B_n`` (denominator square), their quotient ``C_n`` and the
  inner ratios ``A_{n,k+1} / A_{n,k}`` whose closed form drives the argument;
* the functions themselves: certified enclosures of ``h``, ``h_r`` and
  ``f_n`` on a grid of ``x`` values.
"""

from __future__ import annotations

import enum
import functools
import itertools
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from .backend import Enclosure, NumericBackend, to_fraction
from .classical import FLOAT256, f_ratio, g_ratio, classical_ratio_h, ClassicalRatioParams
from .errors import HypothesisViolation, QTuranError
from .qfunctions import (
    QContext,
    QRatioParams,
    RatioValue,
    Variant,
    domain_radius,
    q_pochhammer,
    q_ratio_h,
    q_ratio_hr,
    theorem_hypotheses,
)
from .series import DEFAULT_EPS

DEFAULT_TOL = Fraction(1, 10**20)


# --- coefficient tables ---------------------------------------------------------


def cauchy_product(x: Sequence, y: Sequence) -> list:
    """Coefficients of the product of two truncated power series (length ``min(len)``)."""
    n = min(len(x), len(y))
    return [sum(x[k] * y[m - k] for k in range(m + 1)) for m in range(n)]


def series_coefficients(ctx: QContext, upper: Sequence, lower: Sequence, n_max: int, kummer: bool) -> list:
    """``u_n`` for ``n <= n_max`` straight from q-Pochhammer products.

    ``kummer`` selects the q-Kummer normalisation with the extra ``(1-q)^n``.
    """
    backend = ctx.backend
    with backend.context():
        q_up = [ctx.power(e) for e in upper]
        q_low = [ctx.power(e) for e in lower]
        one_minus_q = backend.one() - ctx.qb
        out = []
        for n in range(n_max + 1):
            num = backend.one()
            for a in q_up:
                num = num * q_pochhammer(ctx, a, n)
            den = q_pochhammer(ctx, ctx.qb, n)
            for b in q_low:
                den = den * q_pochhammer(ctx, b, n)
            u = num / den
            if kummer:
                u = u * one_minus_q**n
            out.append(u)
    return out


@dataclass(frozen=True)
class CoefficientTable:
    """Coefficients of ``h = sum A_n x^n / sum B_n x^n`` and ``C_n = A_n / B_n``."""

    n_max: int
    u_num: tuple  # (u(a, b-c), u(a, b+c))
    u_den: tuple  # u(a, b)
    A: tuple
    B: tuple
    C: tuple

    def first_decrease(self) -> Optional[int]:
        """Smallest ``n`` with ``C[n+1] < C[n]``, or None."""
        for n in range(len(self.C) - 1):
            if self.C[n + 1] < self.C[n]:
                return n
        return None

    def is_nondecreasing(self) -> bool:
        return self.first_decrease() is None

    def min_increment(self):
        if len(self.C) < 2:
            return None
        return min(self.C[n + 1] - self.C[n] for n in range(len(self.C) - 1))


def build_coefficient_table(ctx: QContext, params: QRatioParams, n_max: int) -> CoefficientTable:
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    kummer = params.kind == "kummer"
    with ctx.backend.context():
        minus = series_coefficients(ctx, params.a, params.lower_minus, n_max, kummer)
        plus = series_coefficients(ctx, params.a, params.lower_plus, n_max, kummer)
        mid = series_coefficients(ctx, params.a, params.b, n_max, kummer)
        A = cauchy_product(minus, plus)
        B = cauchy_product(mid, mid)
        if any(b <= 0 for b in B):
            raise HypothesisViolation("denominator coefficients must be positive")
        C = [a / b for a, b in zip(A, B)]
    return CoefficientTable(n_max, (tuple(minus), tuple(plus)), tuple(mid), tuple(A), tuple(B), tuple(C))


@dataclass(frozen=True)
class InnerRatioWitness:
    """``A_{n,k+1} / A_{n,k}`` computed directly and from the factored expression.

    ``displayed_form`` is the reading of the factored expression with
    ``1 - q^(b_j - c_j - k)`` in place of ``1 - q^(b_j - c_j + k)``; it is
    None when that factor vanishes.
    """

    n: int
    k: int
    value: object
    closed_form: object
    displayed_form: object

    @property
    def matches_closed_form(self) -> bool:
        return self.value == self.closed_form

    @property
    def matches_displayed_form(self) -> bool:
        return self.displayed_form is not None and self.value == self.displayed_form

    @property
    def at_least_one(self) -> bool:
        return self.value >= 1


@functools.lru_cache(maxsize=256)
def _sequences(ctx: QContext, params: QRatioParams, m: int) -> tuple:
    kummer = params.kind == "kummer"
    return (
        tuple(series_coefficients(ctx, params.a, params.lower_minus, m, kummer)),
        tuple(series_coefficients(ctx, params.a, params.lower_plus, m, kummer)),
        tuple(series_coefficients(ctx, params.a, params.b, m, kummer)),
    )


def _inner_term(ctx: QContext, params: QRatioParams, n: int, k: int):
    """``A_{n,k} = u_k(b-c) u_{n-k}(b+c) / (u_k(b) u_{n-k}(b))``."""
    minus, plus, mid = _sequences(ctx, params, n)
    return minus[k] * plus[n - k] / (mid[k] * mid[n - k])


def check_inner_ratio(ctx: QContext, params: QRatioParams, n: int, k: int) -> InnerRatioWitness:
    if not 0 <= k < n:
        raise IndexError(f"need 0 <= k < n, got n={n}, k={k}")
    backend = ctx.backend
    with backend.context():
        one = backend.one()
        value = _inner_term(ctx, params, n, k + 1) / _inner_term(ctx, params, n, k)
        closed = one
        displayed = one
        for b, c in zip(params.b, params.c):
            right = (one - ctx.power(b + c + n - k - 1)) / (one - ctx.power(b + n - k - 1))
            top = one - ctx.power(b + k)
            closed = closed * top / (one - ctx.power(b - c + k)) * right
            if displayed is not None:
                alt = one - ctx.power(b - c - k) if params.kind == "hyper" else one - ctx.power(b - c + k)
                displayed = None if alt == 0 else displayed * top / alt * right
    return InnerRatioWitness(n, k, value, closed, displayed)


@dataclass(frozen=True)
class ProofChain:
    """Outcome of the coefficient-level argument on one parameter point."""

    inner_matches: bool
    inner_at_least_one: bool
    coefficients_nondecreasing: bool
    first_decrease: Optional[int]

    @property
    def consistent(self) -> bool:
        # monotone inner ratios must imply monotone C_n
        return not (self.inner_matches and self.inner_at_least_one) or self.coefficients_nondecreasing


def check_proof_chain(ctx: QContext, params: QRatioParams, n_inner: int = 15, n_table: int = 30) -> ProofChain:
    matches = True
    at_least_one = True
    for n in range(1, n_inner + 1):
        for k in range(n):
            w = check_inner_ratio(ctx, params, n, k)
            matches = matches and w.matches_closed_form
            at_least_one = at_least_one and w.at_least_one
    table = build_coefficient_table(ctx, params, n_table)
    dec = table.first_decrease()
    return ProofChain(matches, at_least_one, dec is None, dec)


# --- the two lemmas ---------------------------------------------------------------


def _is_monotone(values: Sequence, increasing: bool) -> bool:
    if increasing:
        return all(values[i] <= values[i + 1] for i in range(len(values) - 1))
    return all(values[i] >= values[i + 1] for i in range(len(values) - 1))


def _ratio_direction(a_seq: Sequence, b_seq: Sequence) -> bool:
    """True for nondecreasing ``a_n / b_n``, False for nonincreasing."""
    if any(b <= 0 for b in b_seq):
        raise HypothesisViolation("b_n must be positive")
    ratios = [a / b for a, b in zip(a_seq, b_seq)]
    if _is_monotone(ratios, True):
        return True
    if _is_monotone(ratios, False):
        return False
    raise HypothesisViolation("a_n / b_n is not monotone")


def check_lemma_cesaro(a_seq: Sequence, b_seq: Sequence) -> bool:
    """Monotone ``a_n / b_n`` with ``b_n > 0`` must give monotone ``sum a / sum b`` (same direction)."""
    if len(a_seq) != len(b_seq):
        raise ValueError("sequences must have equal length")
    increasing = _ratio_direction(a_seq, b_seq)
    quotients = [sa / sb for sa, sb in zip(itertools.accumulate(a_seq), itertools.accumulate(b_seq))]
    return _is_monotone(quotients, increasing)


def check_lemma_series_quotient(a_seq: Sequence, b_seq: Sequence, grid: Sequence) -> bool:
    """Monotone coefficient ratios must give a monotone quotient of the truncated series on ``grid``.

    Evaluation is exact, so ``a_seq``, ``b_seq`` and ``grid`` should be rationals.
    """
    if len(a_seq) != len(b_seq):
        raise ValueError("sequences must have equal length")
    increasing = _ratio_direction(a_seq, b_seq)
    a_exact = [to_fraction(a) for a in a_seq]
    b_exact = [to_fraction(b) for b in b_seq]
    values = []
    for x in map(to_fraction, grid):
        num = sum(a * x**n for n, a in enumerate(a_exact))
        den = sum(b * x**n for n, b in enumerate(b_exact))
        values.append(num / den)
    return _is_monotone(values, increasing)


# --- reports ---------------------------------------------------------------------


class Target(enum.Enum):
    TURAN_QKUMMER = "turan-qkummer"
    TURAN_QHYPER = "turan-qhyper"
    MONOTONE_H = "monotone-h"
    MONOTONE_HR = "monotone-hr"
    MONOTONE_F = "monotone-f"
    COEFFICIENT_MONOTONE = "coefficient-monotone"
    CLASSICAL_BOUNDS = "classical-bounds"


class Status(enum.Enum):
    VERIFIED = "verified"
    VIOLATED = "violated"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Outcome:
    status: Status
    at: Optional[tuple] = None  # x value, or (n, k) / (n,) for coefficient checks
    reason: str = ""

    @classmethod
    def verified(cls) -> "Outcome":
        return cls(Status.VERIFIED)


@dataclass(frozen=True)
class TolPolicy:
    """Arithmetic and acceptance settings for one verification run."""

    tol: Fraction = DEFAULT_TOL
    eps: Fraction = DEFAULT_EPS
    backend: NumericBackend = FLOAT256

    def __post_init__(self) -> None:
        object.__setattr__(self, "tol", to_fraction(self.tol))
        object.__setattr__(self, "eps", to_fraction(self.eps))

    @classmethod
    def exact(cls, eps=DEFAULT_EPS) -> "TolPolicy":
        return cls(Fraction(0), eps, NumericBackend.Rational())

    def as_dict(self) -> dict:
        return {
            "backend": self.backend.kind,
            "precision_bits": self.backend.precision_bits,
            "eps": self.eps,
            "tol": self.tol,
        }


@dataclass(frozen=True)
class VerificationReport:
    target: Target
    params: dict
    grid: tuple
    outcome: Outcome
    margin: Optional[Fraction]
    tolerances: dict
    samples: tuple = ()  # (lower, upper) per grid point
    terms_used_max: int = 0
    exploratory: bool = False
    wall_time_ms: Optional[float] = field(default=None, compare=False)

    @property
    def verified(self) -> bool:
        return self.outcome.status is Status.VERIFIED

    @property
    def counts_as_violation(self) -> bool:
        return self.outcome.status is Status.VIOLATED and not self.exploratory


# --- ratio-function handles --------------------------------------------------------


@dataclass(frozen=True)
class RatioHandle:
    """A ratio function of ``x`` with certified enclosures, plus its identifying record."""

    name: str
    params: dict
    evaluate: Callable[[Fraction], RatioValue]
    radius: Optional[Fraction] = None
    hypotheses_hold: bool = True

    def __call__(self, x) -> RatioValue:
        return self.evaluate(to_fraction(x))


def _q_params_record(ctx: QContext, params: QRatioParams) -> dict:
    return {"q": ctx.q, "a": list(params.a), "b": list(params.b), "c": list(params.c)}


def q_kummer_handle(ctx: QContext, params: QRatioParams, variant: Variant = Variant.AS_DISPLAYED) -> RatioHandle:
    record = _q_params_record(ctx, params)
    if variant is not Variant.AS_DISPLAYED:
        record["variant"] = variant.value
    return RatioHandle(
        "h",
        record,
        lambda x: q_ratio_h(ctx, params, x, variant),
        domain_radius(ctx, params) if variant is Variant.AS_DISPLAYED else None,
        theorem_hypotheses(params)[0],
    )


def q_hyper_handle(ctx: QContext, params: QRatioParams) -> RatioHandle:
    return RatioHandle(
        "h_r",
        _q_params_record(ctx, params),
        lambda x: q_ratio_hr(ctx, params, x),
        Fraction(1),
        theorem_hypotheses(params)[0],
    )


def f_handle(n: int, backend: NumericBackend = FLOAT256, eps=DEFAULT_EPS) -> RatioHandle:
    return RatioHandle("f", {"n": n}, lambda x: f_ratio(n, x, backend, eps))


def g_handle(n: int, backend: NumericBackend = FLOAT256, eps=DEFAULT_EPS) -> RatioHandle:
    return RatioHandle("g", {"n": n}, lambda x: g_ratio(n, x, backend, eps))


def classical_h_handle(params: ClassicalRatioParams, backend: NumericBackend = FLOAT256, eps=DEFAULT_EPS) -> RatioHandle:
    radius = Fraction(1) if len(params.a) == len(params.b) + 1 else None
    record = {"a": list(params.a), "b": list(params.b), "c": list(params.c)}
    return RatioHandle("h_classical", record, lambda x: classical_ratio_h(params, x, backend, eps), radius)


# --- grid verification ----------------------------------------------------------


@dataclass(frozen=True)
class GridSpec:
    """``count`` points on ``[lo, hi]``; a geometric grid with ``lo == 0`` is ``0`` followed by
    ``count - 1`` geometric points from ``hi / 1000`` to ``hi``."""

    lo: Fraction = Fraction(0)
    hi: Optional[Fraction] = None  # None: 0.95 * domain radius
    count: int = 50
    spacing: str = "geometric"

    def __post_init__(self) -> None:
        object.__setattr__(self, "lo", to_fraction(self.lo))
        if self.hi is not None:
            object.__setattr__(self, "hi", to_fraction(self.hi))
        if self.spacing not in ("geometric", "linear"):
            raise ValueError(f"unknown spacing {self.spacing!r}")
        if self.count < 0:
            raise ValueError("count must be nonnegative")

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        """``lo:hi:count:geometric|linear``."""
        parts = text.split(":")
        if len(parts) not in (3, 4):
            raise ValueError(f"grid must be lo:hi:count[:spacing], got {text!r}")
        spacing = parts[3] if len(parts) == 4 else "geometric"
        return cls(to_fraction(parts[0]), to_fraction(parts[1]), int(parts[2]), spacing)

    def points(self, radius: Optional[Fraction] = None) -> tuple:
        hi = self.hi
        if hi is None:
            if radius is None:
                raise ValueError("grid needs an explicit upper end for functions without a finite radius")
            hi = Fraction(95, 100) * radius
        return make_grid(self.lo, hi, self.count, self.spacing)


def make_grid(lo, hi, count: int, spacing: str = "geometric") -> tuple:
    lo, hi = to_fraction(lo), to_fraction(hi)
    if count == 0:
        return ()
    if count == 1:
        return (hi,)
    if hi <= lo:
        raise ValueError("grid needs lo < hi")
    if spacing == "linear":
        return tuple(lo + (hi - lo) * i / (count - 1) for i in range(count))
    head: tuple = ()
    start = lo
    if lo == 0:
        head, start, count = (Fraction(0),), hi / 1000, count - 1
        if count == 1:
            return head + (hi,)
    ratio = float(hi / start)
    inner = tuple(start * Fraction(ratio ** (i / (count - 1))) for i in range(1, count - 1))
    return head + (start,) + inner + (hi,)


def _evaluate_grid(fn: RatioHandle, grid: Sequence[Fraction]):
    samples = []
    terms = 0
    for x in grid:
        v = fn(x)
        samples.append(v.enclosure)
        terms = max(terms, v.terms_used)
    return samples, terms


def _report(target, fn_params, grid, outcome, margin, policy, samples, terms, exploratory, started) -> VerificationReport:
    backend = policy.backend
    stored = tuple((backend.round_outward(e.lower, False), backend.round_outward(e.upper, True)) for e in samples)
    if margin is not None:
        margin = backend.round_outward(margin, False)
    return VerificationReport(
        target=target,
        params=dict(fn_params),
        grid=tuple(grid),
        outcome=outcome,
        margin=margin,
        tolerances=policy.as_dict(),
        samples=stored,
        terms_used_max=terms,
        exploratory=exploratory,
        wall_time_ms=round((time.perf_counter() - started) * 1000, 3),
    )


def _default_target(fn: RatioHandle, kind: str) -> Target:
    table = {
        ("h", "turan"): Target.TURAN_QKUMMER,
        ("h_r", "turan"): Target.TURAN_QHYPER,
        ("h", "monotone"): Target.MONOTONE_H,
        ("h_r", "monotone"): Target.MONOTONE_HR,
        ("f", "monotone"): Target.MONOTONE_F,
    }
    return table.get((fn.name, kind), Target.MONOTONE_H if kind == "monotone" else Target.TURAN_QKUMMER)


def verify_monotone(
    fn: RatioHandle,
    grid: Sequence,
    tol_policy: Optional[TolPolicy] = None,
    target: Optional[Target] = None,
) -> VerificationReport:
    """Check that ``fn`` is nondecreasing along ``grid`` using certified enclosures."""
    policy = tol_policy or TolPolicy()
    target = target or _default_target(fn, "monotone")
    grid = tuple(to_fraction(x) for x in grid)
    started = time.perf_counter()
    exploratory = not fn.hypotheses_hold
    if any(grid[i] >= grid[i + 1] for i in range(len(grid) - 1)):
        outcome = Outcome(Status.INCONCLUSIVE, reason="grid is not strictly increasing")
        return _report(target, fn.params, grid, outcome, None, policy, [], 0, exploratory, started)
    try:
        samples, terms = _evaluate_grid(fn, grid)
    except (QTuranError, ZeroDivisionError) as exc:
        outcome = Outcome(Status.INCONCLUSIVE, reason=f"{type(exc).__name__}: {exc}")
        return _report(target, fn.params, grid, outcome, None, policy, [], 0, exploratory, started)
    margin = None
    outcome = Outcome.verified()
    for i in range(len(samples) - 1):
        diff = samples[i + 1] - samples[i]
        margin = diff.lower if margin is None else min(margin, diff.lower)
        if diff.upper < -policy.tol and outcome.status is not Status.VIOLATED:
            outcome = Outcome(Status.VIOLATED, (grid[i + 1],), "decrease between consecutive grid points")
    if outcome.status is not Status.VIOLATED and margin is not None and margin < -policy.tol:
        outcome = Outcome(Status.INCONCLUSIVE, reason="enclosures too wide to decide; tighten eps")
    return _report(target, fn.params, grid, outcome, margin, policy, samples, terms, exploratory, started)


def _verify_threshold(fn, grid, policy, target, lower, upper_strict, started, exploratory):
    try:
        samples, terms = _evaluate_grid(fn, grid)
    except (QTuranError, ZeroDivisionError) as exc:
        outcome = Outcome(Status.INCONCLUSIVE, reason=f"{type(exc).__name__}: {exc}")
        return _report(target, fn.params, grid, outcome, None, policy, [], 0, exploratory, started)
    margin = None
    violated = None
    undecided = False
    for x, enc in zip(grid, samples):
        slack = enc.lower - lower
        if upper_strict is not None:
            slack = min(slack, upper_strict - enc.upper)
        margin = slack if margin is None else min(margin, slack)
        if violated is None and (enc.upper < lower - policy.tol or (upper_strict is not None and enc.lower >= upper_strict)):
            violated = x
        if enc.lower < lower - policy.tol or (upper_strict is not None and enc.upper >= upper_strict):
            undecided = True
    if violated is not None:
        outcome = Outcome(Status.VIOLATED, (violated,), "bound fails at grid point")
    elif undecided:
        outcome = Outcome(Status.INCONCLUSIVE, reason="enclosures overlap the threshold; tighten eps")
    else:
        outcome = Outcome.verified()
    return _report(target, fn.params, grid, outcome, margin, policy, samples, terms, exploratory, started)


def verify_turan(
    fn: RatioHandle,
    grid: Sequence,
    tol_policy: Optional[TolPolicy] = None,
    target: Optional[Target] = None,
) -> VerificationReport:
    """Check ``fn(x) >= 1 - tol`` at every grid point, i.e. ``F(b)^2 <= F(b-c) F(b+c)``."""
    policy = tol_policy or TolPolicy()
    target = target or _default_target(fn, "turan")
    grid = tuple(to_fraction(x) for x in grid)
    started = time.perf_counter()
    return _verify_threshold(fn, grid, policy, target, Fraction(1), None, started, not fn.hypotheses_hold)


def verify_classical_bounds(n: int, grid: Sequence, tol_policy: Optional[TolPolicy] = None) -> VerificationReport:
    """Check ``(n+1)/(n+2) <= f_n(x) < 1`` on ``grid``; the upper bound is certified strictly."""
    policy = tol_policy or TolPolicy()
    grid = tuple(to_fraction(x) for x in grid)
    started = time.perf_counter()
    fn = f_handle(n, policy.backend, policy.eps)
    return _verify_threshold(fn, grid, policy, Target.CLASSICAL_BOUNDS, Fraction(n + 1, n + 2), Fraction(1), started, False)


def verify_coefficients(ctx: QContext, params: QRatioParams, n_max: int = 30) -> VerificationReport:
    """Exact check that ``C_n = A_n / B_n`` is nondecreasing for ``n <= n_max``."""
    started = time.perf_counter()
    policy = TolPolicy(Fraction(0), ctx.eps, ctx.backend)
    exploratory = not theorem_hypotheses(params)[0]
    grid = tuple(Fraction(n) for n in range(n_max + 1))
    try:
        table = build_coefficient_table(ctx, params, n_max)
    except QTuranError as exc:
        outcome = Outcome(Status.INCONCLUSIVE, reason=f"{type(exc).__name__}: {exc}")
        return _report(Target.COEFFICIENT_MONOTONE, _q_params_record(ctx, params), grid, outcome, None, policy, [], 0, exploratory, started)
    samples = [Enclosure.point(c) for c in table.C]
    dec = table.first_decrease()
    margin = to_fraction(table.min_increment())
    if dec is None:
        outcome = Outcome.verified()
    elif ctx.backend.is_exact:
        outcome = Outcome(Status.VIOLATED, (Fraction(dec + 1),), "C_n decreases")
    else:
        outcome = Outcome(Status.INCONCLUSIVE, reason="float coefficient table; rerun with the rational backend")
    return _report(Target.COEFFICIENT_MONOTONE, _q_params_record(ctx, params), grid, outcome, margin, policy, samples, n_max + 1, exploratory, started)


# --- sweeps ------------------------------------------------------------------------


@dataclass(frozen=True)
class ParameterPoint:
    """One point of a parameter grid; unused fields stay at their defaults."""

    q: Optional[Fraction] = None
    a: tuple = ()
    b: tuple = ()
    c: tuple = ()
    n: Optional[int] = None

    def __post_init__(self) -> None:
        if self.q is not None:
            object.__setattr__(self, "q", to_fraction(self.q))
        for name in ("a", "b", "c"):
            v = getattr(self, name)
            if not isinstance(v, (tuple, list)):
                v = (v,)
            object.__setattr__(self, name, tuple(to_fraction(e) for e in v))

    def ratio_params(self) -> QRatioParams:
        return QRatioParams(self.a, self.b, self.c)


@dataclass(frozen=True)
class SweepSpec:
    """A finite list of parameter points plus the grid and tolerance policy applied to each."""

    points: tuple = ()
    grid: GridSpec = field(default_factory=GridSpec)
    policy: TolPolicy = field(default_factory=TolPolicy)
    coefficient_n_max: int = 30

    @classmethod
    def product(cls, where: Optional[Callable[[ParameterPoint], bool]] = None, derive: Optional[dict] = None, **axes) -> list:
        """Points of the Cartesian product of the named axes (``q``, ``a``, ``b``, ``c``, ``n``).

        ``derive`` maps a field name to a function of the already fixed
        fields, e.g. ``{"a": lambda p: p["b"] + 1}``.
        """
        names = list(axes)
        out = []
        for combo in itertools.product(*(axes[k] for k in names)):
            fields = dict(zip(names, combo))
            for key, fn in (derive or {}).items():
                fields[key] = fn(fields)
            point = ParameterPoint(**fields)
            if where is None or where(point):
                out.append(point)
        return out


def run_target(target: Target, point: ParameterPoint, grid: GridSpec, policy: TolPolicy, coefficient_n_max: int = 30) -> VerificationReport:
    """Evaluate one target at one parameter point; errors fold into Inconclusive."""
    try:
        if target in (Target.MONOTONE_F, Target.CLASSICAL_BOUNDS):
            if point.n is None:
                raise ValueError(f"{target.value} needs n")
            xs = grid.points(None)
            if target is Target.CLASSICAL_BOUNDS:
                return verify_classical_bounds(point.n, xs, policy)
            return verify_monotone(f_handle(point.n, policy.backend, policy.eps), xs, policy, target)
        if point.q is None:
            raise ValueError(f"{target.value} needs q")
        ctx = QContext(point.q, policy.backend, policy.eps)
        params = point.ratio_params()
        if target is Target.COEFFICIENT_MONOTONE:
            return verify_coefficients(ctx, params, coefficient_n_max)
        if target in (Target.TURAN_QKUMMER, Target.MONOTONE_H):
            fn = q_kummer_handle(ctx, params)
        else:
            fn = q_hyper_handle(ctx, params)
        xs = grid.points(fn.radius)
        if target in (Target.TURAN_QKUMMER, Target.TURAN_QHYPER):
            return verify_turan(fn, xs, policy, target)
        return verify_monotone(fn, xs, policy, target)
    except (QTuranError, ValueError) as exc:
        started = time.perf_counter()
        record = {"q": point.q, "a": list(point.a), "b": list(point.b), "c": list(point.c), "n": point.n}
        record = {k: v for k, v in record.items() if v not in (None, [])}
        outcome = Outcome(Status.INCONCLUSIVE, reason=f"{type(exc).__name__}: {exc}")
        return _report(target, record, (), outcome, None, policy, [], 0, False, started)


def _run_task(task) -> VerificationReport:
    return run_target(*task)


def sweep(spec: SweepSpec, targets: Iterable[Target], workers: int = 1) -> list:
    """Reports for every point (outer loop) and target (inner loop), in that order."""
    targets = [Target(t) for t in targets]
    tasks = [(t, p, spec.grid, spec.policy, spec.coefficient_n_max) for p in spec.points for t in targets]
    if not tasks:
        return []
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_run_task, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    return [_run_task(t) for t in tasks]


def warn_if_empty(grid: Sequence) -> None:
    if not grid:
        warnings.warn("empty grid: nothing to verify", stacklevel=2)
