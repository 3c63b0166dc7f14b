"""Power-series summation with certified geometric tail bounds.

A series is described by a :class:`TermStream`: its first term, the exact
ratio ``t[n+1] / t[n]`` and, optionally, a function returning an upper bound
on ``sup_{m >= n} |t[m+1] / t[m]|``.  Once that bound drops below one the
remaining tail is dominated by a geometric series.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .backend import Enclosure, Number, NumericBackend
from .errors import NoGeometricBound, SeriesOverflow

DEFAULT_EPS = Fraction(1, 10**30)
DEFAULT_N_MAX = 200_000

# Ratio bounds are re-derived every this many terms once one below 1 is known.
_RHO_REFRESH = 16
_FINITE_CHECK = 64


@dataclass(frozen=True)
class SeriesValue:
    """A partial sum together with a bound on its distance to the full sum.

    ``tail_bound`` covers the neglected tail and, for the float backend, the
    accumulated rounding error of the partial sum.  It is exactly zero when
    the series terminated and was summed exactly.
    """

    value: Number
    terms_used: int
    tail_bound: Number
    terminated: bool = False

    def enclosure(self) -> Enclosure:
        return Enclosure.around(self.value, self.tail_bound)

    def __float__(self) -> float:
        return float(self.value)


@dataclass(frozen=True)
class TermStream:
    """Terms ``t[n] = first_term * prod_{j<n} ratio_fn(j)`` of a power series.

    ``ratio_fn`` must return an exact zero once the series terminates.
    ``rounding_amplification`` is the relative rounding error, in units of
    the unit roundoff, committed when forming one ratio in the float backend.
    """

    first_term: Number
    ratio_fn: Callable[[int], Number]
    ratio_bound: Optional[Callable[[int], Optional[Number]]] = None
    rounding_amplification: float = 4.0

    def term(self, n: int) -> Number:
        t = self.first_term
        for j in range(n):
            t = t * self.ratio_fn(j)
        return t


def geometric_stream(x, backend: NumericBackend) -> TermStream:
    """``sum x**n`` -- mostly useful for testing the engine itself."""
    with backend.context():
        xb = backend.convert(x)
        ax = abs(xb)
    return TermStream(backend.one(), lambda n: xb, lambda n: ax, 2.0)


def sum_with_tail_bound(
    stream: TermStream,
    backend: NumericBackend,
    eps=DEFAULT_EPS,
    n_max: int = DEFAULT_N_MAX,
) -> SeriesValue:
    """Sum ``stream`` until the certified tail bound is at most ``eps``.

    Summation stops after the first index ``N`` with
    ``|t[N]| * rho / (1 - rho) <= eps``, where ``rho`` bounds every later
    term ratio.  If ``n_max`` terms are reached first the best available
    bound is returned (it may exceed ``eps``); if no ratio bound below one
    was ever established :class:`NoGeometricBound` is raised.
    """
    if n_max < 1:
        raise ValueError("n_max must be positive")
    with backend.context():
        eps_b = backend.convert(eps)
        one = backend.one()
        t = backend.convert(stream.first_term)
        total = t
        abs_sum = abs(t)
        n = 0
        rho = None
        rho_at = 0
        kappa = None  # rho / (1 - rho)
        trunc = None
        terminated = False
        bound_fn = stream.ratio_bound
        ratio_fn = stream.ratio_fn
        while True:
            r = ratio_fn(n)
            if r == 0 or (n == 0 and t == 0):
                terminated = True
                trunc = backend.zero()
                break
            if bound_fn is not None and (rho is None or n - rho_at >= _RHO_REFRESH):
                b = bound_fn(n)
                if b is not None and b < one:
                    if not backend.is_exact:
                        b = b * (one + backend.convert(backend.unit_roundoff) * 16)
                    if b < one and (rho is None or b < rho):
                        rho = b
                        kappa = rho / (one - rho)
                    rho_at = n
            if kappa is not None:
                trunc = abs(t) * kappa
                if trunc <= eps_b:
                    break
            if n + 1 >= n_max:
                if kappa is None:
                    raise NoGeometricBound(
                        f"no term-ratio bound below 1 established within {n_max} terms"
                    )
                break
            t = t * r
            n += 1
            total = total + t
            abs_sum = abs_sum + abs(t)
            if not backend.is_exact and n % _FINITE_CHECK == 0:
                if not backend.is_finite(abs_sum):
                    raise SeriesOverflow(f"series terms overflowed at n={n}")
        if not backend.is_exact:
            if not backend.is_finite(abs_sum):
                raise SeriesOverflow(f"series terms overflowed at n={n}")
            u = backend.convert(backend.unit_roundoff)
            # relative error of t[n] is at most n*amp*u; summation adds n*u
            rounding = abs_sum * u * 2 * n * (stream.rounding_amplification + 1)
            trunc = trunc * (one + u * 16) + rounding
        return SeriesValue(total, n + 1, trunc, terminated)


def partial_sums(stream: TermStream, n: int, backend: NumericBackend) -> list:
    """``[t0, t0 + t1, ..., t0 + ... + tn]`` under ``backend`` arithmetic."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    with backend.context():
        t = backend.convert(stream.first_term)
        total = t
        out = [total]
        for j in range(n):
            t = t * stream.ratio_fn(j)
            total = total + t
            out.append(total)
    return out
