"""Independent reference values computed with mpmath.

Nothing here imports qturan: series are summed by brute force at high
working precision, far past the point where the terms matter.
"""

import mpmath as mp

DPS = 60


def _mpf(v):
    if hasattr(v, "numerator") and hasattr(v, "denominator"):
        return mp.mpf(v.numerator) / v.denominator
    return mp.mpf(v)


def qpoch(a, q, n):
    with mp.workdps(DPS):
        return mp.qp(_mpf(a), _mpf(q), n)


def phi(upper, lower, q, x, balance=0, kummer=False, terms=4000):
    """Brute-force basic hypergeometric partial sum.

    ``kummer`` multiplies the argument by ``1 - q`` (the q-Kummer normalisation).
    """
    with mp.workdps(DPS):
        q, x = _mpf(q), _mpf(x)
        z = (1 - q) * x if kummer else x
        total = mp.mpf(0)
        for n in range(terms):
            t = z**n / mp.qp(q, q, n)
            for a in upper:
                t *= mp.qp(q ** _mpf(a), q, n)
            for b in lower:
                t /= mp.qp(q ** _mpf(b), q, n)
            if balance:
                t *= ((-1) ** n * q ** (n * (n - 1) // 2)) ** balance
            total += t
            if n > 20 and abs(t) < mp.mpf(10) ** (-DPS):
                break
        return total


def hyp(upper, lower, x):
    with mp.workdps(DPS):
        return mp.hyper([_mpf(a) for a in upper], [_mpf(b) for b in lower], _mpf(x))


def exp_remainder(n, x):
    """``sum_{k > n} x^k / k!`` summed directly (no subtraction from ``exp``)."""
    with mp.workdps(DPS):
        x = _mpf(x)
        t = x ** (n + 1) / mp.factorial(n + 1)
        total, k = mp.mpf(0), n + 1
        while t > total * mp.mpf(10) ** (-DPS) or k <= x:
            total += t
            k += 1
            t = t * x / k
        return total


def f_ratio(n, x):
    with mp.workdps(DPS + 40):
        return exp_remainder(n - 1, x) * exp_remainder(n + 1, x) / exp_remainder(n, x) ** 2


def theta(n):
    with mp.workdps(DPS + 2 * n):
        s = sum(mp.mpf(n) ** k / mp.factorial(k) for k in range(n))
        return mp.factorial(n) * (mp.exp(n) / 2 - s) / mp.mpf(n) ** n


def frac(v):
    """Exact Fraction of an mpf (its binary value, no decimal round trip)."""
    from fractions import Fraction

    if not isinstance(v, mp.mpf):
        v = mp.mpf(v)
    man, exp = int(v.man), int(v.exp)
    sign = -1 if v < 0 else 1
    return sign * (Fraction(man) * Fraction(2) ** exp) if man else Fraction(0)


def phi_ratio(upper, b, c, q, x, kummer=False):
    """``phi(b - c) phi(b + c) / phi(b)^2`` for matching vectors ``b``, ``c``."""
    with mp.workdps(DPS):
        minus = [_mpf(bj) - _mpf(cj) for bj, cj in zip(b, c)]
        plus = [_mpf(bj) + _mpf(cj) for bj, cj in zip(b, c)]
        return phi(upper, minus, q, x, kummer=kummer) * phi(upper, plus, q, x, kummer=kummer) / phi(upper, b, q, x, kummer=kummer) ** 2
