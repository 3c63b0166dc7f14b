"""q-shifted factorials, the q-Kummer function and its q -> 1 limit.

Run:  python demos/01_q_series.py
"""
from fractions import Fraction

from qturan import NumericBackend, QContext, QKummerParams, Variant, kummer_1f1, q_kummer_phi, q_pochhammer

# Exact arithmetic: (q^2; q)_3 at q = 1/2 is a plain rational number.
exact = QContext(Fraction(1, 2), NumericBackend.Rational())
print("(1/4; 1/2)_3 =", q_pochhammer(exact, exact.power(2), 3))

# The q-analogue of the rising factorial: (q^a;q)_n / (1-q)^n -> (a)_n.
for q in ("0.9", "0.99", "0.999"):
    ctx = QContext(q)
    approx = q_pochhammer(ctx, ctx.power(2), 2) / (1 - ctx.qb) ** 2
    print(f"q={q:<6} (q^2;q)_2/(1-q)^2 = {float(approx):.6f}   (2)_2 = 6")

# q-Kummer values come with a certified tail bound.
sv = q_kummer_phi(QContext("1/2"), QKummerParams(1, 2), 1)
print(f"\nphi(q, q^2; q, 1) at q=1/2: {float(sv):.15f}  terms={sv.terms_used}  tail<={float(sv.tail_bound):.1e}")

# The displayed series lives on (1-q)|x| < 1; the 1phi1 variant is entire.
big = q_kummer_phi(QContext("1/2"), QKummerParams(1, 2), 40, Variant.STANDARD)
print(f"standard 1phi1 at x=40: {float(big):.15f}")

# As q -> 1 the q-Kummer function tends to 1F1(1; 2; 1) = e - 1.
target = kummer_1f1(1, 2, 1)
print(f"\n1F1(1;2;1) = {float(target):.12f}")
for q in ("0.9", "0.99", "0.999"):
    v = q_kummer_phi(QContext(q), QKummerParams(1, 2), 1)
    print(f"q={q:<6} phi = {float(v):.12f}   gap = {abs(float(v) - float(target)):.2e}")
