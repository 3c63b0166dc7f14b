"""The coefficient-level argument behind the monotonicity results, in exact arithmetic.

h = sum A_n x^n / sum B_n x^n, and h is increasing once C_n = A_n / B_n is.
For the q-Kummer ratio this holds on every point we tried.  For the
(r+1)phi_r ratio it does not: every inner ratio is >= 1, yet C_n turns
down, and so does h_r itself near the edge of the unit disk.

Run:  python demos/03_proof_mechanism.py
"""
from fractions import Fraction

from qturan import (
    NumericBackend,
    QContext,
    QRatioParams,
    build_coefficient_table,
    check_inner_ratio,
    check_proof_chain,
    q_ratio_hr,
)

exact = QContext(Fraction(1, 2), NumericBackend.Rational())
kummer = QRatioParams(3, 2, 1)
table = build_coefficient_table(exact, kummer, 10)
print("C_0..C_5 for q=1/2, a=3, b=2, c=1:", [str(c) for c in table.C[:6]])

w = check_inner_ratio(exact, kummer, 3, 0)
print(f"inner ratio n=3, k=0: direct {w.value}, closed form {w.closed_form}")
print("proof chain:", check_proof_chain(exact, kummer))

# The r = 1 counterexample.
ctx = QContext(Fraction(9, 10), NumericBackend.Rational())
hyper = QRatioParams((1, 3), (2,), (1,))
chain = check_proof_chain(ctx, hyper, n_inner=15, n_table=20)
print("\nq=9/10, a=(1,3), b=2, c=1:", chain)
t = build_coefficient_table(ctx, hyper, 18)
print(f"C_16 = {float(t.C[16]):.12f}  C_17 = {float(t.C[17]):.12f}")

# The decrease is visible in h_r itself (float backend, certified enclosures).
fctx = QContext("0.9")
for x in ("0.8", "0.85", "0.9", "0.95"):
    r = q_ratio_hr(fctx, hyper, x)
    print(f"h_r({x}) in [{float(r.lower):.15f}, {float(r.upper):.15f}]")
