"""Exponential remainders R_n(x), the ratios f_n and g_n, and Ramanujan's theta(n).

Run:  python demos/04_exponential_remainders.py
"""
from fractions import Fraction

from qturan import exp_split, f_ratio, g_ratio, ramanujan_theta_enclosure, verify_classical_bounds
from qturan.verifier import make_grid

# R_n is summed as a tail, so it keeps full relative accuracy even when tiny.
s = exp_split(30, Fraction(1, 2))
print(f"R_30(1/2) = {float(s.remainder):.6e}")

# (n+1)/(n+2) <= f_n(x) < 1, and f_n = (n+1)/(n+2) g_n.
for x in (0, Fraction(1, 10), 1, 10, 50):
    f, g = f_ratio(3, x), g_ratio(3, x)
    print(f"x={float(x):<5} f_3 = {float(f):.12f}   (4/5) g_3 = {float(g) * 0.8:.12f}")

grid = make_grid(Fraction(1, 1000), 50, 40)
print("bounds on [1e-3, 50]:", all(verify_classical_bounds(n, grid).verified for n in range(1, 11)))

# theta(n) sits in (1/3, 1/2); the subtraction e^n/2 - S_(n-1)(n) needs extra precision.
for n in (1, 2, 10, 30):
    e = ramanujan_theta_enclosure(n, 80)
    print(f"theta({n:>2}) = {float(e.midpoint):.15f}")
