"""Certified check of the q-Kummer Turan inequality over a parameter grid.

Run:  python demos/02_turan_sweep.py
"""
from collections import Counter
from fractions import Fraction

from qturan import GridSpec, SweepSpec, Target, sweep
from qturan.reports import reports_to_jsonl, to_human

# a > b > c >= 1, b >= 2 for three values of q; each point gets a 25-point x-grid
# on [0, 0.95/(1-q)], the part of the convergence disk we can certify.
points = SweepSpec.product(
    q=[Fraction(1, 10), Fraction(1, 2), Fraction(9, 10)],
    a=range(3, 6),
    b=range(2, 5),
    c=range(1, 4),
    where=lambda p: p.a[0] > p.b[0] > p.c[0],
)
spec = SweepSpec(tuple(points), GridSpec(count=25))
reports = sweep(spec, [Target.TURAN_QKUMMER, Target.MONOTONE_H])

print(Counter((r.target.value, r.outcome.status.value) for r in reports))
for r in reports[:4]:
    print(to_human(r))

# Machine-readable output: one JSON object per line, bounds rounded outward.
print(reports_to_jsonl(reports[:1], timing=False)[:300], "...")
