"""Adic quotients of R and their comparison with the truncated rings B_r."""

import time

from torusgw import adic_tower, augmentation_ideal, borel_tower, cofinality_report, mittag_leffler

for t in (1, 2):
    tw = adic_tower("laurent", augmentation_ideal(t), 4 if t == 1 else 3)
    print(f"t={t}  R/I^n canonical forms:", tw.ranks(), " box", tw.degree_bound)
    print("      Mittag-Leffler:", mittag_leffler(tw.tower, len(tw.tower) - 1))

bt = borel_tower(2, 3)
print("B_r ranks for t=2:", bt.ranks())

for r in range(1, 5):
    c = cofinality_report(1, r)
    print(f"r={r}: R/I^{c.power} -> B_{r}  iso={c.iso}  det={c.determinant}")

start = time.perf_counter()
c = cofinality_report(2, 1)
print(f"t=2, r=1: {len(c.inclusion_witnesses)} products of degree {c.power} land in ker theta_1,",
      f"surjective={c.surjective}  ({time.perf_counter() - start:.2f}s)")
