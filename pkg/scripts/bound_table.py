#!/usr/bin/env python3
"""Print the lower-bound table for a grid of dimensions and bounce counts"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), '..'))

from cohomology import (applicable_closed_bounds, bound_periodic, conjectured_closed_bound,
                        is_prime)
from billiard_errors import BadInput

M_VALUES = range(2, 7)
N_VALUES = range(1, 17)


def closed_row(m, n):
    reports = {r.clause.value: r for r in applicable_closed_bounds(m, n)}
    cells = []
    for clause in ("I", "II", "III"):
        r = reports.get(clause)
        if r is None:
            cells.append("   -")
        else:
            mark = "" if r.witness_verified else "!"
            cells.append(f"{r.value:>4d}{mark}")
    conjectured = conjectured_closed_bound(m, n)
    cells.append("   -" if conjectured is None else f"{conjectured:>4d}")
    return cells


print("Closed trajectories through a point (Z2-orbits)")
print("=" * 60)
print("  m |  n |    I |   II |  III | conj")
print("-" * 60)
for m in M_VALUES:
    for n in N_VALUES:
        print(f" {m:>2d} | {n:>2d} | " + " | ".join(closed_row(m, n)))
    print("-" * 60)
print("'!' marks a clause whose cohomology witness did not check out")

print("\nPeriodic trajectories, n an odd prime (Dn-orbits)")
print("=" * 60)
print("  m |  n | bound | witness")
print("-" * 60)
for m in M_VALUES:
    for n in (n for n in N_VALUES if is_prime(n) and n % 2):
        try:
            r = bound_periodic(m, n)
        except BadInput as e:
            print(f" {m:>2d} | {n:>2d} |     - | {e}")
            continue
        check = "✅" if r.witness_verified else "❌"
        print(f" {m:>2d} | {n:>2d} | {r.value:>5d} | {check} {r.witness}")
print("=" * 60)
