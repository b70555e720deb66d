#!/usr/bin/env python3
"""
Oracle Sweep
Compares the closed-form round-sphere spectra with the numerical Hessian of
the length functional at the same trajectories.
"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), '..'))

import numpy as np

from configuration import hessian
from sphere_oracle import (closed_trajectory, full_hessian_closed, full_hessian_periodic,
                           periodic_family)

TOLERANCE = 1e-6


def sweep_closed(m, n_max):
    A = np.eye(m + 1)[0]
    a = np.eye(m + 1)[1]
    worst = 0.0
    for n in range(1, n_max + 1):
        for k in range(1, (n + 1) // 2 + 1):
            record = full_hessian_closed(k, n, m)
            numeric = np.linalg.eigvalsh(hessian(closed_trajectory(A, a, k, n)))
            error = float(np.max(np.abs(numeric - record.eigenvalues())))
            worst = max(worst, error)
            mark = "✅" if error <= TOLERANCE else "❌"
            print(f"{mark} closed   m={m} n={n:>2d} k={k:>2d}: index {record.index:>3d}, "
                  f"nullity {record.nullity:>2d}, max deviation {error:.2e}")
    return worst


def sweep_periodic(m, n_max):
    frame = (np.eye(m + 1)[0], np.eye(m + 1)[1])
    worst = 0.0
    for n in range(3, n_max + 1, 2):
        for p in range((n - 3) // 2 + 1):
            record = full_hessian_periodic(n, p, m)
            numeric = np.linalg.eigvalsh(hessian(periodic_family(n, p, frame)))
            error = float(np.max(np.abs(numeric - record.eigenvalues())))
            worst = max(worst, error)
            mark = "✅" if error <= TOLERANCE else "❌"
            print(f"{mark} periodic m={m} n={n:>2d} p={p:>2d}: index {record.index:>3d}, "
                  f"nullity {record.nullity:>2d}, max deviation {error:.2e}")
    return worst


if __name__ == "__main__":
    n_max = int(sys.argv[1]) if len(sys.argv) > 1 else 9
    print("=" * 60)
    print("ROUND SPHERE ORACLE SWEEP")
    print("=" * 60)
    worst = 0.0
    for m in (2, 3, 4):
        worst = max(worst, sweep_closed(m, n_max), sweep_periodic(m, n_max))
    print("=" * 60)
    print(f"Largest deviation: {worst:.2e}")
    sys.exit(0 if worst <= TOLERANCE else 1)
