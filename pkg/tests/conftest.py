"""Shared finite-difference oracles.

Expected values in the test suite come from one of three places: hand
calculation (noted where it happens), an independent central-difference
oracle built here, or an identity that must hold to machine precision.
Nothing is copied from the implementation under test.
"""

import numpy as np


def fd_gradient(fn, x, h=1e-6):
    """Central-difference gradient with the derivative axis leading."""
    x = np.asarray(x, dtype=float)
    rows = []
    for a in range(x.size):
        dx = np.zeros_like(x)
        dx[a] = h
        rows.append((np.asarray(fn(x + dx), dtype=float)
                     - np.asarray(fn(x - dx), dtype=float)) / (2.0 * h))
    return np.array(rows)


def fd_hessian(fn, x, h=1e-4):
    """Nested central differences; accurate to about h**2."""
    return fd_gradient(lambda z: fd_gradient(fn, z, h), x, h)
