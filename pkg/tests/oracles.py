"""Independent reference implementations used only by the test suite.

These deliberately avoid the closed forms under test: absorption times come
from solving the defining linear system, demand integrals from adaptive
quadrature, optima from grid search.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import solve_banded


def absorption_time_linear_system(w: int, p: float) -> np.ndarray:
    """Expected steps to absorption for the walk on {0..w} that steps -1 with
    probability p and +1 with probability 1-p, absorbing at 0 and w.

    Solves X_0 = X_w = 0, X_m = 1 + p*X_{m-1} + (1-p)*X_{m+1} for the interior
    states with a banded solver; returns the full vector X_0..X_w.
    """
    if w < 1:
        raise ValueError("w must be >= 1")
    n = w - 1  # interior unknowns X_1..X_{w-1}
    out = np.zeros(w + 1)
    if n == 0:
        return out
    # (I - P) X = 1 restricted to interior states
    ab = np.zeros((3, n))
    ab[1, :] = 1.0
    ab[0, 1:] = -(1.0 - p)  # superdiagonal: coefficient of X_{m+1}
    ab[2, :-1] = -p  # subdiagonal: coefficient of X_{m-1}
    rhs = np.ones(n)
    out[1:w] = solve_banded((1, 1), ab, rhs)
    return out


def grid_argmin(f, grid) -> float:
    """Return the grid point minimizing f."""
    vals = [f(x) for x in grid]
    return float(grid[int(np.argmin(vals))])
