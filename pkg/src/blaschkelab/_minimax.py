"""Minimize ``max_k |(A w - b)_k|`` over the probability simplex.

Complex moduli are not linear, so the program is solved by cutting planes:
``|r| = max_phi Re(e^{-i phi} r)``.  Each round solves the epigraph LP over
the current set of directions with HiGHS and adds, for every row whose true
residual exceeds the LP level, the cut along that residual.  The LP level is a
certified lower bound for the optimum; the true error of the returned weights
is an upper bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog


@dataclass
class MinimaxResult:
    weights: np.ndarray
    value: float
    lower_bound: float
    iterations: int
    converged: bool


def simplex_normalize(w):
    w = np.clip(np.asarray(w, dtype=float), 0.0, None)
    s = math.fsum(w)
    if s <= 0:
        raise ValueError("weights sum to zero")
    return w / s


def residual_norm(A, b, w):
    return float(np.max(np.abs(A @ w - b)))


def complex_minimax(A, b, n_directions=8, gap_tol=1e-13, rel_tol=0.0, max_iter=50, incumbents=()):
    """Solve ``min_{w in simplex} max_k |(A w - b)_k|``.

    ``incumbents`` are feasible weight vectors tried as well; the best
    of them and the LP solution is returned.  With no incumbents the
    barycenter is used.  Iteration stops once the gap between the true error
    and the LP bound is below ``max(gap_tol, rel_tol * error)``.
    """
    A = np.atleast_2d(np.asarray(A, dtype=complex))
    b = np.asarray(b, dtype=complex).reshape(-1)
    rows, n = A.shape
    if b.shape != (rows,):
        raise ValueError("A and b disagree in the number of rows")

    best_w = None
    best_val = np.inf
    for w in list(incumbents) or [np.full(n, 1.0 / n)]:
        w = simplex_normalize(w)
        v = residual_norm(A, b, w)
        if v < best_val:
            best_w, best_val = w, v

    phis = 2 * np.pi * np.arange(n_directions) / n_directions
    cut_rows = [np.repeat(np.arange(rows), n_directions)]
    cut_dirs = [np.tile(np.exp(-1j * phis), rows)]
    lower = 0.0
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        if best_val - lower <= max(gap_tol, rel_tol * best_val):
            converged = True
            break
        idx = np.concatenate(cut_rows)
        rot = np.concatenate(cut_dirs)
        G = (rot[:, None] * A[idx]).real
        # The LP is posed in the shifted, scaled variables
        #   w = w0 + eps * u,  t = lower + eps * s
        # around the incumbent, so HiGHS' absolute tolerances act on the gap
        # rather than on the size of the residuals.
        w0 = best_w
        eps = max(best_val - lower, 1e-300)
        r0 = (rot * (A[idx] @ w0 - b[idx])).real
        res = linprog(
            np.r_[np.zeros(n), 1.0],
            A_ub=np.hstack([G, -np.ones((len(idx), 1))]), b_ub=(lower - r0) / eps,
            A_eq=np.r_[np.ones(n), 0.0][None, :], b_eq=[0.0],
            bounds=[(-x / eps, None) for x in w0] + [(None, None)],
            method="highs",
            options={"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-10},
        )
        if res.status != 0:
            break
        w = simplex_normalize(w0 + eps * res.x[:n])
        lower = max(lower, lower + eps * float(res.x[n]))
        r = A @ w - b
        mod = np.abs(r)
        v = float(np.max(mod))
        if v < best_val:
            best_w, best_val = w, v
        if best_val - lower <= max(gap_tol, rel_tol * best_val):
            converged = True
            break
        viol = np.nonzero(mod > lower)[0]
        cut_rows.append(viol)
        cut_dirs.append(np.exp(-1j * np.angle(r[viol])))
    return MinimaxResult(best_w, best_val, min(lower, best_val), it, converged)
