"""Averages over the unit circle and the dyadic cyclic averaging operators.

All circle integrals use the uniform trapezoid rule.  The mean of ``2**m``
samples is taken by ``m`` rounds of pairwise halving,
``v <- (v[:h] + v[h:]) / 2``, which is the same arithmetic as applying the
cyclic averages ``T_1, ..., T_m`` in turn.  That shared order makes
``T_n T_k = T_max(n, k)`` and ``mean(T_n f) = mean(f)`` hold bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .disk import BoundaryFunction, MoebiusAutomorphism


class Analytic:
    """A function on the closed disk given by a vectorized callable, with a
    declared bound for its sup-norm."""

    def __init__(self, func, bound=1.0, name=None):
        self.func = func
        self.bound = float(bound)
        self.name = name or getattr(func, "__name__", "f")

    def __call__(self, z):
        scalar = np.ndim(z) == 0
        out = np.asarray(self.func(np.atleast_1d(np.asarray(z, dtype=complex))), dtype=complex)
        if out.ndim == 0:
            out = np.full(np.shape(np.atleast_1d(z)), complex(out))
        return complex(out.reshape(-1)[0]) if scalar else out

    def __repr__(self):
        return f"Analytic({self.name}, bound={self.bound:g})"


def polynomial(coeffs, bound=None):
    """``sum coeffs[k] z**k``; the bound defaults to ``sum |coeffs|``."""
    c = np.asarray(coeffs, dtype=complex)
    if bound is None:
        bound = float(np.sum(np.abs(c)))
    return Analytic(lambda z: np.polynomial.polynomial.polyval(z, c), bound, name=f"poly{len(c) - 1}")


def constant(c):
    c = complex(c)
    return Analytic(lambda z: np.full(np.shape(z), c), abs(c), name="const")


def samples(f, grid):
    """Boundary samples of ``f`` on ``grid`` (identity for grid functions)."""
    if isinstance(f, BoundaryFunction):
        if f.grid != grid:
            raise ValueError("boundary function lives on a different grid")
        return f
    return BoundaryFunction(grid, f(grid.nodes))


def _tree_mean(values):
    # mean over the last axis, whose length is a power of two
    v = np.asarray(values)
    while v.shape[-1] > 1:
        h = v.shape[-1] // 2
        v = (v[..., :h] + v[..., h:]) * 0.5
    return v[..., 0]


def circle_average(f, grid=None):
    """Mean of ``f`` over the circle (trapezoid rule on ``grid``)."""
    if isinstance(f, BoundaryFunction):
        return complex(_tree_mean(f.values))
    if grid is None:
        raise ValueError("an analytic evaluator needs a grid to be averaged")
    return complex(_tree_mean(f(grid.nodes)))


def mean_value_check(f, a, grid):
    """``|mean over the circle of f(phi_a(e^{it})) - f(a)|``."""
    if not abs(a) < 1:
        raise ValueError("a must lie in the open disk")
    phi = MoebiusAutomorphism(a, 1.0)
    avg = _tree_mean(f(phi(grid.nodes)))
    return float(abs(avg - f(complex(a))))


def composed_average(f, a, grid):
    """Mean of ``f o phi_a`` over the circle.

    Grid functions cannot be composed with ``phi_a`` off the grid; for them the
    change of variables turns the mean into the Poisson integral at ``a``.
    """
    if isinstance(f, BoundaryFunction):
        return poisson_average(f, a)
    phi = MoebiusAutomorphism(a, 1.0)
    return complex(_tree_mean(f(phi(grid.nodes))))


def poisson_average(f, a):
    """Poisson integral of grid data ``f`` at the disk point ``a``."""
    a = complex(a)
    nodes = f.grid.nodes
    kernel = (1.0 - abs(a) ** 2) / np.abs(nodes - a) ** 2
    return complex(_tree_mean(f.values * kernel))


def unit_spread_search(f, candidates, grid):
    """Largest ``|mean(f o phi_a)|`` over the candidate points.

    Returns ``(best, argmax)``; ties resolve to the first candidate listed.
    """
    best, arg = -1.0, None
    for a in candidates:
        v = abs(composed_average(f, a, grid))
        if v > best:
            best, arg = v, complex(a)
    if arg is None:
        raise ValueError("no candidate points")
    return best, arg


def disk_mesh(h, radius=1.0):
    """Square lattice of step ``h`` clipped to ``|z| < radius``, ordered by modulus."""
    k = int(math.floor(radius / h))
    x = h * np.arange(-k, k + 1)
    z = (x[:, None] + 1j * x[None, :]).ravel()
    z = z[np.abs(z) < radius]
    order = np.lexsort((np.angle(z), np.abs(z)))
    return z[order]


def dilate(f, r):
    """``z -> f(r z)`` for ``0 < r < 1``."""
    if not 0 < r < 1:
        raise ValueError("dilation radius must be in (0, 1)")
    return Analytic(lambda z: f(r * z), getattr(f, "bound", np.inf), name=f"dilate({r:g})")


def nevanlinna_characteristic(f, r, grid):
    """Circle mean of ``log+ |f(r e^{it})|``."""
    if not 0 < r < 1:
        raise ValueError("radius must be in (0, 1)")
    with np.errstate(divide="ignore"):
        lp = np.maximum(np.log(np.abs(f(r * grid.nodes))), 0.0)
    return float(_tree_mean(lp))


def cyclic_average(f, n):
    """Average of the ``2**n`` rotations of ``f`` by the ``2**n``-th roots of unity."""
    m = f.grid.log2_size
    if not 0 <= n <= m:
        raise ValueError(f"need 0 <= n <= {m}, got {n}")
    v = f.values
    size = f.grid.size
    for level in range(1, n + 1):
        v = (v + np.roll(v, size >> level)) * 0.5
    return BoundaryFunction(f.grid, v)


@dataclass(frozen=True)
class DyadicCell:
    """Arc ``[e^{2 pi i k / 2**n}, e^{2 pi i (k+1) / 2**n})``."""

    k: int
    n: int

    def arc(self):
        w = 2 * np.pi / 2 ** self.n
        return self.k * w, (self.k + 1) * w

    def node_slice(self, grid):
        if self.n > grid.log2_size:
            raise ValueError("cell is finer than the grid")
        width = grid.size >> self.n
        return slice(self.k * width, (self.k + 1) * width)


def dyadic_cells(n):
    if n < 0:
        raise ValueError("level must be nonnegative")
    return [DyadicCell(k, n) for k in range(2 ** n)]


def cell_restrict(f, cell):
    v = np.zeros_like(f.values)
    s = cell.node_slice(f.grid)
    v[s] = f.values[s]
    return BoundaryFunction(f.grid, v)


def weak_star_pair(f, h):
    """Circle mean of ``f * h``, the pairing of ``f`` with the density ``h``."""
    if f.grid != h.grid:
        raise ValueError("boundary functions live on different grids")
    return complex(_tree_mean(f.values * h.values))


def conjugate_analytic_size(f):
    """Sum of ``|c_k|`` over the negative frequencies ``-N/2 < k < 0`` of the
    trapezoid Fourier coefficients of ``f``; zero for boundary samples of
    polynomials of degree below ``N/2``."""
    c = np.fft.fft(f.values) / f.grid.size
    return float(np.sum(np.abs(c[f.grid.size // 2 + 1:])))


def default_panel(grid):
    """Eight smooth test densities: ``1``, ``cos kt``, ``sin kt`` for
    ``k = 1, 2, 3`` and ``1 + cos t``."""
    t = grid.theta
    rows = [np.ones_like(t)]
    for k in (1, 2, 3):
        rows += [np.cos(k * t), np.sin(k * t)]
    rows.append(1.0 + np.cos(t))  # already of unit mean
    return [BoundaryFunction(grid, r) for r in rows]


def panel_distance(f, g, panel):
    """``max_j |<f - g, h_j>|`` over the densities of ``panel``."""
    d = f - g
    return max(abs(weak_star_pair(d, h)) for h in panel)


def radial_limit(f, theta, radii, extrapolate=0):
    """Estimate ``lim_{r -> 1} f(r e^{i theta})`` from increasing radii.

    Returns the value at the largest radius and the list of increments
    ``|f(r_{k+1} e^{i theta}) - f(r_k e^{i theta})|``.  Non-convergence shows up
    in the increments and is not an error.

    With ``extrapolate = p > 0`` the estimate is instead the value at ``r = 1``
    of the degree-``p`` polynomial in ``r`` through the last ``p + 1`` samples
    (Neville's scheme).  For functions analytic across the circle this removes
    the ``O(1 - r)`` bias of the plain estimate.
    """
    r = np.asarray(radii, dtype=float)
    if r.ndim != 1 or len(r) == 0 or np.any(r <= 0) or np.any(r >= 1) or np.any(np.diff(r) <= 0):
        raise ValueError("radii must be strictly increasing in (0, 1)")
    if not 0 <= extrapolate < len(r):
        raise ValueError("extrapolation degree needs that many radii plus one")
    vals = f(r * np.exp(1j * theta))
    inc = [float(x) for x in np.abs(np.diff(vals))]
    if not extrapolate:
        return complex(vals[-1]), inc
    h = 1.0 - r[-extrapolate - 1:]  # distances to the circle
    p = np.array(vals[-extrapolate - 1:], dtype=complex)
    for k in range(1, extrapolate + 1):
        p = (h[k:] * p[:-1] - h[:-k] * p[1:]) / (h[k:] - h[:-k])
    return complex(p[0]), inc
