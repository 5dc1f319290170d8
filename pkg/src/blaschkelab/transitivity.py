"""Weighted composition isometries, their orbits, and convex hulls of orbits
seen through finitely many test densities.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._minimax import complex_minimax
from .boundary import _tree_mean, composed_average, conjugate_analytic_size, default_panel
from .disk import BoundaryFunction, MoebiusAutomorphism, automorphism_compose, grid_shift_of
from .factorization import QuotientFunction, inner_check

ISOMETRY_TOL = 1e-9
ANALYTIC_TOL = 1e-10


def _circle_values(f, z, grid):
    """Values of ``f`` at circle points ``z``; grid functions only at nodes."""
    if isinstance(f, BoundaryFunction):
        if f.grid != grid:
            raise ValueError("boundary function lives on a different grid")
        idx = np.rint(np.angle(z) / (2 * np.pi) * grid.size).astype(int) % grid.size
        if np.max(np.abs(grid.nodes[idx] - z)) > 1e-12:
            raise ValueError("grid function evaluated off its grid")
        return f.values[idx]
    return np.asarray(f(z), dtype=complex)


class WeightedCompositionOp:
    """``f -> psi * (f o phi)`` with a unimodular weight ``psi`` on the circle.

    ``multiplier`` is a grid function, a callable on circle points, or a
    scalar (the constant-weight case ``f -> alpha f(phi(z))``).
    """

    def __init__(self, multiplier=1.0, inner_map=None):
        if np.isscalar(multiplier):
            alpha = complex(multiplier)
            if abs(abs(alpha) - 1.0) > ISOMETRY_TOL:
                raise ValueError("constant multiplier must be unimodular")
            multiplier = _Constant(alpha)
        elif isinstance(multiplier, BoundaryFunction):
            rep = inner_check(multiplier)
            if not rep.passes(ISOMETRY_TOL):
                raise ValueError(f"multiplier is not unimodular (max deviation {rep.max_deviation:.3g})")
        self.multiplier = multiplier
        self.inner_map = inner_map if inner_map is not None else MoebiusAutomorphism.identity()

    def weight(self, grid):
        w = _circle_values(self.multiplier, grid.nodes, grid)
        dev = float(np.max(np.abs(np.abs(w) - 1.0)))
        if dev > ISOMETRY_TOL:
            raise ValueError(f"multiplier is not unimodular on the grid (max deviation {dev:.3g})")
        return w

    def evaluator(self, f):
        """``z -> psi(z) f(phi(z))`` on circle points, so that operators chain."""
        psi, phi = self.multiplier, self.inner_map
        return lambda z: np.asarray(psi(z)) * np.asarray(f(phi(z)))

    def then(self, other):
        """The operator ``other o self`` (apply ``self`` first)."""
        return compose_ops(other, self)

    def __repr__(self):
        return f"WeightedCompositionOp(map={self.inner_map})"


class _Constant:
    def __init__(self, alpha):
        self.alpha = alpha

    def __call__(self, z):
        return np.full(np.shape(z), self.alpha)


def compose_ops(outer, inner):
    """Operator of ``f -> outer(inner(f))``.

    Its multiplier is ``psi_outer * (psi_inner o phi_outer)`` and its map is
    ``phi_inner o phi_outer``.
    """
    if isinstance(inner.multiplier, BoundaryFunction) and grid_shift_of(
            outer.inner_map, inner.multiplier.grid) is None:
        raise TypeError("composition needs the inner multiplier off the grid; pass a callable")
    psi_o, psi_i, phi_o = outer.multiplier, inner.multiplier, outer.inner_map

    def mult(z):
        return np.asarray(psi_o(z)) * np.asarray(psi_i(phi_o(z)))

    op = WeightedCompositionOp.__new__(WeightedCompositionOp)
    op.multiplier = mult
    op.inner_map = automorphism_compose(inner.inner_map, phi_o)
    return op


def apply_op(T, f, grid=None):
    """Grid samples of ``psi * (f o phi)``.

    ``f`` may be a callable on the closed disk or a grid function; the latter
    only under grid-aligned rotations.
    """
    if grid is None:
        for obj in (T.multiplier, f):
            if isinstance(obj, BoundaryFunction):
                grid = obj.grid
                break
        else:
            raise ValueError("no grid given and none implied by the arguments")
    w = T.weight(grid)
    if isinstance(f, BoundaryFunction):
        j = grid_shift_of(T.inner_map, grid)
        if j is None:
            raise ValueError("grid functions only compose with grid-aligned rotations")
        return BoundaryFunction(grid, w * np.roll(f.values, -j))
    return BoundaryFunction(grid, w * np.asarray(f(T.inner_map(grid.nodes)), dtype=complex))


def orbit_sample(x, ops, grid=None):
    return [apply_op(T, x, grid) for T in ops]


def rotation_ops(grid, count):
    """Rotations by the ``count``-th roots of unity (``count`` divides the grid size)."""
    if grid.size % count:
        raise ValueError("count must divide the grid size")
    step = grid.size // count
    return [WeightedCompositionOp(1.0, MoebiusAutomorphism.rotation(np.exp(2j * np.pi * j * step / grid.size)))
            for j in range(count)]


@dataclass
class HullResult:
    distance: float
    weights: np.ndarray
    lower_bound: float
    converged: bool


def pairing_matrix(samples, panel):
    S = np.array([s.values for s in samples])
    return np.array([_tree_mean(S * h.values[None, :]) for h in panel])


def hull_distance(target, samples, panel=None):
    """Distance, measured by the panel pairings, from ``target`` to the
    convex hull of ``samples``.

    Solves ``min_w max_j |<sum_i w_i s_i - target, h_j>|`` over the simplex.
    """
    if not samples:
        raise ValueError("need at least one sample")
    grid = target.grid
    for s in samples:
        if s.grid != grid:
            raise ValueError("samples live on different grids")
    if panel is None:
        panel = default_panel(grid)
    if not panel:
        raise ValueError("panel must not be empty")
    A = pairing_matrix(samples, panel)
    b = pairing_matrix([target], panel)[:, 0]
    res = complex_minimax(A, b, gap_tol=1e-14)
    return HullResult(res.value, res.weights, res.lower_bound, res.converged)


@dataclass
class Step1Report:
    points: list
    values: list
    correctors: list
    best: float
    argmax: complex


def step1_demo(x, mesh, grid):
    """Running record of ``|mean(f o phi_a)|`` over the mesh, with the
    unimodular constants ``c = conj(mean)/|mean|`` that rotate each mean
    onto the positive axis.

    A quotient ``f/g`` is first multiplied by its inner denominator, which
    is an isometry of the orbit, unless its boundary values already carry no
    negative frequencies (``f = g`` say), in which case it is used as is.
    """
    if isinstance(x, QuotientFunction):
        b = x.boundary()
        if conjugate_analytic_size(b) > ANALYTIC_TOL * max(1.0, b.sup_norm()):
            b = x.reduce()
        x = b
    pts, vals, cs = [], [], []
    best, arg = -1.0, None
    for a in mesh:
        m = composed_average(x, complex(a), grid)
        v = abs(m)
        if v > best:
            best, arg = v, complex(a)
            pts.append(arg)
            vals.append(v)
            cs.append(m.conjugate() / v if v > 0 else 1.0 + 0j)
    return Step1Report(pts, vals, cs, best, arg)
