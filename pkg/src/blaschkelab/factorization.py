"""Singular inner functions, outer functions and quotients ``f/g`` of
boundary values by inner functions.

Factorization runs forwards only: Blaschke, singular and outer factors are
built separately and multiplied.  Singular measures are finite sums of atoms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .disk import BoundaryFunction

MAX_RADIUS = 1.0 - 1e-6


class SingularMeasure:
    """Positive atomic measure ``sum_j mass_j * delta_{zeta_j}`` on the circle."""

    def __init__(self, atoms=()):
        pos, mass = [], []
        for zeta, m in atoms:
            zeta = complex(zeta)
            if abs(abs(zeta) - 1.0) > 1e-12:
                raise ValueError(f"atom {zeta!r} is not on the unit circle")
            if not m > 0:
                raise ValueError(f"atom masses must be positive, got {m!r}")
            pos.append(zeta / abs(zeta))
            mass.append(float(m))
        pos = np.array(pos, dtype=complex)
        for i in range(len(pos)):
            if np.any(np.abs(pos[i + 1:] - pos[i]) < 1e-14):
                raise ValueError("atom positions must be distinct")
        self.positions = pos
        self.masses = np.array(mass, dtype=float)

    @classmethod
    def from_angles(cls, thetas, masses):
        return cls(zip(np.exp(1j * np.asarray(thetas, dtype=float)), masses))

    @property
    def total_mass(self):
        return float(np.sum(self.masses))

    def __len__(self):
        return len(self.masses)

    def __repr__(self):
        return f"SingularMeasure(atoms={len(self)}, mass={self.total_mass:g})"


class SingularInner:
    """``S(z) = exp(-sum_j mass_j (zeta_j + z) / (zeta_j - z))``."""

    bound = 1.0

    def __init__(self, mu):
        self.mu = mu

    def __call__(self, z):
        return singular_inner_eval(self.mu, z)


def singular_inner_eval(mu, z):
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if np.any(np.abs(z) > 1.0 + 1e-15):
        raise ValueError("singular inner function is evaluated in the closed disk only")
    expo = np.zeros(z.shape, dtype=complex)
    for zeta, m in zip(mu.positions, mu.masses):
        d = zeta - z
        if np.any(d == 0):
            raise ValueError(f"evaluation at the atom {zeta!r}")
        expo -= m * (zeta + z) / d
    out = np.exp(expo)
    return complex(out[0]) if scalar else out


class OuterFunction:
    """Outer function with boundary modulus ``exp(logmod)``.

    The Herglotz integral is applied to the trapezoid Fourier coefficients
    ``c_k`` of ``logmod``: ``log F(z) = c_0 + 2 sum_{k>0} c_k z^k``.  A direct
    trapezoid sum of the kernel would alias badly once ``1 - |z|`` falls below
    the grid spacing.
    """

    def __init__(self, logmod):
        v = np.asarray(logmod.values)
        if np.max(np.abs(v.imag)) > 0:
            raise ValueError("log-modulus samples must be real")
        v = v.real
        if not np.all(np.isfinite(v)):
            raise ValueError("log-modulus must be finite on the grid")
        self.logmod = logmod
        n = len(v)
        c = np.fft.fft(v) / n
        coeffs = np.empty(n // 2 + 1, dtype=complex)
        coeffs[0] = c[0].real
        coeffs[1:n // 2] = 2.0 * c[1:n // 2]
        coeffs[n // 2] = c[n // 2].real
        self.coeffs = coeffs
        self.bound = float(np.exp(np.max(v)))

    def log_eval(self, z):
        z = np.asarray(z, dtype=complex)
        if np.any(np.abs(z) > MAX_RADIUS + 1e-15):  # slack for r * node rounding
            raise ValueError(f"outer functions are evaluated for |z| <= {MAX_RADIUS}")
        return np.polynomial.polynomial.polyval(z, self.coeffs)

    def __call__(self, z):
        scalar = np.ndim(z) == 0
        out = np.exp(self.log_eval(np.atleast_1d(z)))
        return complex(out[0]) if scalar else out

    def truncation_estimate(self, r):
        """Size of the top quarter of the Herglotz series at radius ``r``;
        large values mean ``logmod`` is under-resolved by the grid."""
        c = np.abs(self.coeffs)
        k = np.arange(len(c))
        tail = k >= 3 * len(c) // 4
        return float(np.sum(c[tail] * r ** k[tail]))


def outer_eval(logmod, z):
    return OuterFunction(logmod)(z)


@dataclass(frozen=True)
class InnerReport:
    max_deviation: float
    mean_deviation: float

    def passes(self, tol):
        return self.max_deviation <= tol


def inner_check(f, where=None):
    """Deviation of ``|f|`` from 1 over the grid (or the nodes selected by
    the boolean mask ``where``)."""
    dev = np.abs(np.abs(f.values) - 1.0)
    if where is not None:
        dev = dev[np.asarray(where, dtype=bool)]
    return InnerReport(float(np.max(dev)), float(np.mean(dev)))


class QuotientFunction:
    """Boundary values ``f/g`` with ``g`` unimodular (an inner function)."""

    UNIMODULAR_TOL = 1e-9

    def __init__(self, numerator, denominator=None):
        if denominator is None:
            denominator = BoundaryFunction.constant(numerator.grid, 1.0)
        if numerator.grid != denominator.grid:
            raise ValueError("numerator and denominator live on different grids")
        rep = inner_check(denominator)
        if not rep.passes(self.UNIMODULAR_TOL):
            raise ValueError(f"denominator is not unimodular (max deviation {rep.max_deviation:.3g})")
        self.numerator = numerator
        self.denominator = denominator

    @property
    def grid(self):
        return self.numerator.grid

    def values(self):
        return self.numerator.values / self.denominator.values

    def boundary(self):
        return BoundaryFunction(self.grid, self.values())

    def sup_norm(self):
        return float(np.max(np.abs(self.values())))

    def reduce(self):
        """Multiply through by the denominator, leaving the numerator."""
        return self.numerator

    def _same_grid(self, other):
        if other.grid != self.grid:
            raise ValueError("quotients live on different grids")

    def __add__(self, other):
        return quotient_sum(self, other)

    def __mul__(self, other):
        if isinstance(other, QuotientFunction):
            return quotient_product(self, other)
        return quotient_scale(self, other)

    def __rmul__(self, c):
        return quotient_scale(self, c)

    def __repr__(self):
        return f"QuotientFunction(log2_size={self.grid.log2_size}, sup={self.sup_norm():.6g})"


def quotient_sum(p, q):
    """``(f1 g2 + f2 g1) / (g1 g2)``."""
    p._same_grid(q)
    num = p.numerator * q.denominator + q.numerator * p.denominator
    return QuotientFunction(num, p.denominator * q.denominator)


def quotient_product(p, q):
    """``(f1 f2) / (g1 g2)``."""
    p._same_grid(q)
    return QuotientFunction(p.numerator * q.numerator, p.denominator * q.denominator)


def quotient_scale(p, c):
    return QuotientFunction(complex(c) * p.numerator, p.denominator)


def product_boundary(factors, grid):
    """Nodewise product of the boundary samples of several factors."""
    out = np.ones(grid.size, dtype=complex)
    for f in factors:
        out = out * (f.values if isinstance(f, BoundaryFunction) else f(grid.nodes))
    return BoundaryFunction(grid, out)

