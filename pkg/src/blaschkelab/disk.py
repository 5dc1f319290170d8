"""Moebius automorphisms of the unit disk, pseudo-hyperbolic distance and
grid functions on the unit circle.

Every automorphism of the disk is written ``z -> lam * (a - z) / (1 - conj(a) z)``
with ``|a| < 1`` and ``|lam| = 1``.  With ``lam = 1`` the map is the involution
swapping ``a`` and ``0``; the identity map is ``a = 0, lam = -1``.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

UNIMODULAR_TOL = 1e-14


def _unimodular(lam, tol=UNIMODULAR_TOL):
    lam = complex(lam)
    if abs(abs(lam) - 1.0) > tol:
        raise ValueError(f"expected a unimodular constant, got |lam| = {abs(lam)!r}")
    return lam / abs(lam)


@dataclass(frozen=True)
class MoebiusAutomorphism:
    """Disk automorphism ``z -> lam * (a - z) / (1 - conj(a) * z)``."""

    a: complex = 0j
    lam: complex = 1 + 0j

    def __post_init__(self):
        a = complex(self.a)
        if not abs(a) < 1.0:
            raise ValueError(f"automorphism parameter must lie in the open disk, got |a| = {abs(a)!r}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "lam", _unimodular(self.lam))

    @classmethod
    def identity(cls):
        return cls(0j, -1 + 0j)

    @classmethod
    def rotation(cls, zeta):
        """The map ``z -> zeta * z``."""
        return cls(0j, -_unimodular(zeta, 1e-12))

    def __call__(self, z):
        return automorphism_eval(self, z)

    def inverse(self):
        # lam*phi_a(z) = w  <=>  z = conj(lam) * phi_{lam a}(w)
        return MoebiusAutomorphism(self.lam * self.a, self.lam.conjugate())

    def __matmul__(self, other):
        return automorphism_compose(self, other)


def automorphism_eval(phi, z):
    """Evaluate ``phi`` at ``z`` (scalar or array) in the closed disk."""
    a = phi.a
    if a == 0:
        return -phi.lam * np.asarray(z) if np.ndim(z) else -phi.lam * complex(z)
    z = np.asarray(z, dtype=complex) if np.ndim(z) else complex(z)
    return phi.lam * (a - z) / (1.0 - a.conjugate() * z)


def automorphism_compose(p, q):
    """Return ``r`` with ``r(z) == p(q(z))``, in canonical ``(a, lam)`` form."""
    a = complex(q.inverse()(p.a))  # the point r sends to 0
    if abs(a) >= 1.0:  # only reachable through rounding for |p.a| ~ 1
        a = a / abs(a) * np.nextafter(1.0, 0.0)
    # r(1) and phi_a(1) are both unimodular, so the ratio is a clean lam
    ref = MoebiusAutomorphism(a, 1.0)
    lam = complex(p(q(1.0 + 0j))) / complex(ref(1.0 + 0j))
    return MoebiusAutomorphism(a, lam / abs(lam))


def pseudo_hyperbolic(z, w):
    """``|z - w| / |1 - conj(w) z|`` for ``z, w`` in the open disk.

    Uses ``|1 - conj(w) z|^2 = |z - w|^2 + (1 - |z|^2)(1 - |w|^2)`` so that the
    value stays accurate when both points crowd the boundary.
    """
    z = complex(z)
    w = complex(w)
    if abs(z) >= 1.0 or abs(w) >= 1.0:
        raise ValueError("pseudo-hyperbolic distance needs points in the open disk")
    d2 = abs(z - w) ** 2
    if d2 == 0.0:
        return 0.0
    prod = (1.0 - abs(z) ** 2) * (1.0 - abs(w) ** 2)
    return float(np.sqrt(d2 / (d2 + prod)))


@dataclass(frozen=True)
class BoundaryGrid:
    """Uniform grid ``theta_k = 2 pi k / 2**log2_size`` on the unit circle."""

    log2_size: int

    def __post_init__(self):
        if int(self.log2_size) != self.log2_size or self.log2_size < 3:
            raise ValueError(f"grid needs an integer log2_size >= 3, got {self.log2_size!r}")
        object.__setattr__(self, "log2_size", int(self.log2_size))

    @property
    def size(self):
        return 1 << self.log2_size

    @property
    def theta(self):
        return 2.0 * np.pi * np.arange(self.size) / self.size

    @property
    def nodes(self):
        return np.exp(1j * self.theta)

    @classmethod
    def of_size(cls, size):
        size = int(size)
        if size <= 0 or size & (size - 1):
            raise ValueError(f"grid size must be a power of two, got {size}")
        return cls(size.bit_length() - 1)


class BoundaryFunction:
    """Complex samples of a function on the nodes of a :class:`BoundaryGrid`.

    Values are stored read-only; arithmetic returns new objects.
    """

    __slots__ = ("grid", "values")

    def __init__(self, grid, values):
        values = np.array(values, dtype=complex)
        if values.shape == ():
            values = np.full(grid.size, values)
        if values.shape != (grid.size,):
            raise ValueError(f"expected {grid.size} samples, got shape {values.shape}")
        values.setflags(write=False)
        self.grid = grid
        self.values = values

    @classmethod
    def from_callable(cls, grid, func):
        return cls(grid, func(grid.nodes))

    @classmethod
    def constant(cls, grid, c):
        return cls(grid, np.full(grid.size, complex(c)))

    @classmethod
    def indicator(cls, grid, start, stop):
        """Indicator of the node index range ``[start, stop)``."""
        v = np.zeros(grid.size, dtype=complex)
        v[start:stop] = 1.0
        return cls(grid, v)

    def sup_norm(self):
        return float(np.max(np.abs(self.values)))

    def _check(self, other):
        if isinstance(other, BoundaryFunction):
            if other.grid != self.grid:
                raise ValueError("boundary functions live on different grids")
            return other.values
        return other

    def __add__(self, other):
        return BoundaryFunction(self.grid, self.values + self._check(other))

    __radd__ = __add__

    def __sub__(self, other):
        return BoundaryFunction(self.grid, self.values - self._check(other))

    def __rsub__(self, other):
        return BoundaryFunction(self.grid, self._check(other) - self.values)

    def __mul__(self, other):
        return BoundaryFunction(self.grid, self.values * self._check(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return BoundaryFunction(self.grid, self.values / self._check(other))

    def __neg__(self):
        return BoundaryFunction(self.grid, -self.values)

    def conj(self):
        return BoundaryFunction(self.grid, self.values.conj())

    def __eq__(self, other):
        return (isinstance(other, BoundaryFunction) and other.grid == self.grid
                and np.array_equal(other.values, self.values))

    __hash__ = None

    def __repr__(self):
        return f"BoundaryFunction(log2_size={self.grid.log2_size}, sup={self.sup_norm():.6g})"


def rotate_boundary(f, j):
    """Rotation ``f(z conj(zeta))`` for ``zeta = exp(2 pi i j / N)`` as an index shift."""
    n = f.grid.size
    if not 0 <= j < n:
        raise ValueError(f"shift must satisfy 0 <= j < {n}, got {j}")
    return BoundaryFunction(f.grid, np.roll(f.values, j))


def grid_shift_of(phi, grid, tol=1e-12):
    """Index shift realizing ``phi`` on ``grid`` if ``phi`` is a grid-aligned
    rotation, else ``None``."""
    if phi.a != 0:
        return None
    zeta = -phi.lam
    k = cmath.phase(zeta) / (2 * np.pi) * grid.size
    j = int(round(k)) % grid.size
    if abs(zeta - np.exp(2j * np.pi * j / grid.size)) > tol:
        return None
    return j
