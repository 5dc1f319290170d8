"""Blaschke products and the classical tests on their zero sequences.

Zero sequences are stored in polar form, a unit direction ``u_n`` together
with the defect ``1 - |a_n|``.  Sequences that race to the boundary (the
defects ``2**-2**n`` of :func:`example2_zeros`, say) would otherwise lose every
significant digit of ``1 - |a_n|`` the moment ``a_n`` is rounded to a double.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .disk import _unimodular


class ZeroSequence:
    """Points ``a_n = direction_n * (1 - defect_n)`` of the open disk."""

    __slots__ = ("direction", "defect")

    def __init__(self, direction, defect):
        direction = np.atleast_1d(np.asarray(direction, dtype=complex))
        defect = np.atleast_1d(np.asarray(defect, dtype=float))
        if direction.shape != defect.shape or direction.ndim != 1:
            raise ValueError("direction and defect must be 1-d arrays of equal length")
        if np.any(defect <= 0.0) or np.any(defect > 1.0):
            raise ValueError("zeros must lie in the open disk (0 < 1 - |a| <= 1)")
        if len(direction) and np.max(np.abs(np.abs(direction) - 1.0)) > 1e-12:
            raise ValueError("directions must be unimodular")
        direction = direction / np.abs(direction)
        direction.setflags(write=False)
        defect.setflags(write=False)
        self.direction = direction
        self.defect = defect

    @classmethod
    def from_points(cls, points):
        points = np.atleast_1d(np.asarray(points, dtype=complex))
        mod = np.abs(points)
        if np.any(mod >= 1.0):
            raise ValueError("zeros must lie in the open disk")
        direction = np.where(mod > 0, points / np.where(mod > 0, mod, 1.0), 1.0 + 0j)
        return cls(direction, 1.0 - mod)

    @property
    def points(self):
        return self.direction * (1.0 - self.defect)

    @property
    def moduli(self):
        return 1.0 - self.defect

    def one_minus_mod_sq(self):
        """``1 - |a_n|**2`` without cancellation."""
        return self.defect * (2.0 - self.defect)

    def distance_to(self, zeta):
        """``|zeta - a_n|`` for a point ``zeta`` on the unit circle."""
        return np.abs((zeta - self.direction) + self.direction * self.defect)

    def __len__(self):
        return len(self.defect)

    def __getitem__(self, idx):
        if isinstance(idx, slice):
            return ZeroSequence(self.direction[idx], self.defect[idx])
        return complex(self.direction[idx] * (1.0 - self.defect[idx]))

    def __add__(self, other):
        other = as_zero_sequence(other)
        return ZeroSequence(np.concatenate([self.direction, other.direction]),
                            np.concatenate([self.defect, other.defect]))

    def __repr__(self):
        return f"ZeroSequence(n={len(self)})"


def as_zero_sequence(zeros):
    if isinstance(zeros, ZeroSequence):
        return zeros
    return ZeroSequence.from_points(zeros)


def example1_zeros(N):
    """``a_n = 1/(n^2+1) + n^2 e^{i/n}/(n^2+1)`` for ``n = 1..N``.

    These points accumulate only at 1, and
    ``(1 - |a_n|^2) / |1 - a_n|^2 = 1/n^2`` exactly.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    n = np.arange(1, N + 1, dtype=float)
    n2 = n * n
    points = (1.0 + n2 * np.exp(1j / n)) / (n2 + 1.0)
    # 1 - |a_n|^2 = 2 n^2 (1 - cos(1/n)) / (n^2+1)^2, written with a sine
    one_minus_sq = 4.0 * n2 * np.sin(0.5 / n) ** 2 / (n2 + 1.0) ** 2
    mod = np.sqrt(1.0 - one_minus_sq)
    return ZeroSequence(points / np.abs(points), one_minus_sq / (1.0 + mod))


def example1_tail_bound(N):
    """Upper bound for ``sum_{n>N} (1 - |a_n|)`` of :func:`example1_zeros`.

    ``1 - |a_n| <= 1 - |a_n|^2 <= 1/(n^2+1)^2 < n^-4`` and the sum over
    ``n > N`` of ``n^-4`` is below ``1/(3 N^3)``.
    """
    return 1.0 / (3.0 * N ** 3)


def example2_zeros(N):
    """``a_n = 1 - 2**-(2**n)`` for ``n = 1..N``, a thin sequence on [0, 1).

    Defects below the double range cannot be represented, so ``N <= 10``.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if N > 10:
        raise ValueError("1 - a_n underflows double precision for n > 10")
    defect = np.array([math.ldexp(1.0, -(2 ** n)) for n in range(1, N + 1)])
    return ZeroSequence(np.ones(N, dtype=complex), defect)


def example2_tail_bound(N):
    """``sum_{n>N} 2**-(2**n) <= 2 * 2**-(2**(N+1))``."""
    return 2.0 * math.ldexp(1.0, -(2 ** (N + 1)))


def _pairwise_prod(factors):
    while factors.shape[0] > 1:
        if factors.shape[0] % 2:
            factors = np.concatenate([factors, np.ones((1,) + factors.shape[1:], complex)])
        h = factors.shape[0] // 2
        factors = factors[:h] * factors[h:]
    return factors[0]


class BlaschkeProduct:
    """``lam * prod_n (|a_n|/a_n) (a_n - z)/(1 - conj(a_n) z)``.

    A factor with ``a_n = 0`` is ``-z`` (the convention ``|a_n|/a_n = 1``).
    ``tail_bound`` bounds ``sum (1 - |a_n|)`` over the zeros that were cut off
    when this object stands for a truncated infinite product.
    """

    bound = 1.0

    def __init__(self, zeros=(), lam=1.0, tail_bound=0.0):
        self.zeros = as_zero_sequence(zeros) if len(zeros) else ZeroSequence([], [])
        self.lam = _unimodular(lam, 1e-12)
        if tail_bound < 0:
            raise ValueError("tail_bound must be nonnegative")
        self.tail_bound = float(tail_bound)

    @property
    def degree(self):
        return len(self.zeros)

    @property
    def is_finite(self):
        return self.tail_bound == 0.0

    def __call__(self, z):
        return blaschke_eval(self, z)

    def condition(self, N=None):
        return blaschke_condition(self.zeros, len(self.zeros) if N is None else N)

    def truncation_error(self, r):
        """Bound on ``|B_trunc(z) - B(z)|`` over ``|z| <= r < 1``."""
        if self.tail_bound == 0.0:
            return 0.0
        if not 0 <= r < 1:
            raise ValueError("radius must be in [0, 1)")
        return math.expm1((1.0 + r) / (1.0 - r) * self.tail_bound)

    def __repr__(self):
        return f"BlaschkeProduct(degree={self.degree}, lam={self.lam:.6g})"


def blaschke_eval(B, z):
    """Evaluate ``B`` at ``z`` (scalar or array) in the closed disk."""
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    zs = B.zeros
    out = np.full(z.shape, B.lam, dtype=complex)
    if len(zs) > 256:
        a = zs.points[:, None]
        u = zs.direction[:, None]
        fac = u.conj() * (a - z[None, :]) / (1.0 - a.conj() * z[None, :])
        out = out * _pairwise_prod(fac)
    else:
        for a, u in zip(zs.points, zs.direction):
            out = out * (u.conjugate() * (a - z) / (1.0 - a.conjugate() * z))
    return complex(out[0]) if scalar else out


def blaschke_condition(zeros, N):
    """Partial sum ``sum_{n<=N} (1 - |a_n|)``."""
    zeros = as_zero_sequence(zeros)
    if N > len(zeros):
        raise ValueError(f"only {len(zeros)} zeros available, asked for {N}")
    return math.fsum(zeros.defect[:N])


def frostman_terms(zeros, zeta, N):
    """Terms ``(1 - |a_n|^2) / |zeta - a_n|^2`` for ``n <= N``."""
    zeros = as_zero_sequence(zeros)[:N]
    zeta = _unimodular(zeta, 1e-12)
    with np.errstate(over="ignore", divide="ignore"):
        return zeros.one_minus_mod_sq() / zeros.distance_to(zeta) ** 2


def frostman_sum(zeros, zeta, N):
    """Partial sum of the angular-derivative series at ``zeta``.

    Summation starts at the first listed zero (index 1).
    """
    return math.fsum(frostman_terms(zeros, zeta, N))


def _rho_matrix(zeros):
    # rho^2 = |z-w|^2 / (|z-w|^2 + (1-|z|^2)(1-|w|^2)), differences from polar form
    u, d = zeros.direction, zeros.defect
    diff = (u[:, None] - u[None, :]) - (u[:, None] * d[:, None] - u[None, :] * d[None, :])
    d2 = np.abs(diff) ** 2
    s = zeros.one_minus_mod_sq()
    prod = s[:, None] * s[None, :]
    with np.errstate(invalid="ignore"):
        rho = np.sqrt(np.where(d2 > 0, d2 / (d2 + prod), 0.0))
    return rho


def separation_products(zeros, N):
    """For each ``n <= N`` the product over ``m != n`` of ``rho(a_n, a_m)``.

    Interpolation (infimum bounded away from 0) and thinness (values tending
    to 1) are asymptotic notions; these finite products are the evidence.
    """
    if N < 2:
        raise ValueError("need N >= 2")
    zeros = as_zero_sequence(zeros)[:N]
    rho = _rho_matrix(zeros)
    np.fill_diagonal(rho, 1.0)
    return [float(math.prod(row)) for row in rho]


def thin_ratio_test(zeros, N):
    """Ratios ``(1 - |a_{n+1}|) / (1 - |a_n|)`` for ``n < N``."""
    zeros = as_zero_sequence(zeros)[:N]
    d = zeros.defect
    if np.any(np.diff(d) > 0):
        raise ValueError("moduli must be nondecreasing")
    return [float(x) for x in d[1:] / d[:-1]]


def read_zeros(path):
    """Read zeros from a text file, one ``re im`` (or ``re,im``) pair per line."""
    pts = []
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].replace(",", " ").strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 2:
            raise ValueError(f"expected 're im' per line, got {line!r}")
        pts.append(complex(float(fields[0]), float(fields[1])))
    return ZeroSequence.from_points(pts)


def write_zeros(path, zeros):
    zeros = as_zero_sequence(zeros)
    lines = [f"{float(p.real)!r} {float(p.imag)!r}" for p in zeros.points]
    Path(path).write_text("\n".join(lines) + "\n")
