"""Approximation of functions in the closed unit ball of ``H^infty`` by convex
combinations of finite Blaschke products, measured in the sup-norm over the
nodes of a boundary grid.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares

from ._minimax import complex_minimax, simplex_normalize
from .blaschke import BlaschkeProduct
from .disk import BoundaryGrid

MAX_ZERO_MODULUS = 0.98


@dataclass
class ConvexCombination:
    weights: np.ndarray
    atoms: list

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.shape != (len(self.atoms),):
            raise ValueError("one weight per atom")
        if np.any(w < 0) or abs(math.fsum(w) - 1.0) > 1e-12:
            raise ValueError("weights must be nonnegative and sum to 1")
        self.weights = w

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return sum(w * B(z) for w, B in zip(self.weights, self.atoms))


@dataclass
class MarshallResult:
    combination: ConvexCombination
    error: float
    lower_bound: float
    seed: int
    evaluations: int
    history: list = field(default_factory=list)
    converged: bool = True  # whether the final weight solve closed its gap


class _Atoms:
    """Atoms ``e^{i angle} prod (a - z)/(1 - conj(a) z)``.

    The factors are left unnormalized so they depend smoothly on ``a``
    through ``a = 0``; :meth:`products` folds ``a/|a|`` into the constant.
    """

    def __init__(self, angles, zeros):
        self.angles = [float(t) for t in angles]
        self.zeros = [[complex(a) for a in zs] for zs in zeros]

    def copy(self):
        return _Atoms(self.angles, self.zeros)

    @property
    def size(self):
        return len(self.angles)

    def matrix(self, z):
        cols = []
        for t, zs in zip(self.angles, self.zeros):
            col = np.full(z.shape, np.exp(1j * t))
            for a in zs:
                col = col * (a - z) / (1.0 - a.conjugate() * z)
            cols.append(col)
        return np.stack(cols, axis=1)

    def products(self):
        out = []
        for t, zs in zip(self.angles, self.zeros):
            lam = np.exp(1j * t)
            for a in zs:
                if a != 0:
                    lam *= a / abs(a)
            out.append(BlaschkeProduct(zs, lam / abs(lam)))
        return out

    def pad(self):
        """Same functions plus a copy of the first atom."""
        return _Atoms(self.angles + self.angles[:1], self.zeros + self.zeros[:1])


def _to_disk(u):
    return u / np.sqrt(1.0 + abs(u) ** 2)


def _from_disk(a):
    return a / np.sqrt(1.0 - abs(a) ** 2)


def _clip(a):
    r = abs(a)
    return a if r <= MAX_ZERO_MODULUS else a * (MAX_ZERO_MODULUS / r)


class _Search:
    def __init__(self, z, b, polish_evals, stop_error):
        self.z = z
        self.b = b
        self.polish_evals = polish_evals
        self.stop_error = stop_error
        self.evaluations = 0

    def quick(self, atoms):
        # one LP over 8 fixed directions; the true error of its weights
        self.evaluations += 1
        res = complex_minimax(atoms.matrix(self.z), self.b, n_directions=8, max_iter=1)
        return res.value

    def exact(self, atoms, incumbents=(), rel_tol=1e-9):
        self.evaluations += 1
        return complex_minimax(atoms.matrix(self.z), self.b, n_directions=16,
                               gap_tol=1e-15, rel_tol=rel_tol, max_iter=40, incumbents=incumbents)

    def least_squares_fit(self, atoms, node_weights=None):
        """Trust-region least squares on the nodal residual, weights included."""
        degs = [len(zs) for zs in atoms.zeros]
        K = atoms.size

        def unpack(p):
            angles = p[:K]
            u = p[K:K + 2 * sum(degs)]
            zs, i = [], 0
            for dg in degs:
                zs.append([_to_disk(complex(u[i + 2 * j], u[i + 2 * j + 1])) for j in range(dg)])
                i += 2 * dg
            v = p[K + 2 * sum(degs):]
            return _Atoms(angles, zs), v * v / np.dot(v, v)

        sq = np.ones(len(self.b)) if node_weights is None else np.sqrt(node_weights)

        def resid(p):
            at, w = unpack(p)
            r = sq * (at.matrix(self.z) @ w - self.b)
            return np.r_[r.real, r.imag]

        u0 = [x for zs in atoms.zeros for a in zs for x in (_from_disk(a).real, _from_disk(a).imag)]
        p0 = np.r_[atoms.angles, u0, np.ones(K)]
        sol = least_squares(resid, p0, method="trf", xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=200 * len(p0))
        self.evaluations += 1
        at, _ = unpack(sol.x)
        at.angles = [t % (2 * np.pi) for t in at.angles]
        return at

    def pattern(self, atoms, d, value):
        """Coordinate search over angles and zeros with a halving step."""
        step = 0.25
        budget = self.evaluations + self.polish_evals
        while step > 1e-15 and self.evaluations < budget and value > self.stop_error:
            improved = False
            for cand in self._moves(atoms, d, step):
                v = self.quick(cand)
                if v < value:
                    atoms, value, improved = cand, v, True
                    break
                if self.evaluations >= budget:
                    break
            if not improved:
                step *= 0.5
        return atoms

    def _moves(self, atoms, d, step):
        for i in range(atoms.size):
            for s in (step, -step):
                c = atoms.copy()
                c.angles[i] = (c.angles[i] + np.pi * s) % (2 * np.pi)
                yield c
            for j in range(len(atoms.zeros[i])):
                for dz in (step, -step, 1j * step, -1j * step):
                    c = atoms.copy()
                    c.zeros[i][j] = _clip(c.zeros[i][j] + dz)
                    yield c
            if len(atoms.zeros[i]) < d:
                c = atoms.copy()
                c.zeros[i].append(0j)
                yield c
            if atoms.zeros[i]:
                c = atoms.copy()
                c.zeros[i].pop()
                yield c


def _degree_profiles(K, d):
    """Degree multisets of ``K`` atoms with at least one atom of degree ``d``
    (the others are covered by the ``(K, d - 1)`` subproblem), highest first."""
    profs = [p for p in itertools.combinations_with_replacement(range(d, -1, -1), K) if p[0] == d]
    return profs or [(0,) * K]


def _random_atoms(rng, degrees):
    K = len(degrees)
    angles = rng.uniform(0, 2 * np.pi, K)
    zeros = []
    for deg in degrees:
        r = 0.9 * np.sqrt(rng.uniform(0, 1, deg))
        zeros.append(r * np.exp(1j * rng.uniform(0, 2 * np.pi, deg)))
    return _Atoms(angles, zeros)


def marshall_approximate(target, K, d, grid=None, starts=10, seed=0,
                         polish_evals=60, stop_error=1e-14):
    """Convex combination of ``K`` Blaschke products of degree at most ``d``
    (degree 0 meaning unimodular constants) minimizing
    ``max_k |sum_i w_i B_i(z_k) - target(z_k)|`` over the grid nodes.

    For fixed atoms the weights are the exact minimax optimum over the
    simplex.  Start ``s`` draws random atoms with the ``s``-th degree profile
    (cycling through those that use degree ``d``) and fits it by least squares;
    the best fit is then refined by coordinate search on the minimax error,
    for at most ``polish_evals`` error evaluations.  The solutions
    for ``(K - 1, d)`` and ``(K, d - 1)`` are included as candidates, so for a
    fixed seed the error does not increase with ``K`` or ``d``.  The achieved
    error is what is reported; it is not claimed to be optimal.
    """
    return marshall_sweep(target, [K], [d], grid, starts, seed, polish_evals, stop_error)[K, d]


def marshall_sweep(target, Ks, ds, grid=None, starts=10, seed=0, polish_evals=60, stop_error=1e-14):
    """:func:`marshall_approximate` for every ``(K, d)`` in ``Ks x ds``,
    sharing the subproblems.  Each entry equals the separate call."""
    Ks, ds = list(Ks), list(ds)
    if min(Ks) < 1 or min(ds) < 0:
        raise ValueError("need K >= 1 and d >= 0")
    grid = grid or BoundaryGrid(6)
    bound = getattr(target, "bound", None)
    if bound is None or bound > 1.0:
        raise ValueError("target must declare a sup-norm bound <= 1")
    b = np.asarray(target(grid.nodes), dtype=complex)
    if np.max(np.abs(b)) > 1.0 + 1e-12:
        raise ValueError("target exceeds modulus 1 on the grid")
    search = _Search(grid.nodes, b, polish_evals, stop_error)
    memo = {}
    out = {}
    for K in Ks:
        for d in ds:
            before = search.evaluations
            best, hist = _solve(search, K, d, starts, seed, memo)
            combo = ConvexCombination(best.weights, best.atoms.products())
            out[K, d] = MarshallResult(combo, best.error, min(best.lower_bound, best.error), seed,
                                       search.evaluations - before, hist, best.converged)
    return out


@dataclass
class _Candidate:
    atoms: _Atoms
    weights: np.ndarray
    error: float
    lower_bound: float
    converged: bool


def _combo_error(search, atoms, w):
    # columns summed in order, zero weights skipped, so that padding an atom
    # list with zero-weight copies leaves the value bit for bit unchanged
    A = atoms.matrix(search.z)
    acc = np.zeros(len(search.b), dtype=complex)
    for i in np.nonzero(w)[0]:
        acc = acc + w[i] * A[:, i]
    return float(np.max(np.abs(acc - search.b)))


def _candidate(search, atoms, res, incumbent=None):
    w = simplex_normalize(res.weights)
    c = _Candidate(atoms, w, _combo_error(search, atoms, w), res.lower_bound, res.converged)
    if incumbent is not None and incumbent.error <= c.error:
        return _Candidate(atoms, incumbent.weights, incumbent.error, c.lower_bound, incumbent.converged)
    return c


def _solve(search, K, d, starts, seed, memo):
    # returns (best _Candidate, history of per-start errors)
    key = (K, d)
    if key in memo:
        return memo[key]
    best = None
    smaller = []
    if K > 1:
        prev, _ = _solve(search, K - 1, d, starts, seed, memo)
        smaller.append((prev.atoms.pad(), np.r_[prev.weights, 0.0], prev))
    if d > 0:
        prev, _ = _solve(search, K, d - 1, starts, seed, memo)
        smaller.append((prev.atoms, prev.weights, prev))
    for atoms, w, prev in smaller:
        # the smaller problem's solution stays available as is
        inc = _Candidate(atoms, w, prev.error, prev.lower_bound, prev.converged)
        c = _candidate(search, atoms, search.exact(atoms, incumbents=[w]), inc)
        if best is None or c.error < best.error:
            best = c

    rng = np.random.default_rng([seed, K, d])
    profiles = _degree_profiles(K, d)
    history = []
    for s in range(starts):
        if best is not None and best.error <= search.stop_error:
            break
        atoms = search.least_squares_fit(_random_atoms(rng, profiles[s % len(profiles)]))
        c = _candidate(search, atoms, search.exact(atoms))
        history.append(c.error)
        if best is None or c.error < best.error:
            best = c
    if best is None:
        raise ValueError("no starts and no smaller problem to start from")
    if best.error > search.stop_error:
        # least squares is not the minimax objective: polish the winner
        refined = search.pattern(best.atoms, d, search.quick(best.atoms))
        c = _candidate(search, refined, search.exact(refined, incumbents=[best.weights]))
        if c.error < best.error:
            best = c
    memo[key] = (best, history)
    return memo[key]
