"""CSV readers and writers for grid functions and singular measures."""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .disk import BoundaryFunction, BoundaryGrid
from .factorization import SingularMeasure


def _rows(path):
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            row = [c.strip() for c in row]
            if not row or not row[0] or row[0].startswith("#"):
                continue
            yield row


def read_boundary_function(path):
    """Rows ``k, re, im``; the grid size is the row count (a power of two)."""
    data = {}
    for row in _rows(path):
        if row[0] == "k":  # header
            continue
        if len(row) != 3:
            raise ValueError(f"expected 'k, re, im', got {row!r}")
        k = int(row[0])
        if k in data:
            raise ValueError(f"node {k} listed twice")
        data[k] = complex(float(row[1]), float(row[2]))
    grid = BoundaryGrid.of_size(len(data))
    if sorted(data) != list(range(grid.size)):
        raise ValueError("node indices must be 0 .. N-1")
    return BoundaryFunction(grid, [data[k] for k in range(grid.size)])


def write_boundary_function(path, f):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["k", "re", "im"])
        for k, v in enumerate(f.values):
            w.writerow([k, repr(float(v.real)), repr(float(v.imag))])


def read_singular_measure(path):
    """Rows ``theta_j, mass_j``."""
    thetas, masses = [], []
    for row in _rows(path):
        if row[0] == "theta":
            continue
        if len(row) != 2:
            raise ValueError(f"expected 'theta, mass', got {row!r}")
        thetas.append(float(row[0]))
        masses.append(float(row[1]))
    return SingularMeasure.from_angles(thetas, masses)


def write_singular_measure(path, mu):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["theta", "mass"])
        for zeta, m in zip(mu.positions, mu.masses):
            w.writerow([repr(float(np.angle(zeta) % (2 * np.pi))), repr(float(m))])


def write_series(path, header, rows):
    """Plain CSV table with a header line."""
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for r in rows:
            w.writerow([repr(x) if isinstance(x, float) else x for x in r])
