import numpy as np
import pytest

from blaschkelab.disk import BoundaryFunction, BoundaryGrid
from blaschkelab.factorization import SingularMeasure
from blaschkelab.io import (
    read_boundary_function,
    read_singular_measure,
    write_boundary_function,
    write_series,
    write_singular_measure,
)


def test_boundary_function_round_trip(tmp_path):
    rng = np.random.default_rng(0)
    g = BoundaryGrid(5)
    f = BoundaryFunction(g, rng.normal(size=32) + 1j * rng.normal(size=32))
    path = tmp_path / "f.csv"
    write_boundary_function(path, f)
    assert read_boundary_function(path) == f


def test_boundary_function_any_row_order_and_comments(tmp_path):
    path = tmp_path / "f.csv"
    rows = [f"{k}, {k}.5, -1" for k in range(8)]
    path.write_text("# comment\n" + "\n".join(reversed(rows)) + "\n")
    f = read_boundary_function(path)
    assert f.grid == BoundaryGrid(3)
    assert f.values[3] == 3.5 - 1j


@pytest.mark.parametrize("text", [
    "0, 1, 0\n1, 1, 0\n2, 1, 0\n",                  # not a power of two
    "".join(f"{k}, 1, 0\n" for k in (0, 1, 2, 2, 4, 5, 6, 7)),  # repeated node
    "".join(f"{k}, 1, 0\n" for k in range(1, 9)),    # indices off by one
    "".join(f"{k}, 1\n" for k in range(8)),           # missing column
])
def test_boundary_function_rejects(tmp_path, text):
    path = tmp_path / "bad.csv"
    path.write_text(text)
    with pytest.raises(ValueError):
        read_boundary_function(path)


def test_singular_measure_round_trip(tmp_path):
    mu = SingularMeasure.from_angles([0.0, 2.5], [1.0, 0.25])
    path = tmp_path / "mu.csv"
    write_singular_measure(path, mu)
    nu = read_singular_measure(path)
    assert np.allclose(nu.positions, mu.positions, atol=1e-15)
    assert np.array_equal(nu.masses, mu.masses)
    path.write_text("0.1, 1, 2\n")
    with pytest.raises(ValueError):
        read_singular_measure(path)


def test_write_series(tmp_path):
    path = tmp_path / "sub" / "s.csv"
    write_series(path, ["n", "x"], [(1, 0.1), (2, 1 / 3)])
    lines = path.read_text().splitlines()
    assert lines == ["n,x", "1,0.1", "2,0.3333333333333333"]
