import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from blaschkelab.disk import (
    BoundaryFunction,
    BoundaryGrid,
    MoebiusAutomorphism,
    automorphism_compose,
    automorphism_eval,
    pseudo_hyperbolic,
    rotate_boundary,
)


def random_disk(rng, n, rmax=0.95):
    r = rmax * np.sqrt(rng.uniform(0, 1, n))
    return r * np.exp(2j * np.pi * rng.uniform(0, 1, n))


def random_auto(rng, rmax=0.95):
    return MoebiusAutomorphism(random_disk(rng, 1, rmax)[0], np.exp(2j * np.pi * rng.uniform()))


disk_points = st.builds(
    lambda r, t: r * np.exp(1j * t),
    st.floats(0, 0.95), st.floats(0, 2 * np.pi),
)


def test_eval_closed_form():
    phi = MoebiusAutomorphism(0.3 + 0.4j, 1)
    assert phi(0) == pytest.approx(0.3 + 0.4j, abs=1e-15)
    assert abs(phi(0.3 + 0.4j)) < 1e-15
    ident = MoebiusAutomorphism(0, 1)
    for z in (0.5, -0.2j, 1j, 0.1 + 0.7j):
        assert ident(z) == -z


def test_eval_at_zero_is_lambda_a():
    lam = np.exp(0.7j)
    phi = MoebiusAutomorphism(0.2 - 0.5j, lam)
    assert phi(0) == pytest.approx(lam * (0.2 - 0.5j), abs=1e-15)


def test_constructor_rejects_boundary_parameter():
    with pytest.raises(ValueError):
        MoebiusAutomorphism(1.0, 1)
    with pytest.raises(ValueError):
        MoebiusAutomorphism(0.6 + 0.8j, 1)
    with pytest.raises(ValueError):
        MoebiusAutomorphism(0.1, 1.1)


def test_lambda_renormalized():
    phi = MoebiusAutomorphism(0.1, 1 + 5e-15)
    assert abs(phi.lam) == 1.0


def test_circle_preserved():
    rng = np.random.default_rng(0)
    theta = rng.uniform(0, 2 * np.pi, 100)
    for _ in range(20):
        phi = random_auto(rng, 0.99)
        assert np.max(np.abs(np.abs(phi(np.exp(1j * theta))) - 1)) < 1e-12


def test_open_disk_mapped_into_disk():
    rng = np.random.default_rng(1)
    z = random_disk(rng, 200, 0.999)
    for _ in range(10):
        assert np.all(np.abs(random_auto(rng)(z)) < 1)


def test_compose_involution_gives_identity():
    p = MoebiusAutomorphism(0.3 - 0.6j, 1)
    r = automorphism_compose(p, p)
    assert abs(r.a) < 1e-15
    # the identity map z -> z has a = 0, lam = -1 in this parametrization
    assert r.lam == pytest.approx(-1, abs=1e-15)
    z = np.array([0.2, 0.5j, -0.7 + 0.1j])
    assert np.allclose(r(z), z, atol=1e-15)


def test_compose_with_identity():
    rng = np.random.default_rng(2)
    p = random_auto(rng)
    r = automorphism_compose(p, MoebiusAutomorphism.identity())
    assert r.a == pytest.approx(p.a, abs=1e-15)
    assert r.lam == pytest.approx(p.lam, abs=1e-15)


def test_compose_pointwise():
    rng = np.random.default_rng(3)
    for _ in range(10):
        p, q = random_auto(rng), random_auto(rng)
        z = random_disk(rng, 50, 1.0)
        assert np.max(np.abs(automorphism_compose(p, q)(z) - p(q(z)))) < 1e-12


def test_associative():
    rng = np.random.default_rng(4)
    for _ in range(10):
        p, q, r = (random_auto(rng) for _ in range(3))
        z = random_disk(rng, 50, 1.0)
        lhs = ((p @ q) @ r)(z)
        rhs = (p @ (q @ r))(z)
        assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_inverse():
    rng = np.random.default_rng(5)
    phi = random_auto(rng)
    z = random_disk(rng, 30)
    assert np.max(np.abs(phi.inverse()(phi(z)) - z)) < 1e-13


def test_every_lambda_one_map_is_involution():
    rng = np.random.default_rng(6)
    for a in random_disk(rng, 10):
        phi = MoebiusAutomorphism(a, 1)
        z = random_disk(rng, 20)
        assert np.max(np.abs(phi(phi(z)) - z)) < 1e-12


def test_rho_basics():
    assert pseudo_hyperbolic(0.3j, 0.3j) == 0
    w = 0.2 - 0.45j
    assert pseudo_hyperbolic(0, w) == pytest.approx(abs(w), rel=1e-15)
    with pytest.raises(ValueError):
        pseudo_hyperbolic(1.0, 0.2)


def test_rho_invariance():
    rng = np.random.default_rng(7)
    for _ in range(50):
        phi = random_auto(rng)
        z, w = random_disk(rng, 2)
        assert abs(pseudo_hyperbolic(phi(z), phi(w)) - pseudo_hyperbolic(z, w)) < 1e-12


@settings(max_examples=200, deadline=None)
@given(disk_points, disk_points, disk_points)
def test_rho_is_metric(z, w, v):
    assert pseudo_hyperbolic(z, w) == pseudo_hyperbolic(w, z)
    assert pseudo_hyperbolic(z, v) <= pseudo_hyperbolic(z, w) + pseudo_hyperbolic(w, v) + 1e-14


def test_rho_accurate_near_boundary():
    # closed form for two reals 1 - u, 1 - v: |v - u| / (u + v - u v)
    u, v = 1e-9, 3e-9
    assert pseudo_hyperbolic(1 - u, 1 - v) == pytest.approx((v - u) / (u + v - u * v), rel=1e-6)


def test_grid():
    g = BoundaryGrid(3)
    assert g.size == 8
    assert np.allclose(g.nodes[2], 1j)
    with pytest.raises(ValueError):
        BoundaryGrid(2)
    assert BoundaryGrid.of_size(64).log2_size == 6
    with pytest.raises(ValueError):
        BoundaryGrid.of_size(48)


def test_rotate_boundary():
    g = BoundaryGrid(5)
    rng = np.random.default_rng(8)
    f = BoundaryFunction(g, rng.normal(size=32) + 1j * rng.normal(size=32))
    assert rotate_boundary(f, 0) == f
    c = BoundaryFunction.constant(g, 0.3 - 2j)
    assert rotate_boundary(c, 13) == c
    half = BoundaryFunction.indicator(g, 0, 16)
    assert rotate_boundary(half, 16) == BoundaryFunction.indicator(g, 16, 32)
    for j in range(32):
        r = rotate_boundary(f, j)
        assert r.sup_norm() == f.sup_norm()
        assert r.values[(3 + j) % 32] == f.values[3]
    with pytest.raises(ValueError):
        rotate_boundary(f, 32)


def test_rotate_matches_rotation_of_function():
    g = BoundaryGrid(6)
    f = BoundaryFunction.from_callable(g, lambda z: z ** 3 + 0.5 * z)
    j = 5
    zeta = np.exp(2j * np.pi * j / g.size)
    expected = BoundaryFunction.from_callable(g, lambda z: (z * zeta.conjugate()) ** 3 + 0.5 * z * zeta.conjugate())
    assert np.max(np.abs(rotate_boundary(f, j).values - expected.values)) < 1e-14


def test_boundary_function_immutable():
    f = BoundaryFunction.constant(BoundaryGrid(3), 1.0)
    with pytest.raises(ValueError):
        f.values[0] = 2.0


def test_eval_array_and_scalar_agree():
    phi = MoebiusAutomorphism(0.5j, np.exp(0.3j))
    z = np.array([0.1, 0.2j])
    assert automorphism_eval(phi, z)[1] == automorphism_eval(phi, 0.2j)
