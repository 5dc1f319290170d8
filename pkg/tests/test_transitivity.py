import numpy as np
import pytest

from blaschkelab.blaschke import BlaschkeProduct
from blaschkelab.boundary import circle_average, composed_average, constant, cyclic_average, default_panel, disk_mesh, polynomial
from blaschkelab.disk import BoundaryFunction, BoundaryGrid, MoebiusAutomorphism
from blaschkelab.factorization import QuotientFunction, inner_check
from blaschkelab.transitivity import (
    WeightedCompositionOp,
    apply_op,
    compose_ops,
    hull_distance,
    orbit_sample,
    pairing_matrix,
    rotation_ops,
    step1_demo,
)


def random_disk(rng, n, rmax):
    return rmax * np.sqrt(rng.uniform(0, 1, n)) * np.exp(2j * np.pi * rng.uniform(0, 1, n))


def random_blaschke(rng, degree, rmax=0.9):
    return BlaschkeProduct(random_disk(rng, degree, rmax), np.exp(2j * np.pi * rng.uniform()))


def random_op(rng, amax=0.9):
    phi = MoebiusAutomorphism(random_disk(rng, 1, amax)[0], np.exp(2j * np.pi * rng.uniform()))
    kind = rng.integers(3)
    if kind == 0:
        psi = np.exp(2j * np.pi * rng.uniform())
    else:
        psi = random_blaschke(rng, int(rng.integers(1, 4)))
    return WeightedCompositionOp(psi, phi)


def constant_modulus_family(rng):
    # |f| is constant on the circle, so its sup over any node set is exact
    fams = [constant(np.exp(0.3j)), constant(0.6), BlaschkeProduct([0]), BlaschkeProduct([0, 0, 0])]
    for deg in (1, 2, 3, 5):
        fams.append(random_blaschke(rng, deg))
    B = random_blaschke(rng, 4)
    fams.append(lambda z: 0.75 * B(z))
    fams.append(lambda z: -0.2j * np.asarray(z) ** 7)
    return fams


def test_identity_op_gives_samples():
    g = BoundaryGrid(8)
    f = polynomial([0.1, 0.4, -0.3j])
    out = apply_op(WeightedCompositionOp(), f, g)
    assert np.max(np.abs(out.values - f(g.nodes))) < 1e-15


def test_constant_multiplier_rotation():
    g = BoundaryGrid(10)
    alpha = np.exp(1.1j)
    phi = MoebiusAutomorphism(0.4 - 0.3j, np.exp(0.2j))
    f = BlaschkeProduct([0.5, 0.1j])
    out = apply_op(WeightedCompositionOp(alpha, phi), f, g)
    assert np.allclose(out.values, alpha * f(phi(g.nodes)), atol=1e-15)
    assert abs(out.sup_norm() - 1) <= 1e-9


def test_blaschke_image_is_inner():
    rng = np.random.default_rng(0)
    g = BoundaryGrid(9)
    for _ in range(10):
        out = apply_op(random_op(rng), random_blaschke(rng, 3), g)
        assert inner_check(out).max_deviation <= 1e-9


def test_rejects_non_unimodular_multiplier():
    g = BoundaryGrid(5)
    with pytest.raises(ValueError):
        WeightedCompositionOp(0.5)
    with pytest.raises(ValueError):
        WeightedCompositionOp(BoundaryFunction.constant(g, 0.9))
    T = WeightedCompositionOp(lambda z: 0.5 * np.asarray(z))
    with pytest.raises(ValueError):
        apply_op(T, constant(1), g)


def test_isometry_suite():
    rng = np.random.default_rng(1)
    g = BoundaryGrid(12)
    funcs = constant_modulus_family(rng)
    norms = [float(np.max(np.abs(f(g.nodes)))) for f in funcs]
    for _ in range(100):
        T = random_op(rng)
        for f, n in zip(funcs, norms):
            assert abs(apply_op(T, f, g).sup_norm() - n) <= 1e-9


def test_composition_law():
    rng = np.random.default_rng(2)
    g = BoundaryGrid(10)
    f = polynomial([0.2, -0.5, 0.1j, 0.2])
    for _ in range(20):
        T, U = random_op(rng), random_op(rng)
        two_step = apply_op(U, T.evaluator(f), g)
        one_step = apply_op(T.then(U), f, g)
        assert np.max(np.abs(two_step.values - one_step.values)) <= 1e-9
        assert np.max(np.abs(apply_op(compose_ops(U, T), f, g).values - two_step.values)) <= 1e-9


def test_grid_function_rotations():
    g = BoundaryGrid(6)
    rng = np.random.default_rng(3)
    f = BoundaryFunction(g, rng.normal(size=64))
    for j in (0, 1, 17):
        zeta = np.exp(2j * np.pi * j / 64)
        out = apply_op(WeightedCompositionOp(1.0, MoebiusAutomorphism.rotation(zeta)), f)
        # (f o phi)(z) = f(zeta z): node k takes the value at node k + j
        assert np.array_equal(out.values, np.roll(f.values, -j))
    with pytest.raises(ValueError):
        apply_op(WeightedCompositionOp(1.0, MoebiusAutomorphism(0.1, 1)), f)


def test_orbit_identity_and_norms():
    g = BoundaryGrid(8)
    f = random_blaschke(np.random.default_rng(4), 2)
    x = BoundaryFunction.from_callable(g, f)
    assert orbit_sample(x, [WeightedCompositionOp()])[0] == x
    rng = np.random.default_rng(5)
    orbit = orbit_sample(f, [random_op(rng) for _ in range(10)], g)
    assert all(abs(o.sup_norm() - 1) <= 1e-9 for o in orbit)


def test_orbit_reaches_constant_one():
    g = BoundaryGrid(8)
    x = BoundaryFunction.from_callable(g, BlaschkeProduct([0.3, -0.5j]))
    T = WeightedCompositionOp(x.conj())
    (out,) = orbit_sample(x, [T])
    assert np.max(np.abs(out.values - 1)) <= 1e-12


def test_orbit_rotations_of_half_indicator():
    g = BoundaryGrid(8)
    half = BoundaryFunction.indicator(g, 0, 128)
    orbit = orbit_sample(half, rotation_ops(g, 16))
    assert len({o.values.tobytes() for o in orbit}) == 16
    with pytest.raises(ValueError):
        rotation_ops(g, 3)


# --- projected hulls --------------------------------------------------------

def test_hull_target_in_samples():
    g = BoundaryGrid(7)
    rng = np.random.default_rng(6)
    samples = [BoundaryFunction(g, rng.normal(size=128) + 1j * rng.normal(size=128)) for _ in range(5)]
    res = hull_distance(samples[2], samples)
    assert res.distance <= 1e-14
    assert res.converged


def test_hull_rotation_average():
    g = BoundaryGrid(10)
    rng = np.random.default_rng(7)
    v = rng.uniform(0, 1, 1024) * np.exp(2j * np.pi * rng.uniform(size=1024))
    f = BoundaryFunction(g, v)
    s = circle_average(f)
    samples = orbit_sample(f, rotation_ops(g, 256))
    target = BoundaryFunction.constant(g, s)
    # the uniform weights realize T_8 f
    panel = default_panel(g)
    assert max(abs(circle_average((cyclic_average(f, 8) - target) * h)) for h in panel) <= 1e-10
    A, b = pairing_matrix(samples, panel), pairing_matrix([target], panel)[:, 0]
    uniform = np.max(np.abs(A @ np.full(256, 1 / 256) - b))
    assert uniform <= 1e-10
    res = hull_distance(target, samples, panel)
    assert res.distance <= uniform
    assert res.distance <= 1e-10
    assert abs(res.weights.sum() - 1) <= 1e-12


def test_hull_outside_ball_is_separated():
    g = BoundaryGrid(6)
    rng = np.random.default_rng(8)
    samples = [BoundaryFunction(g, np.exp(2j * np.pi * rng.uniform(size=64))) for _ in range(6)]
    target = BoundaryFunction.constant(g, 1.5)
    res = hull_distance(target, samples, [BoundaryFunction.constant(g, 1.0)])
    assert res.distance >= 0.5 - 1e-12


def test_hull_monotonicity():
    g = BoundaryGrid(6)
    rng = np.random.default_rng(9)
    panel = default_panel(g)
    for _ in range(5):
        samples = [BoundaryFunction(g, rng.normal(size=64) + 1j * rng.normal(size=64)) for _ in range(8)]
        target = BoundaryFunction(g, 0.3 * rng.normal(size=64))
        d_samples = [hull_distance(target, samples[:k], panel).distance for k in range(1, 9)]
        assert all(b <= a + 1e-12 for a, b in zip(d_samples, d_samples[1:]))
        d_panel = [hull_distance(target, samples[:3], panel[:k]).distance for k in range(8, 0, -1)]
        assert all(b <= a + 1e-12 for a, b in zip(d_panel, d_panel[1:]))


def test_hull_validation():
    g = BoundaryGrid(4)
    f = BoundaryFunction.constant(g, 1)
    with pytest.raises(ValueError):
        hull_distance(f, [])
    with pytest.raises(ValueError):
        hull_distance(f, [f], [])
    with pytest.raises(ValueError):
        hull_distance(f, [BoundaryFunction.constant(BoundaryGrid(5), 1)])


# --- step 1 -----------------------------------------------------------------

def test_step1_constant_one():
    g = BoundaryGrid(6)
    rep = step1_demo(constant(1.0), [0.0, 0.5], g)
    assert rep.best == pytest.approx(1, abs=1e-15)
    assert rep.values == [pytest.approx(1, abs=1e-15)]


def test_step1_quotient_reduces():
    g = BoundaryGrid(8)
    B = BlaschkeProduct([0.2 + 0.1j, -0.6])
    gt = BoundaryFunction.from_callable(g, B)
    # g/g is the constant 1
    rep = step1_demo(QuotientFunction(gt, gt), [0.0, 0.3], g)
    assert rep.best == pytest.approx(1, abs=1e-12)
    # z/g is multiplied through by g, leaving the samples of z
    f = BoundaryFunction.from_callable(g, lambda z: z)
    rep = step1_demo(QuotientFunction(f, gt), [0.0, 0.5, -0.7j], g)
    assert rep.best == pytest.approx(0.7, abs=1e-12)
    assert rep.argmax == -0.7j


def test_step1_blaschke_records():
    g = BoundaryGrid(11)
    B = BlaschkeProduct([0.3, -0.5j])
    rep = step1_demo(B, disk_mesh(0.02, 0.999), g)
    assert all(b > a for a, b in zip(rep.values, rep.values[1:]))
    assert rep.best > 0.99
    m = np.array(rep.values)
    # correctors rotate each record mean onto the positive axis
    for a, c, v in zip(rep.points, rep.correctors, m):
        assert abs(abs(c) - 1) < 1e-15
        assert abs(c * composed_average(B, a, g) - v) < 1e-15
        if abs(a) <= 0.9:
            assert abs(c * B(a) - v) < 1e-9
