import math

import numpy as np
import pytest

from orbitmax import (
    CircleSolverConfig,
    DimensionMismatch,
    FiniteGroupAction,
    HI_RES_CONFIG,
    TrigPolynomial,
    WeightedCircleAction,
    alignment_polynomial,
    cluster_witnesses,
    max_filter,
    max_filter_circle,
    max_filter_finite,
    maximize_trig,
    quotient_distance,
)

from helpers import (
    dense_alignment_max,
    dense_orbit_distance,
    random_circle_point,
    random_weights,
)


def rotation(theta):
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def test_trig_polynomial_basics():
    poly = TrigPolynomial.from_terms([(1, 4.0 + 0j), (2, -1.0 + 0j)])
    assert poly.max_freq == 2
    theta = np.linspace(-np.pi, np.pi, 7)
    expected = 4 * np.cos(theta) - np.cos(2 * theta)
    assert np.allclose(poly.evaluate(theta), expected, atol=1e-12)
    assert abs(poly.evaluate_scalar(0.3) - (4 * np.cos(0.3) - np.cos(0.6))) < 1e-12
    assert abs(poly.derivative_scalar(0.3) - (-4 * np.sin(0.3) + 2 * np.sin(0.6))) < 1e-12
    with pytest.raises(ValueError):
        TrigPolynomial((1, 1), np.array([1.0, 2.0]))


def test_solver_config_validation():
    with pytest.raises(ValueError):
        CircleSolverConfig(oversample=0)
    with pytest.raises(ValueError):
        CircleSolverConfig(refine_iters=-1)
    with pytest.raises(ValueError):
        CircleSolverConfig(refine_method="brent")
    assert CircleSolverConfig(oversample=1).grid_size(0) == 8


def test_alignment_polynomial_examples():
    a11 = WeightedCircleAction((1, 1))
    poly = alignment_polynomial(a11, [1, 0], [1j, 0])
    assert poly.freqs == (1,)
    assert poly.coeffs[0] == 1j

    a12 = WeightedCircleAction((1, 2))
    poly = alignment_polynomial(a12, [1, 1], [4, -1])
    assert poly.freqs == (1, 2)
    assert np.allclose(poly.coeffs, [4.0, -1.0])

    poly = alignment_polynomial(a12, [0, 0], [4, -1])
    assert np.allclose(poly.coeffs, 0.0)
    with pytest.raises(DimensionMismatch):
        alignment_polynomial(a12, [1, 0, 0], [1, 1])


def test_alignment_polynomial_evaluates_the_inner_product():
    rng = np.random.default_rng(2)
    for _ in range(25):
        dim = int(rng.integers(1, 5))
        action = WeightedCircleAction(random_weights(rng, dim, 6))
        x = random_circle_point(rng, dim)
        z = random_circle_point(rng, dim)
        poly = alignment_polynomial(action, x, z)
        for theta in rng.uniform(-np.pi, np.pi, size=8):
            direct = np.vdot(x, action.apply(theta, z)).real
            assert abs(poly.evaluate_scalar(theta) - direct) < 1e-12 * (1 + abs(direct))


def test_max_filter_circle_examples():
    a11 = WeightedCircleAction((1, 1))
    res = max_filter_circle(a11, [1, 0], [1j, 0])
    assert abs(res.value - 1.0) < 1e-9

    a12 = WeightedCircleAction((1, 2))
    res = max_filter_circle(a12, [1, 1], [4, -1])
    assert abs(res.value - 3.0) < 1e-9
    assert res.multiplicity == 1
    assert abs(res.witnesses[0]) < 1e-6

    res = max_filter_circle(a12, [1, 1], [2, -1])
    assert abs(res.value - 1.5) < 1e-9
    assert res.multiplicity == 2
    assert np.allclose(sorted(res.witnesses), [-np.pi / 3, np.pi / 3], atol=1e-6)
    # independent dense-grid check of the same value
    assert abs(res.value - dense_alignment_max((1, 2), [1, 1], [2, -1])) < 1e-7

    res = max_filter_circle(a12, [1, 1], [0, 0])
    assert res.value == 0.0 and res.flat


def test_flat_objective_is_flagged():
    a11 = WeightedCircleAction((1, 1))
    res = max_filter_circle(a11, [1, 0], [0, 1])
    assert res.flat
    assert abs(res.value) < 1e-12


def test_max_filter_finite_examples():
    pm = FiniteGroupAction([np.eye(2), -np.eye(2)])
    res = max_filter_finite(pm, [1, 0], [-2, 0])
    assert res.value == 2.0 and res.witnesses == (1,)

    triv = FiniteGroupAction([np.eye(2)])
    assert max_filter_finite(triv, [1, 1], [1, -1]).value == 0.0

    cyc4 = FiniteGroupAction([rotation(2 * math.pi * t / 4) for t in range(4)])
    res = max_filter_finite(cyc4, [1, 0], [0, 3])
    assert abs(res.value - 3.0) < 1e-12
    # witness is the rotation by -pi/2, i.e. the order-3 power
    assert res.witnesses == (3,)


def test_quotient_distance_examples():
    a12 = WeightedCircleAction((1, 2))
    assert quotient_distance(a12, [1, 1], [1, 1]) < 1e-9
    a11 = WeightedCircleAction((1, 1))
    assert quotient_distance(a11, [1, 0], [1j, 0]) < 1e-9
    d = quotient_distance(a12, [1, 1], [4, -1])
    assert abs(d - math.sqrt(13)) < 1e-9
    assert abs(d - dense_orbit_distance((1, 2), [1, 1], [4, -1], n=1 << 16)) < 1e-4


def test_witness_values_match_the_reported_maximum():
    rng = np.random.default_rng(8)
    for _ in range(50):
        dim = int(rng.integers(1, 4))
        action = WeightedCircleAction(random_weights(rng, dim, 5))
        x, z = random_circle_point(rng, dim), random_circle_point(rng, dim)
        res = max_filter_circle(action, x, z)
        poly = alignment_polynomial(action, x, z)
        ctol = 1e-6 * (1 + abs(res.value))
        for theta in res.witnesses:
            assert poly.evaluate_scalar(theta) >= res.value - ctol
        # the reported value dominates the grid
        grid = poly.evaluate(2 * np.pi * np.arange(64) / 64)
        assert res.value >= grid.max() - 1e-9


def test_invariance_and_symmetry():
    rng = np.random.default_rng(21)
    for _ in range(30):
        dim = int(rng.integers(1, 5))
        action = WeightedCircleAction(random_weights(rng, dim, 6))
        x, z = random_circle_point(rng, dim), random_circle_point(rng, dim)
        base = max_filter_circle(action, x, z).value
        tol = 1e-8 * (1 + np.linalg.norm(x) * np.linalg.norm(z))
        for theta in rng.uniform(-np.pi, np.pi, size=8):
            assert abs(max_filter_circle(action, action.apply(theta, x), z).value - base) <= tol
        assert abs(max_filter_circle(action, z, x).value - base) <= tol


def test_invariance_and_symmetry_finite():
    rng = np.random.default_rng(33)
    cyc = FiniteGroupAction([rotation(2 * math.pi * t / 6) for t in range(6)])
    for _ in range(20):
        x, z = rng.standard_normal(2), rng.standard_normal(2)
        base = max_filter_finite(cyc, x, z).value
        tol = 1e-8 * (1 + np.linalg.norm(x) * np.linalg.norm(z))
        for g in range(6):
            assert abs(max_filter_finite(cyc, cyc.apply(g, x), z).value - base) <= tol
        assert abs(max_filter_finite(cyc, z, x).value - base) <= tol


def test_cauchy_schwarz_bound():
    rng = np.random.default_rng(4)
    for _ in range(50):
        dim = int(rng.integers(1, 5))
        action = WeightedCircleAction(random_weights(rng, dim, 6))
        x, z = random_circle_point(rng, dim), random_circle_point(rng, dim)
        v = max_filter_circle(action, x, z).value
        assert abs(v) <= np.linalg.norm(x) * np.linalg.norm(z) + 1e-9


def test_per_template_lipschitz():
    rng = np.random.default_rng(9)
    for _ in range(40):
        dim = int(rng.integers(1, 4))
        action = WeightedCircleAction(random_weights(rng, dim, 5))
        x, y, z = (random_circle_point(rng, dim) for _ in range(3))
        lhs = abs(
            max_filter_circle(action, x, z).value - max_filter_circle(action, y, z).value
        )
        rhs = np.linalg.norm(z) * quotient_distance(action, x, y, HI_RES_CONFIG)
        assert lhs <= rhs + 1e-7 * (1 + rhs)


def test_triangle_inequality():
    rng = np.random.default_rng(14)
    for _ in range(60):
        dim = int(rng.integers(1, 4))
        action = WeightedCircleAction(random_weights(rng, dim, 5))
        x, y, z = (random_circle_point(rng, dim) for _ in range(3))
        dxz = quotient_distance(action, x, z, HI_RES_CONFIG)
        dxy = quotient_distance(action, x, y, HI_RES_CONFIG)
        dyz = quotient_distance(action, y, z, HI_RES_CONFIG)
        assert dxz <= dxy + dyz + 1e-7


def test_finite_circle_consistency():
    # The grid stage of the circle solver at size N equals the exact finite
    # maximum over the induced cyclic subgroup of order N.
    rng = np.random.default_rng(27)
    for _ in range(10):
        dim = int(rng.integers(1, 4))
        weights = random_weights(rng, dim, 4)
        action = WeightedCircleAction(weights)
        x, z = random_circle_point(rng, dim), random_circle_point(rng, dim)
        k = max(abs(w) for w in weights)
        for oversample in (1, 3):  # odd grid sizes included on purpose
            n = CircleSolverConfig(oversample=max(1, oversample)).grid_size(k)
            grid_only = CircleSolverConfig(oversample=oversample, refine_iters=0)
            circle_val = max_filter_circle(action, x, z, grid_only).value
            finite = action.cyclic_subgroup(n)
            xr = np.empty(2 * dim)
            xr[0::2], xr[1::2] = x.real, x.imag
            zr = np.empty(2 * dim)
            zr[0::2], zr[1::2] = z.real, z.imag
            finite_val = max_filter_finite(finite, xr, zr).value
            assert abs(circle_val - finite_val) <= 1e-12 * (1 + abs(finite_val))


def test_newton_refinement_agrees_with_golden():
    rng = np.random.default_rng(40)
    for _ in range(25):
        dim = int(rng.integers(1, 4))
        action = WeightedCircleAction(random_weights(rng, dim, 5))
        x, z = random_circle_point(rng, dim), random_circle_point(rng, dim)
        golden = max_filter_circle(action, x, z, CircleSolverConfig()).value
        newton = max_filter_circle(
            action, x, z, CircleSolverConfig(refine_method="newton", refine_iters=30)
        ).value
        assert abs(golden - newton) < 1e-9 * (1 + abs(golden))


def test_cluster_witnesses():
    res = cluster_witnesses(
        [(0.0, 1.0), (0.001, 1.0 - 1e-9), (2.0, 1.0 - 1e-9), (1.0, 0.5)],
        cluster_tol=1e-6,
        merge_radius=0.01,
    )
    assert res.value == 1.0
    assert res.multiplicity == 2
    # wrap-around: angles near +-pi merge into one cluster
    res = cluster_witnesses([(math.pi - 0.001, 1.0), (-math.pi + 0.001, 1.0)], 1e-6, 0.01)
    assert res.multiplicity == 1
    with pytest.raises(ValueError):
        cluster_witnesses([(0.0, 1.0)], cluster_tol=0.0, merge_radius=0.1)


def test_zero_weight_coordinates_contribute_a_constant():
    action = WeightedCircleAction((0, 1))
    res = max_filter_circle(action, [2, 1], [3, 1j])
    # constant 6 from the fixed coordinate plus |conj(1) * i| = 1
    assert abs(res.value - 7.0) < 1e-9


def test_solver_matches_dense_grid_sample():
    rng = np.random.default_rng(55)
    for _ in range(25):
        dim = int(rng.integers(1, 6))
        weights = random_weights(rng, dim, 8)
        action = WeightedCircleAction(weights)
        x = random_circle_point(rng, dim)
        z = random_circle_point(rng, dim)
        for p in (x, z):
            norm = np.linalg.norm(p)
            if norm > 2.0:
                p *= 2.0 / norm
        solver = max_filter_circle(action, x, z).value
        dense = dense_alignment_max(weights, x, z, n=200_000)
        assert abs(solver - dense) <= 1e-7
