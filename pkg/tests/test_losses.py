import math

import numpy as np
import pytest
import scipy.sparse as sp

from approx_solver.blocks import build_partition, unit_partition
from approx_solver.errors import ConfigurationError, DimensionError
from approx_solver.losses import (LossKind, ResidualPair, ScalarLoss, block_gradient, f_value,
                                  phi, phi_prime, residual_update)
from approx_solver.problem import CompositeProblem
from approx_solver.prox import SeparableRegularizer
from approx_solver.sparse_data import SparseMatrix

from conftest import random_sparse

KINDS = [(LossKind.SQUARE, None, 1.0), (LossKind.LOGISTIC, None, 0.25),
         (LossKind.SMOOTHED_ABS, 0.3, 1 / 0.3)]


def test_phi_values():
    assert phi(ScalarLoss(LossKind.SQUARE, [0.0]), 0, 2.0) == pytest.approx(2.0)
    assert phi(ScalarLoss(LossKind.LOGISTIC, [0.0]), 0, 0.0) == pytest.approx(math.log(2))
    mu = 0.4
    smooth = ScalarLoss(LossKind.SMOOTHED_ABS, [1.0], mu=mu)
    assert phi(smooth, 0, 1.0 + mu) == pytest.approx(mu / 2)
    assert phi(smooth, 0, 1.0 - mu) == pytest.approx(mu / 2)
    assert phi(smooth, 0, 1.0 + np.nextafter(mu, 0)) == pytest.approx(mu / 2)


def test_phi_prime_values():
    assert phi_prime(ScalarLoss(LossKind.SQUARE, [1.0]), 0, 1.0) == 0.0
    assert phi_prime(ScalarLoss(LossKind.LOGISTIC, [0.0]), 0, 0.0) == pytest.approx(0.5)
    smooth = ScalarLoss(LossKind.SMOOTHED_ABS, [0.0], mu=0.5)
    assert phi_prime(smooth, 0, 10.0) == 1.0
    assert phi_prime(smooth, 0, -0.25) == pytest.approx(-0.5)


def test_logistic_is_overflow_safe():
    loss = ScalarLoss(LossKind.LOGISTIC, np.zeros(2))
    values = loss.values(np.array([1000.0, -1000.0]))
    assert np.all(np.isfinite(values))
    assert values[0] == pytest.approx(1000.0)
    np.testing.assert_allclose(loss.derivatives(np.array([1000.0, -1000.0])), [1.0, 0.0])


def test_smoothed_abs_requires_mu():
    with pytest.raises(ConfigurationError):
        ScalarLoss(LossKind.SMOOTHED_ABS, [0.0])
    with pytest.raises(ConfigurationError):
        ScalarLoss(LossKind.SMOOTHED_ABS, [0.0], mu=0.0)


@pytest.mark.parametrize("kind,mu,lipschitz", KINDS)
def test_derivative_lipschitz_and_convexity(kind, mu, lipschitz):
    rng = np.random.default_rng(0)
    loss = ScalarLoss(kind, np.zeros(10_000), mu=mu)
    assert loss.lipschitz_constant == pytest.approx(lipschitz)
    s = rng.normal(scale=3.0, size=10_000)
    t = rng.normal(scale=3.0, size=10_000)
    ds, dt = loss.derivatives(s), loss.derivatives(t)
    assert np.all(np.abs(ds - dt) <= lipschitz * np.abs(s - t) * (1 + 1e-12) + 1e-15)
    assert np.all(loss.values(s) >= loss.values(t) + dt * (s - t) - 1e-12)


def test_f_value_edge_cases():
    b = np.array([1.0, -2.0, 0.5])
    loss = ScalarLoss(LossKind.SQUARE, b)
    assert f_value(loss, b) == 0.0
    single = ScalarLoss(LossKind.LOGISTIC, [0.0])
    assert f_value(single, [0.3]) == pytest.approx(phi(single, 0, 0.3))
    with pytest.raises(DimensionError):
        f_value(loss, np.zeros(2))


def _instance(kind, seed, partition=None):
    A = random_sparse(25, 10, 0.3, seed)
    b = np.random.default_rng(seed).standard_normal(25)
    loss = ScalarLoss(kind, b if kind is not LossKind.LOGISTIC else np.zeros(25),
                      mu=0.2 if kind is LossKind.SMOOTHED_ABS else None)
    return CompositeProblem(A, loss, SeparableRegularizer.zero(),
                            partition or unit_partition(10))


@pytest.mark.parametrize("seed", range(50))
def test_block_gradient_matches_dense_and_finite_differences(seed):
    kind = [LossKind.SQUARE, LossKind.LOGISTIC, LossKind.SMOOTHED_ABS][seed % 3]
    partition = build_partition([3, 1, 2, 4]) if seed % 2 else unit_partition(10)
    problem = _instance(kind, seed, partition)
    rng = np.random.default_rng(100 + seed)
    u = rng.standard_normal(10)
    z = rng.standard_normal(10)
    theta_sq = rng.uniform(0.01, 1.0)
    rp = ResidualPair.from_vectors(problem.matrix, u, z)
    y = theta_sq * u + z
    dense = problem.gradient(y)
    for i in range(partition.n):
        sl = partition.block_slice(i)
        g = block_gradient(problem.loss, problem.matrix, partition, i, theta_sq, rp)
        np.testing.assert_allclose(g, dense[sl], rtol=1e-12, atol=1e-12 * (1 + np.abs(dense).max()))
    if kind is not LossKind.SMOOTHED_ABS:
        eps = 1e-6
        for col in range(10):
            e = np.zeros(10)
            e[col] = eps
            fd = (problem.smooth_value(y + e) - problem.smooth_value(y - e)) / (2 * eps)
            assert fd == pytest.approx(dense[col], rel=1e-6, abs=1e-6)


def test_block_gradient_with_zero_u_is_plain_gradient(lasso_problem):
    z = np.random.default_rng(0).standard_normal(lasso_problem.N)
    rp = ResidualPair.from_vectors(lasso_problem.matrix, np.zeros(lasso_problem.N), z)
    dense = lasso_problem.gradient(z)
    for i in range(lasso_problem.n):
        g = block_gradient(lasso_problem.loss, lasso_problem.matrix, lasso_problem.partition,
                           i, 0.37, rp)
        assert g[0] == pytest.approx(dense[i], rel=1e-12, abs=1e-14)


def test_empty_block_column_has_zero_gradient():
    A = SparseMatrix(sp.csc_matrix(np.array([[1.0, 0.0], [2.0, 0.0]])))
    loss = ScalarLoss(LossKind.SQUARE, [1.0, 1.0])
    rp = ResidualPair(np.zeros(2), np.zeros(2))
    assert block_gradient(loss, A, unit_partition(2), 1, 1.0, rp)[0] == 0.0


def test_residual_updates_track_products():
    A = random_sparse(40, 15, 0.25, seed=9)
    partition = build_partition([2, 3, 1, 4, 5])
    rng = np.random.default_rng(9)
    u = np.zeros(15)
    z = rng.standard_normal(15)
    rp = ResidualPair.from_vectors(A, u, z)
    before = rp.copy()
    residual_update(rp, A, partition, 1, np.zeros(3), -2.0)
    np.testing.assert_array_equal(rp.r_z, before.r_z)
    np.testing.assert_array_equal(rp.r_u, before.r_u)
    for _ in range(500):
        i = int(rng.integers(partition.n))
        sl = partition.block_slice(i)
        t = rng.standard_normal(sl.stop - sl.start)
        coeff = -rng.uniform(0.0, 5.0)
        z[sl] += t
        u[sl] += coeff * t
        residual_update(rp, A, partition, i, t, coeff)
    np.testing.assert_allclose(rp.r_z, A.matvec(z), rtol=1e-10, atol=1e-10)
    np.testing.assert_allclose(rp.r_u, A.matvec(u), rtol=1e-10, atol=1e-10)
