import math

import numpy as np
import pytest

from approx_solver.blocks import unit_partition, weighted_norm_sq
from approx_solver.errors import ConfigurationError
from approx_solver.schedule import (ThetaSchedule, bound_constant, complexity_bound,
                                    deterministic_bound, gamma_coeffs, gamma_identity_residual,
                                    iteration_complexity, theta_identity_residual, theta_next)


def test_theta_next_from_one():
    assert theta_next(1.0) == pytest.approx((math.sqrt(5) - 1) / 2, rel=1e-15)


@pytest.mark.parametrize("theta", [0.0, -0.1, 1.5, float("nan")])
def test_theta_outside_unit_interval_raises(theta):
    with pytest.raises(ConfigurationError):
        theta_next(theta)


def test_theta_identity_on_random_values():
    for theta in np.random.default_rng(0).uniform(1e-6, 1.0, size=1000):
        assert theta_identity_residual(theta, theta_next(theta)) <= 1e-12


@pytest.mark.parametrize("n,tau", [(10, 1), (10, 10), (1000, 16), (7, 3)])
def test_schedule_invariants(n, tau):
    schedule = ThetaSchedule(tau, n, keep_history=False)
    for _ in range(2000):
        previous = schedule.theta
        schedule.advance()
        schedule.check(previous)


def test_schedule_rejects_bad_tau():
    with pytest.raises(ConfigurationError):
        ThetaSchedule(0, 5)
    with pytest.raises(ConfigurationError):
        ThetaSchedule(6, 5)


def test_gamma_base_cases():
    assert gamma_coeffs([], 2, 5, 0) == [1.0]
    assert gamma_coeffs([0.4], 2, 5, 1) == [0.0, 1.0]
    with pytest.raises(ConfigurationError):
        gamma_coeffs([0.4], 2, 5, 3)


@pytest.mark.parametrize("n,tau", [(10, 1), (10, 3), (10, 10), (50, 7)])
def test_gamma_is_a_convex_combination(n, tau):
    schedule = ThetaSchedule(tau, n)
    for _ in range(120):
        schedule.advance()
    history = schedule.history
    previous = gamma_coeffs(history, tau, n, 1)
    for k in range(2, 120):
        gamma = gamma_coeffs(history, tau, n, k)
        assert len(gamma) == k + 1
        assert min(gamma) >= -1e-12
        assert sum(gamma) == pytest.approx(1.0, abs=1e-12)
        assert gamma_identity_residual(gamma, previous, history[k - 1], tau, n) <= 1e-12
        previous = gamma


def test_complexity_bound_values():
    assert complexity_bound(1, 4, 10, 3.0) == pytest.approx(3.0)
    values = [complexity_bound(k, 4, 10, 3.0) for k in range(1, 100)]
    assert all(b < a for a, b in zip(values, values[1:]))
    with pytest.raises(ConfigurationError):
        complexity_bound(0, 4, 10, 3.0)
    with pytest.raises(ConfigurationError):
        complexity_bound(1, 4, 10, -1.0)


def test_full_sampling_bound_matches_deterministic_form():
    rng = np.random.default_rng(1)
    n = 12
    v = rng.uniform(0.5, 4.0, n)
    x0 = rng.standard_normal(n)
    xstar = rng.standard_normal(n)
    C = bound_constant(5.0, 1.0, x0, xstar, v, tau=n)
    assert C == pytest.approx(0.5 * weighted_norm_sq(x0 - xstar, v, unit_partition(n)))
    for k in (1, 2, 10, 500):
        assert complexity_bound(k, n, n, C) == pytest.approx(
            deterministic_bound(k, v, x0, xstar), rel=1e-12)


def test_iteration_complexity():
    assert iteration_complexity(3.0, 2, 10, 3.0) == 1
    assert iteration_complexity(0.75, 2, 10, 3.0) == 11
    for eps in (1e-1, 1e-3, 1e-6):
        k = iteration_complexity(eps, 5, 40, 2.0)
        assert complexity_bound(k, 5, 40, 2.0) <= eps * (1 + 1e-12)
        assert k == 1 or complexity_bound(k - 1, 5, 40, 2.0) > eps
    with pytest.raises(ConfigurationError):
        iteration_complexity(5.0, 2, 10, 3.0)
    with pytest.raises(ConfigurationError):
        iteration_complexity(0.0, 2, 10, 3.0)
