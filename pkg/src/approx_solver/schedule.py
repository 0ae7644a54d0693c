"""
Schedule Module
Theta sequence, convex-combination coefficients and complexity bounds
"""
import math
from typing import List

import numpy as np

from .blocks import BlockPartition, normalized_weights, unit_partition, weighted_norm_sq
from .errors import ConfigurationError

THETA_IDENTITY_TOLERANCE = 1e-12


def theta_next(theta: float) -> float:
    """(sqrt(theta^4 + 4 theta^2) - theta^2) / 2"""
    if not 0.0 < theta <= 1.0:
        raise ConfigurationError(f"theta must lie in (0, 1], got {theta}")
    sq = theta * theta
    return (math.sqrt(sq * sq + 4.0 * sq) - sq) / 2.0


def theta_identity_residual(theta: float, theta_new: float) -> float:
    """|(1 - theta') / theta'^2 - 1 / theta^2|, relative to 1 / theta^2"""
    lhs = (1.0 - theta_new) / (theta_new * theta_new)
    rhs = 1.0 / (theta * theta)
    return abs(lhs - rhs) / rhs


class ThetaSchedule:
    """Decreasing theta sequence started at tau / n"""

    def __init__(self, tau: int, n: int, keep_history: bool = True):
        if not 1 <= tau <= n:
            raise ConfigurationError(f"tau must lie in [1, {n}], got {tau}")
        self.tau = tau
        self.n = n
        self.theta0 = tau / n
        self.theta = self.theta0
        self.k = 0
        self.keep_history = keep_history
        self.history = [self.theta0] if keep_history else []

    def advance(self) -> float:
        self.theta = theta_next(self.theta)
        self.k += 1
        if self.keep_history:
            self.history.append(self.theta)
        return self.theta

    def check(self, previous: float) -> None:
        """Assert the schedule invariants for the latest step"""
        theta = self.theta
        if not 0.0 < theta < previous <= self.theta0:
            raise AssertionError(f"theta not decreasing at k={self.k}: {previous} -> {theta}")
        bound = 2.0 / (self.k + 2.0 * self.n / self.tau)
        if theta > bound * (1.0 + 1e-12):
            raise AssertionError(f"theta_{self.k}={theta} exceeds 2/(k+2n/tau)={bound}")
        residual = theta_identity_residual(previous, theta)
        if residual > THETA_IDENTITY_TOLERANCE:
            raise AssertionError(f"theta identity residual {residual:.3e} at k={self.k}")


def gamma_coeffs(theta_history, tau: int, n: int, k: int) -> List[float]:
    """
    Coefficients gamma_k^0..gamma_k^k with x_k = sum_l gamma_k^l z_l

    Args:
        theta_history: theta_0, theta_1, ... (at least k entries)
        tau: Nominal sampling size
        n: Number of blocks
        k: Iteration index

    Returns:
        List of k + 1 coefficients
    """
    if k == 0:
        return [1.0]
    if len(theta_history) < k:
        raise ConfigurationError(f"need {k} theta values, got {len(theta_history)}")
    ratio = n / tau
    gamma = [0.0, 1.0]
    for step in range(1, k):
        theta = theta_history[step]
        theta_prev = theta_history[step - 1]
        updated = [(1.0 - theta) * g for g in gamma[:-1]]
        updated.append(theta * (1.0 - ratio * theta_prev) + ratio * (theta_prev - theta))
        updated.append(ratio * theta)
        gamma = updated
    return gamma


def gamma_identity_residual(gamma_next, gamma_curr, theta: float, tau: int, n: int) -> float:
    """gamma_{k+1}^k + ((n - tau)/tau) theta_k - (1 - theta_k) gamma_k^k"""
    k = len(gamma_curr) - 1
    return abs(gamma_next[k] + (n - tau) / tau * theta - (1.0 - theta) * gamma_curr[k])


def complexity_bound(k: int, tau: int, n: int, C: float) -> float:
    """4 n^2 / ((k - 1) tau + 2 n)^2 * C"""
    if k < 1:
        raise ConfigurationError(f"the bound holds for k >= 1, got k={k}")
    if C < 0:
        raise ConfigurationError(f"C must be nonnegative, got {C}")
    return 4.0 * n * n / ((k - 1) * tau + 2.0 * n) ** 2 * C


def iteration_complexity(eps: float, tau: int, n: int, C: float) -> int:
    """Iterations that guarantee an eps-solution in expectation, 0 < eps <= C"""
    if not 0 < eps <= C:
        raise ConfigurationError(f"need 0 < eps <= C, got eps={eps}, C={C}")
    return math.ceil(2.0 * n / tau * (math.sqrt(C / eps) - 1.0) + 1.0)


def bound_constant(F0: float, Fstar: float, x0, xstar, v, tau: int,
                   partition: BlockPartition = None) -> float:
    """C = (1 - tau/n)(F(x0) - F*) + (1/2)||x0 - x*||_v^2"""
    v = np.asarray(v, dtype=np.float64)
    partition = partition or unit_partition(len(v))
    n = partition.n
    diff = np.asarray(x0, dtype=np.float64) - np.asarray(xstar, dtype=np.float64)
    return (1.0 - tau / n) * (F0 - Fstar) + 0.5 * weighted_norm_sq(diff, v, partition)


def deterministic_bound(k: int, v, x0, xstar, partition: BlockPartition = None) -> float:
    """Full-sampling bound 2 (||v||_1 / n) / (k + 1)^2 ||x0 - x*||^2_{v~}"""
    v = np.asarray(v, dtype=np.float64)
    partition = partition or unit_partition(len(v))
    diff = np.asarray(x0, dtype=np.float64) - np.asarray(xstar, dtype=np.float64)
    v_tilde = normalized_weights(v)
    return 2.0 * (np.abs(v).sum() / partition.n) / (k + 1) ** 2 * weighted_norm_sq(
        diff, v_tilde, partition)
