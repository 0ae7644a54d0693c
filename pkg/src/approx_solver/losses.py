"""
Losses Module
Scalar losses phi_j and the smooth part f(x) = sum_j phi_j(e_j^T A x)
"""
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .errors import ConfigurationError, DimensionError


class LossKind(str, Enum):
    SQUARE = "square"
    LOGISTIC = "logistic"
    SMOOTHED_ABS = "smoothed-abs"


@dataclass(frozen=True)
class ScalarLoss:
    """
    A family of scalar losses, one per row of A.

    Square:       phi_j(s) = (s - b_j)^2 / 2
    Logistic:     phi_j(s) = log(1 + exp(s))   (label folded into the row)
    SmoothedAbs:  phi_j(s) = psi_mu(|s - b_j|)
    """
    kind: LossKind
    b: np.ndarray
    mu: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "b", np.asarray(self.b, dtype=np.float64))
        if self.kind is LossKind.SMOOTHED_ABS and (self.mu is None or not self.mu > 0):
            raise ConfigurationError(f"smoothed-abs loss needs mu > 0, got {self.mu}")

    @property
    def m(self) -> int:
        return len(self.b)

    @property
    def lipschitz_constant(self) -> float:
        """L_phi, shared by every row"""
        if self.kind is LossKind.SQUARE:
            return 1.0
        if self.kind is LossKind.LOGISTIC:
            return 0.25
        return 1.0 / self.mu

    def row_lipschitz(self) -> np.ndarray:
        return np.full(self.m, self.lipschitz_constant)

    def _targets(self, rows):
        return self.b if rows is None else self.b[rows]

    def values(self, s, rows=None) -> np.ndarray:
        """phi_j(s_j) for the given rows (all rows when rows is None)"""
        s = np.asarray(s, dtype=np.float64)
        if self.kind is LossKind.LOGISTIC:
            return np.log1p(np.exp(-np.abs(s))) + np.maximum(s, 0.0)
        t = s - self._targets(rows)
        if self.kind is LossKind.SQUARE:
            return 0.5 * t * t
        a = np.abs(t)
        return np.where(a <= self.mu, a * a / (2.0 * self.mu), a - self.mu / 2.0)

    def derivatives(self, s, rows=None) -> np.ndarray:
        """phi_j'(s_j) for the given rows"""
        s = np.asarray(s, dtype=np.float64)
        if self.kind is LossKind.LOGISTIC:
            # 1 / (1 + exp(-s)) without overflow for large |s|
            e = np.exp(-np.abs(s))
            return np.where(s >= 0, 1.0 / (1.0 + e), e / (1.0 + e))
        t = s - self._targets(rows)
        if self.kind is LossKind.SQUARE:
            return t
        return np.clip(t / self.mu, -1.0, 1.0)


def phi(loss: ScalarLoss, j: int, s: float) -> float:
    return float(loss.values(np.array([s]), rows=np.array([j]))[0])


def phi_prime(loss: ScalarLoss, j: int, s: float) -> float:
    return float(loss.derivatives(np.array([s]), rows=np.array([j]))[0])


def f_value(loss: ScalarLoss, r) -> float:
    """f at a point whose residual A x equals r"""
    r = np.asarray(r, dtype=np.float64)
    if r.shape != (loss.m,):
        raise DimensionError(f"residual has shape {r.shape}, expected ({loss.m},)")
    return float(loss.values(r).sum())


class ResidualPair:
    """Maintained products r_u = A u and r_z = A z~"""

    def __init__(self, r_u, r_z):
        self.r_u = np.array(r_u, dtype=np.float64)
        self.r_z = np.array(r_z, dtype=np.float64)

    @classmethod
    def from_vectors(cls, matrix, u, z):
        return cls(matrix.matvec(u), matrix.matvec(z))

    def combined(self, theta_sq: float) -> np.ndarray:
        """Residual of y = theta^2 u + z~"""
        return theta_sq * self.r_u + self.r_z

    def copy(self) -> "ResidualPair":
        return ResidualPair(self.r_u.copy(), self.r_z.copy())


def block_gradient(loss: ScalarLoss, matrix, partition, i: int, theta_sq: float,
                   rp: ResidualPair) -> np.ndarray:
    """
    Block-i gradient of f at y = theta^2 u + z~, touching only rows in D_i

    Args:
        loss: Row losses
        matrix: SparseMatrix holding A
        partition: Block partition of the columns
        i: Block index
        theta_sq: theta_k^2
        rp: Residuals consistent with the current u and z~

    Returns:
        Gradient block of length N_i
    """
    sl = partition.block_slice(i)
    grad = np.empty(sl.stop - sl.start)
    for pos, col in enumerate(range(sl.start, sl.stop)):
        rows, vals = matrix.column(col)
        if rows.size == 0:
            grad[pos] = 0.0
            continue
        s = theta_sq * rp.r_u[rows] + rp.r_z[rows]
        grad[pos] = np.dot(vals, loss.derivatives(s, rows=rows))
    return grad


def column_delta(matrix, partition, i: int, t) -> tuple:
    """Rows and values of A_{:,i} t (the contribution of one block step)"""
    sl = partition.block_slice(i)
    t = np.atleast_1d(np.asarray(t, dtype=np.float64))
    row_parts = []
    val_parts = []
    for pos, col in enumerate(range(sl.start, sl.stop)):
        if t[pos] == 0.0:
            continue
        rows, vals = matrix.column(col)
        row_parts.append(rows)
        val_parts.append(vals * t[pos])
    if not row_parts:
        return np.empty(0, dtype=np.int64), np.empty(0)
    return np.concatenate(row_parts), np.concatenate(val_parts)


def residual_update(rp: ResidualPair, matrix, partition, i: int, t,
                    coeff_u: float) -> ResidualPair:
    """
    Apply an accepted block step t to the residuals in place:
    r_z += A_{:,i} t and r_u += coeff_u A_{:,i} t
    """
    rows, delta = column_delta(matrix, partition, i, t)
    if rows.size:
        np.add.at(rp.r_z, rows, delta)
        if coeff_u != 0.0:
            np.add.at(rp.r_u, rows, coeff_u * delta)
    return rp
