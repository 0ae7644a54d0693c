"""
Problem Module
Composite objective F = f + psi and builders for the standard instances
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse as sp

from .blocks import BlockPartition, unit_partition
from .errors import ConfigurationError, DimensionError
from .losses import LossKind, ScalarLoss, f_value
from .prox import SeparableRegularizer, psi_value
from .sparse_data import SparseMatrix

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CompositeProblem:
    """f(x) = sum_j phi_j(e_j^T A x) plus a block-separable psi"""
    matrix: SparseMatrix
    loss: ScalarLoss
    regularizer: SeparableRegularizer
    partition: BlockPartition
    name: str = "generic"

    def __post_init__(self):
        if self.loss.m != self.matrix.m:
            raise DimensionError(
                f"loss has {self.loss.m} rows but A has {self.matrix.m}")
        self.matrix.check_partition(self.partition)

    @property
    def n(self) -> int:
        return self.partition.n

    @property
    def N(self) -> int:
        return self.partition.N

    def residual(self, x) -> np.ndarray:
        return self.matrix.matvec(x)

    def smooth_value(self, x) -> float:
        return f_value(self.loss, self.residual(x))

    def objective(self, x) -> float:
        return self.smooth_value(x) + psi_value(self.regularizer, x)

    def objective_from_residual(self, r, x) -> float:
        """F(x) when r = A x is already known"""
        return f_value(self.loss, r) + psi_value(self.regularizer, x)

    def gradient(self, x) -> np.ndarray:
        """Dense oracle A^T phi'(A x)"""
        return self.matrix.rmatvec(self.loss.derivatives(self.residual(x)))

    def gradient_from_residual(self, r) -> np.ndarray:
        return self.matrix.rmatvec(self.loss.derivatives(r))

    def block_columns(self, i: int) -> sp.csc_matrix:
        """A_{:,i}, the columns of block i"""
        return self.matrix.csc[:, self.partition.block_slice(i)]

    def feasible_start(self, x0=None) -> np.ndarray:
        """A starting point in dom psi (zero by default, projected)"""
        x0 = np.zeros(self.N) if x0 is None else np.asarray(x0, dtype=np.float64)
        if x0.shape != (self.N,):
            raise DimensionError(f"x0 has shape {x0.shape}, expected ({self.N},)")
        return self.regularizer.project(x0)


def _as_matrix(A) -> SparseMatrix:
    return A if isinstance(A, SparseMatrix) else SparseMatrix(A)


def lasso(A, b, lam: float, partition: Optional[BlockPartition] = None) -> CompositeProblem:
    """(1/2)||Ax - b||^2 + lam ||x||_1"""
    A = _as_matrix(A)
    return CompositeProblem(A, ScalarLoss(LossKind.SQUARE, b), SeparableRegularizer.l1(lam),
                            partition or unit_partition(A.N), name="lasso")


def least_squares(A, b, partition: Optional[BlockPartition] = None) -> CompositeProblem:
    A = _as_matrix(A)
    return CompositeProblem(A, ScalarLoss(LossKind.SQUARE, b), SeparableRegularizer.zero(),
                            partition or unit_partition(A.N), name="least-squares")


def fold_labels(A, labels) -> sp.csc_matrix:
    """Rows -y_j a_j, so that log(1 + exp(-y_j a_j^T x)) = phi(e_j^T A x)"""
    labels = _check_labels(labels)
    A = _as_matrix(A)
    return sp.csc_matrix(sp.diags(-labels) @ A.csc)


def logistic(A, labels, lam: float = 0.0,
             partition: Optional[BlockPartition] = None) -> CompositeProblem:
    """sum_j log(1 + exp(-y_j a_j^T x)) + lam ||x||_1"""
    labels = _check_labels(labels)
    folded = SparseMatrix(fold_labels(A, labels))
    reg = SeparableRegularizer.l1(lam) if lam > 0 else SeparableRegularizer.zero()
    return CompositeProblem(folded, ScalarLoss(LossKind.LOGISTIC, np.zeros(len(labels))), reg,
                            partition or unit_partition(folded.N), name="logistic")


def smoothed_l1(A, b, mu: float, lam: float,
                partition: Optional[BlockPartition] = None) -> CompositeProblem:
    """sum_j psi_mu(|a_j^T x - b_j|) + lam ||x||_1, the smoothed L1-L1 objective"""
    A = _as_matrix(A)
    return CompositeProblem(A, ScalarLoss(LossKind.SMOOTHED_ABS, b, mu=mu),
                            SeparableRegularizer.l1(lam),
                            partition or unit_partition(A.N), name="smoothed-l1")


def dual_svm(A, labels, lam: Optional[float] = None) -> CompositeProblem:
    """
    Dual linear SVM over x in [0, 1]^N, one coordinate per example.

    A is the m x N feature-by-example matrix and labels holds b_i = +-1 per
    example (column). With M_ji = b_i A_ji / (N sqrt(lam)) the objective
    1/(2 lam N^2) sum_j (sum_i b_i A_ji x_i)^2 - (1/N) sum_i x_i + I(x)
    becomes (1/2)||M x||^2 plus BoxLinear(0, 1, -1/N).

    Args:
        A: Feature matrix, m features by N examples
        labels: N labels in {-1, +1}
        lam: Regularization strength, defaults to 1/N

    Returns:
        CompositeProblem named "dual-svm"
    """
    A = _as_matrix(A)
    labels = _check_labels(labels)
    N = A.N
    if len(labels) != N:
        raise DimensionError(f"dual SVM needs one label per column: {len(labels)} != {N}")
    lam = 1.0 / N if lam is None else lam
    if not lam > 0:
        raise ConfigurationError(f"SVM lambda must be positive, got {lam}")
    scale = 1.0 / (N * np.sqrt(lam))
    scaled = SparseMatrix(A.csc @ sp.diags(labels * scale))
    reg = SeparableRegularizer.box_linear(0.0, 1.0, -1.0 / N)
    logger.debug("dual SVM with N=%d examples, m=%d features, lambda=%g", N, A.m, lam)
    return CompositeProblem(scaled, ScalarLoss(LossKind.SQUARE, np.zeros(A.m)), reg,
                            unit_partition(N), name="dual-svm")


def dual_svm_objective_dense(A, labels, lam: float, x) -> float:
    """Direct dense evaluation of the dual SVM objective"""
    if isinstance(A, SparseMatrix) or sp.issparse(A):
        dense = A.toarray()
    else:
        dense = np.asarray(A, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    N = dense.shape[1]
    if np.any(x < 0) or np.any(x > 1):
        return float("inf")
    inner = dense @ (labels * x)
    return float(inner @ inner / (2.0 * lam * N * N) - x.sum() / N)


def svm_primal_from_dual(A, labels, lam: float, x) -> np.ndarray:
    """w = (1/(lam N)) sum_i b_i x_i A_{:,i}"""
    A = _as_matrix(A)
    labels = np.asarray(labels, dtype=np.float64)
    return A.matvec(labels * np.asarray(x, dtype=np.float64)) / (lam * A.N)


def svm_duality_gap(A, labels, lam: float, x) -> float:
    """
    P(w(x)) - D(x), nonnegative for x in the box.
    P(w) = (1/N) sum_i max(0, 1 - b_i a_i^T w) + (lam/2)||w||^2, D = -F.
    """
    A = _as_matrix(A)
    labels = np.asarray(labels, dtype=np.float64)
    w = svm_primal_from_dual(A, labels, lam, x)
    margins = labels * A.rmatvec(w)
    primal = np.maximum(0.0, 1.0 - margins).mean() + 0.5 * lam * float(w @ w)
    dual = -dual_svm_objective_dense(A, labels, lam, x)
    return float(primal - dual)


def _check_labels(labels) -> np.ndarray:
    labels = np.asarray(labels, dtype=np.float64)
    if not np.all(np.isin(labels, (-1.0, 1.0))):
        raise ConfigurationError("labels must be -1 or +1")
    return labels
