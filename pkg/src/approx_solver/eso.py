"""
ESO Module
Block Lipschitz constants, ESO stepsizes (fr / rt / nc) and their checks
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List, Optional

import numpy as np
import scipy.sparse as sp
from tqdm import tqdm

from .blocks import BlockPartition, weighted_norm_sq
from .errors import DimensionError, UnsupportedCombinationError
from .losses import LossKind, ScalarLoss
from .sampling import DEFAULT_ENUMERATION_CAP, enumerate_tau_nice
from .sparse_data import SparseMatrix

logger = logging.getLogger(__name__)

ESO_SLACK_TOLERANCE = 1e-12


class StepsizeKind(str, Enum):
    FR = "fr"
    RT = "rt"
    NC = "nc"


@dataclass(frozen=True)
class LipschitzTable:
    """
    L_ji over (row, block) pairs, stored on the row-block pattern of A.

    omega[j] counts the blocks row j touches; omega_max is their maximum.
    """
    table: sp.csr_matrix
    omega: np.ndarray
    partition: BlockPartition

    @property
    def m(self) -> int:
        return self.table.shape[0]

    @property
    def n(self) -> int:
        return self.table.shape[1]

    @property
    def omega_max(self) -> int:
        return int(self.omega.max()) if self.omega.size else 0

    def dense(self) -> np.ndarray:
        return self.table.toarray()


@dataclass(frozen=True)
class StepsizeVector:
    v: np.ndarray
    provenance: StepsizeKind
    tau: int

    @property
    def l1(self) -> float:
        return float(np.abs(self.v).sum())

    def positive(self) -> np.ndarray:
        """v with untouched blocks (v_i = 0) set to 1"""
        return np.where(self.v > 0, self.v, 1.0)


@dataclass(frozen=True)
class SeparabilityAverages:
    omega_bar: float
    L_bar: float
    w: np.ndarray


def lipschitz_table(matrix: SparseMatrix, partition: BlockPartition,
                    loss_lipschitz) -> LipschitzTable:
    """
    L_ji = L_phi_j ||A_ji||^2 for every row j and block i

    Args:
        matrix: Data matrix A
        partition: Column blocks
        loss_lipschitz: Per-row L_phi_j (array of length m) or a scalar

    Returns:
        LipschitzTable with omega populated from the sparsity pattern
    """
    loss_lipschitz = np.broadcast_to(np.asarray(loss_lipschitz, dtype=np.float64),
                                     (matrix.m,))
    if np.any(loss_lipschitz < 0):
        raise DimensionError("loss Lipschitz constants must be nonnegative")
    squares = matrix.block_row_sq_norms(partition)
    table = sp.csr_matrix(sp.diags(loss_lipschitz) @ squares)
    pattern = matrix.block_pattern(partition)
    omega = np.diff(pattern.indptr).astype(np.int64)
    logger.debug("Lipschitz table: m=%d n=%d omega=%d", matrix.m, partition.n,
                 omega.max() if omega.size else 0)
    return LipschitzTable(table=table, omega=omega, partition=partition)


def table_for_loss(matrix: SparseMatrix, partition: BlockPartition,
                   loss: ScalarLoss) -> LipschitzTable:
    return lipschitz_table(matrix, partition, loss.row_lipschitz())


def beta(omega_j, tau: int, n: int):
    """1 + (omega_j - 1)(tau - 1) / max(1, n - 1); vectorized over omega_j"""
    return 1.0 + (np.asarray(omega_j, dtype=np.float64) - 1.0) * (tau - 1) / max(1, n - 1)


def stepsizes(kind: StepsizeKind, table: LipschitzTable, matrix: SparseMatrix, tau: int,
              loss: Optional[ScalarLoss] = None) -> StepsizeVector:
    """
    ESO stepsizes for a tau-nice sampling

    fr: v_i = sum_j beta_j L_ji with beta_j built from omega_j
    rt: v_i = beta(omega) sum_j L_ji with the global omega
    nc: v_i = sum_{j: i in C_j} ||A_j:||^2 (unit blocks and square loss only)
    """
    kind = StepsizeKind(kind)
    n = table.n
    if kind is StepsizeKind.FR:
        v = _weighted_column_sums(table, beta(table.omega, tau, n))
    elif kind is StepsizeKind.RT:
        v = _weighted_column_sums(table, np.full(table.m, beta(table.omega_max, tau, n)))
    else:
        if not table.partition.is_unit:
            raise UnsupportedCombinationError("nc stepsizes require unit blocks")
        if loss is None or loss.kind is not LossKind.SQUARE:
            raise UnsupportedCombinationError("nc stepsizes require the square loss")
        pattern = matrix.block_pattern(table.partition)
        v = pattern.T @ matrix.row_sq_norms
    return StepsizeVector(v=np.asarray(v, dtype=np.float64).ravel(), provenance=kind, tau=tau)


def _weighted_column_sums(table: LipschitzTable, row_weights) -> np.ndarray:
    # fr and rt share this summation order, so equal weights give equal bits
    return np.asarray((sp.diags(row_weights) @ table.table).sum(axis=0)).ravel()


def separability_averages(table: LipschitzTable) -> SeparabilityAverages:
    """
    omega_bar = sum_j omega_j (sum_i L_ji) / sum L, L_bar = sum L / n,
    w_i = n sum_j omega_j L_ji / sum_{j,i} omega_j L_ji
    """
    row_sums = np.asarray(table.table.sum(axis=1)).ravel()
    total = row_sums.sum()
    if not total > 0:
        raise DimensionError("Lipschitz table is identically zero")
    omega = table.omega.astype(np.float64)
    omega_bar = float(omega @ row_sums / total)
    L_bar = float(total / table.n)
    weighted = table.table.T @ omega
    w = table.n * weighted / weighted.sum()
    return SeparabilityAverages(omega_bar=omega_bar, L_bar=L_bar, w=np.asarray(w).ravel())


def eso_slack(problem, tau: int, v, x, h, cap: int = DEFAULT_ENUMERATION_CAP) -> float:
    """
    RHS - LHS of the ESO inequality at (x, h), with the expectation over
    all tau-nice subsets computed exactly. Nonnegative slack certifies it.
    """
    v = v.v if isinstance(v, StepsizeVector) else np.asarray(v, dtype=np.float64)
    partition = problem.partition
    subsets = enumerate_tau_nice(partition.n, tau, cap=cap)
    x = np.asarray(x, dtype=np.float64)
    h = np.asarray(h, dtype=np.float64)
    fx = problem.smooth_value(x)
    grad = problem.gradient(x)
    expected = 0.0
    for subset in subsets:
        expected += problem.smooth_value(x + partition.restrict(h, subset))
    expected /= len(subsets)
    rhs = fx + (tau / partition.n) * (float(grad @ h) + 0.5 * weighted_norm_sq(h, v, partition))
    return rhs - expected


def eso_holds(slack: float, fx: float) -> bool:
    return slack >= -ESO_SLACK_TOLERANCE * (1.0 + abs(fx))


def compare_stepsizes(matrix: SparseMatrix, table: LipschitzTable, taus: Iterable[int],
                      loss: Optional[ScalarLoss] = None, progress: bool = False) -> List[dict]:
    """One record per tau: l1 norms of v^fr, v^rt, v^nc plus omega, omega_bar"""
    averages = separability_averages(table)
    records = []
    for tau in tqdm(list(taus), desc="Stepsizes", leave=False, disable=not progress):
        fr = stepsizes(StepsizeKind.FR, table, matrix, tau)
        rt = stepsizes(StepsizeKind.RT, table, matrix, tau)
        try:
            nc_l1 = stepsizes(StepsizeKind.NC, table, matrix, tau, loss=loss).l1
        except UnsupportedCombinationError:
            nc_l1 = None
        records.append({
            "tau": tau,
            "l1_fr": fr.l1,
            "l1_rt": rt.l1,
            "l1_nc": nc_l1,
            "omega": table.omega_max,
            "omega_bar": averages.omega_bar,
        })
    return records


def weighted_distance_table(xstar, x0, matrix: SparseMatrix, table: LipschitzTable,
                            taus: Iterable[int]) -> List[dict]:
    """||x* - x0|| measured in the v^fr and v^rt norms, for each tau"""
    diff = np.asarray(xstar, dtype=np.float64) - np.asarray(x0, dtype=np.float64)
    rows = []
    for tau in taus:
        fr = stepsizes(StepsizeKind.FR, table, matrix, tau)
        rt = stepsizes(StepsizeKind.RT, table, matrix, tau)
        rows.append({
            "tau": tau,
            "dist_fr": float(np.sqrt(weighted_norm_sq(diff, fr.v, table.partition))),
            "dist_rt": float(np.sqrt(weighted_norm_sq(diff, rt.v, table.partition))),
        })
    return rows
