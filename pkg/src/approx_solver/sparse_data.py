"""
Sparse Data Module
Column-major sparse data matrix with per-row separability metadata
"""
from typing import Optional

import numpy as np
import scipy.sparse as sp

from .blocks import BlockPartition, unit_partition
from .errors import DimensionError


class SparseMatrix:
    """
    Immutable m x N data matrix stored in CSC form.

    Explicit zeros are dropped and indices sorted on construction, so the
    stored pattern equals the numerical support. That matters for omega_j.
    """

    def __init__(self, matrix):
        csc = sp.csc_matrix(matrix, dtype=np.float64, copy=True)
        csc.sum_duplicates()
        csc.eliminate_zeros()
        csc.sort_indices()
        self._csc = csc
        self._csr = None
        self.row_sq_norms = np.asarray(csc.multiply(csc).sum(axis=1)).ravel()

    @classmethod
    def from_dense(cls, array):
        return cls(sp.csc_matrix(np.asarray(array, dtype=np.float64)))

    @property
    def shape(self):
        return self._csc.shape

    @property
    def m(self) -> int:
        return self._csc.shape[0]

    @property
    def N(self) -> int:
        return self._csc.shape[1]

    @property
    def nnz(self) -> int:
        return self._csc.nnz

    @property
    def csc(self) -> sp.csc_matrix:
        return self._csc

    @property
    def csr(self) -> sp.csr_matrix:
        if self._csr is None:
            self._csr = self._csc.tocsr()
        return self._csr

    def column(self, col: int):
        """Row indices and values of column col (views, do not modify)"""
        start, stop = self._csc.indptr[col], self._csc.indptr[col + 1]
        return self._csc.indices[start:stop], self._csc.data[start:stop]

    def column_rows(self, col: int) -> np.ndarray:
        """D_col: rows with a nonzero in column col"""
        return self.column(col)[0]

    def matvec(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.N,):
            raise DimensionError(f"vector has shape {x.shape}, expected ({self.N},)")
        return self._csc @ x

    def rmatvec(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=np.float64)
        if r.shape != (self.m,):
            raise DimensionError(f"vector has shape {r.shape}, expected ({self.m},)")
        return self._csc.T @ r

    def toarray(self) -> np.ndarray:
        return self._csc.toarray()

    def block_pattern(self, partition: Optional[BlockPartition] = None) -> sp.csr_matrix:
        """
        m x n 0/1 matrix with a one where row j has a nonzero in block i
        """
        partition = partition or unit_partition(self.N)
        self.check_partition(partition)
        pattern = self._csc.copy()
        pattern.data = np.ones_like(pattern.data)
        aggregate = sp.csr_matrix(
            (np.ones(self.N), (np.arange(self.N), partition.block_of())),
            shape=(self.N, partition.n))
        blocks = sp.csr_matrix(pattern @ aggregate)
        blocks.data = np.ones_like(blocks.data)
        return blocks

    def block_row_sq_norms(self, partition: BlockPartition) -> sp.csr_matrix:
        """m x n matrix of ||A_ji||^2 on the row-block pattern"""
        self.check_partition(partition)
        squares = self._csc.multiply(self._csc).tocsc()
        aggregate = sp.csr_matrix(
            (np.ones(self.N), (np.arange(self.N), partition.block_of())),
            shape=(self.N, partition.n))
        return sp.csr_matrix(squares @ aggregate)

    def check_partition(self, partition: BlockPartition):
        if partition.N != self.N:
            raise DimensionError(
                f"partition covers {partition.N} coordinates but A has {self.N} columns")


def compute_omega(matrix: SparseMatrix, partition: Optional[BlockPartition] = None) -> np.ndarray:
    """omega_j: number of blocks row j touches"""
    pattern = matrix.block_pattern(partition)
    return np.diff(pattern.indptr).astype(np.int64)
