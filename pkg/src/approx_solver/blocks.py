"""
Blocks Module
Block partition of the coordinate space and block-weighted norms
"""
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionError, PartitionError


@dataclass(frozen=True)
class BlockPartition:
    """
    Partition of N coordinates into n contiguous blocks.

    Block i covers coordinates offsets[i]:offsets[i + 1]. Instances are
    immutable and can be shared between workers.
    """
    sizes: tuple
    offsets: np.ndarray = field(repr=False, compare=False)

    @property
    def n(self) -> int:
        return len(self.sizes)

    @property
    def N(self) -> int:
        return int(self.offsets[-1])

    @property
    def is_unit(self) -> bool:
        """True when every block holds exactly one coordinate"""
        return self.N == self.n

    def block_slice(self, i: int) -> slice:
        return slice(int(self.offsets[i]), int(self.offsets[i + 1]))

    def block_of(self) -> np.ndarray:
        """Block index of every coordinate (length N)"""
        return np.repeat(np.arange(self.n), self.sizes)

    def lift(self, i: int, block_value: np.ndarray) -> np.ndarray:
        """U_i t: place a block value into an otherwise zero N-vector"""
        out = np.zeros(self.N)
        out[self.block_slice(i)] = block_value
        return out

    def restrict(self, h: np.ndarray, blocks: Sequence[int]) -> np.ndarray:
        """h_[S]: zero out every block not listed in ``blocks``"""
        h = np.asarray(h, dtype=np.float64)
        out = np.zeros_like(h)
        for i in blocks:
            sl = self.block_slice(i)
            out[sl] = h[sl]
        return out

    def block_sq_norms(self, x: np.ndarray) -> np.ndarray:
        """||x^(i)||^2 for every block"""
        x = self._check_vector(x, "x")
        return np.add.reduceat(x * x, self.offsets[:-1])

    def _check_vector(self, x, name):
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.N,):
            raise DimensionError(f"{name} has shape {x.shape}, expected ({self.N},)")
        return x

    def _check_weights(self, v):
        v = np.asarray(v, dtype=np.float64)
        if v.shape != (self.n,):
            raise DimensionError(f"weights have shape {v.shape}, expected ({self.n},)")
        return v


def build_partition(sizes: Sequence[int]) -> BlockPartition:
    """
    Build a partition from a list of block sizes

    Args:
        sizes: Positive block sizes N_1, ..., N_n

    Returns:
        BlockPartition with offsets[0] = 0 and offsets[n] = N
    """
    sizes = list(sizes)
    if not sizes:
        raise PartitionError("block size list is empty")
    for i, size in enumerate(sizes):
        if int(size) != size or size < 1:
            raise PartitionError(f"block {i} has size {size}; sizes must be positive integers")
    offsets = np.concatenate(([0], np.cumsum(sizes))).astype(np.int64)
    return BlockPartition(sizes=tuple(int(s) for s in sizes), offsets=offsets)


def unit_partition(N: int) -> BlockPartition:
    """N blocks of size one"""
    return build_partition([1] * N)


def weighted_norm_sq(x, v, partition: BlockPartition) -> float:
    """Sum_i v_i ||x^(i)||^2"""
    v = partition._check_weights(v)
    return float(np.dot(v, partition.block_sq_norms(x)))


def weighted_inner(a, h, v, partition: BlockPartition) -> float:
    """Sum_i v_i <a^(i), h^(i)>"""
    a = partition._check_vector(a, "a")
    h = partition._check_vector(h, "h")
    v = partition._check_weights(v)
    return float(np.dot(v, np.add.reduceat(a * h, partition.offsets[:-1])))


def normalized_weights(v) -> np.ndarray:
    """v~ = n v / ||v||_1, so the entries sum to n"""
    v = np.asarray(v, dtype=np.float64)
    total = np.abs(v).sum()
    if total <= 0:
        raise DimensionError("cannot normalize an all-zero weight vector")
    return len(v) * v / total
