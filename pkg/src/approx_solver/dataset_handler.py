"""
Dataset Handler Module
LibSVM reading/writing and synthetic instance generation
"""
import logging
import math
from enum import Enum
from typing import Optional, Tuple

import numpy as np
import scipy.sparse as sp

from .errors import ConfigurationError, DimensionError, LibSVMFormatError
from .sparse_data import SparseMatrix

logger = logging.getLogger(__name__)

MAX_FEATURE_INDEX = 2 ** 31 - 1


class Regime(str, Enum):
    UNIFORM = "uniform"
    INTERMEDIATE = "intermediate"
    EXTREME = "extreme"


def _parse_line(line: str, line_number: int):
    parts = line.split()
    try:
        label = float(parts[0])
    except ValueError:
        raise LibSVMFormatError(f"bad label {parts[0]!r}", line_number) from None
    cols = []
    vals = []
    seen = set()
    for token in parts[1:]:
        index, sep, value = token.partition(':')
        if not sep:
            raise LibSVMFormatError(f"expected index:value, got {token!r}", line_number)
        try:
            idx = int(index)
            val = float(value)
        except ValueError:
            raise LibSVMFormatError(f"bad entry {token!r}", line_number) from None
        if idx < 1:
            raise LibSVMFormatError(f"feature index {idx} is not 1-based", line_number)
        if idx > MAX_FEATURE_INDEX:
            raise LibSVMFormatError(f"feature index {idx} overflows", line_number)
        if idx in seen:
            raise LibSVMFormatError(f"duplicate feature index {idx}", line_number)
        seen.add(idx)
        cols.append(idx - 1)
        vals.append(val)
    return label, cols, vals


def read_libsvm(path, n_features: Optional[int] = None) -> Tuple[SparseMatrix, np.ndarray]:
    """
    Load a LibSVM text file

    Args:
        path: File with lines "label idx:val ..." and 1-based indices
        n_features: Column count; inferred from the largest index when None

    Returns:
        (SparseMatrix A with explicit zeros dropped, targets b)
    """
    labels = []
    rows = []
    cols = []
    vals = []
    with open(path, 'r') as f:
        for line_number, line in enumerate(f, start=1):
            stripped = line.split('#', 1)[0].strip()
            if not stripped:
                continue
            label, line_cols, line_vals = _parse_line(stripped, line_number)
            if n_features is not None and line_cols and max(line_cols) >= n_features:
                raise LibSVMFormatError(
                    f"feature index {max(line_cols) + 1} exceeds n_features={n_features}",
                    line_number)
            rows.extend([len(labels)] * len(line_cols))
            cols.extend(line_cols)
            vals.extend(line_vals)
            labels.append(label)

    if not labels:
        raise LibSVMFormatError(f"no data rows in {path}")
    m = len(labels)
    N = n_features if n_features is not None else (max(cols) + 1 if cols else 0)
    if N == 0:
        raise LibSVMFormatError(f"no features in {path}")
    matrix = SparseMatrix(sp.coo_matrix((vals, (rows, cols)), shape=(m, N)))
    logger.info("read %d rows, %d columns, %d nonzeros from %s", m, N, matrix.nnz, path)
    return matrix, np.asarray(labels, dtype=np.float64)


def write_libsvm(path, matrix, b) -> str:
    """Write A and b as LibSVM text (1-based indices, full float precision)"""
    matrix = matrix if isinstance(matrix, SparseMatrix) else SparseMatrix(matrix)
    b = np.asarray(b, dtype=np.float64)
    if len(b) != matrix.m:
        raise ConfigurationError(f"{len(b)} targets for {matrix.m} rows")
    csr = matrix.csr
    with open(path, 'w') as f:
        for j in range(matrix.m):
            start, stop = csr.indptr[j], csr.indptr[j + 1]
            entries = " ".join(f"{col + 1}:{val:.17g}"
                               for col, val in zip(csr.indices[start:stop], csr.data[start:stop]))
            f.write(f"{b[j]:.17g} {entries}".rstrip() + "\n")
    logger.info("wrote %d rows to %s", matrix.m, path)
    return str(path)


def write_point(path, x) -> str:
    """One coordinate per line, full float precision"""
    np.savetxt(path, np.asarray(x, dtype=np.float64), fmt="%.17g")
    return str(path)


def read_point(path, length: int) -> np.ndarray:
    """Read a point written by write_point and check its length"""
    try:
        x = np.loadtxt(path, dtype=np.float64, ndmin=1)
    except ValueError as exc:
        raise DimensionError(f"{path}: not a list of numbers ({exc})") from None
    if x.ndim != 1 or len(x) != length:
        raise DimensionError(f"{path} holds {x.size} values, expected {length}")
    return x


def regime_omegas(regime, m: int) -> np.ndarray:
    """Nonzeros per row for a sparsity regime"""
    regime = Regime(regime)
    if m < 1:
        raise ConfigurationError(f"m must be positive, got {m}")
    if regime is Regime.UNIFORM:
        return np.full(m, 30, dtype=np.int64)
    if regime is Regime.INTERMEDIATE:
        j = np.arange(1, m + 1, dtype=np.int64)
        return 1 + (30 * j * j) // (m * m)
    omegas = np.full(m, 3, dtype=np.int64)
    omegas[0] = 500
    return omegas


def gen_synthetic(regime, m: int, n: int, seed: int = 0) -> SparseMatrix:
    """
    Random m x n matrix whose row j has exactly omega_j nonzeros

    Columns are drawn uniformly without replacement per row and values are
    standard normal. Deterministic given the seed.
    """
    omegas = regime_omegas(regime, m)
    if n < 1:
        raise ConfigurationError(f"n must be positive, got {n}")
    if omegas.max() > n:
        raise ConfigurationError(
            f"regime {Regime(regime).value} needs {int(omegas.max())} nonzeros per row "
            f"but n={n}")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    indptr = np.concatenate(([0], np.cumsum(omegas)))
    indices = np.empty(indptr[-1], dtype=np.int64)
    for j, omega in enumerate(omegas):
        indices[indptr[j]:indptr[j + 1]] = np.sort(rng.choice(n, size=omega, replace=False))
    data = rng.standard_normal(indptr[-1])
    # an exact zero would be pruned and lower omega_j
    data[data == 0.0] = 1.0
    logger.debug("generated %s instance: m=%d n=%d nnz=%d", Regime(regime).value, m, n,
                 indptr[-1])
    return SparseMatrix(sp.csr_matrix((data, indices, indptr), shape=(m, n)))


def lasso_targets(matrix: SparseMatrix, seed: int = 0, density: float = 0.1,
                  noise: float = 0.01) -> Tuple[np.ndarray, np.ndarray]:
    """b = A x_true + noise with a sparse standard-normal x_true"""
    if not 0 < density <= 1:
        raise ConfigurationError(f"density must lie in (0, 1], got {density}")
    rng = np.random.default_rng(np.random.SeedSequence([seed, 1]))
    N = matrix.N
    support = rng.choice(N, size=max(1, math.ceil(density * N)), replace=False)
    x_true = np.zeros(N)
    x_true[support] = rng.standard_normal(len(support))
    b = matrix.matvec(x_true) + noise * rng.standard_normal(matrix.m)
    return b, x_true


def random_labels(m: int, seed: int = 0) -> np.ndarray:
    """Uniform +-1 labels"""
    rng = np.random.default_rng(np.random.SeedSequence([seed, 2]))
    return rng.choice(np.array([-1.0, 1.0]), size=m)
