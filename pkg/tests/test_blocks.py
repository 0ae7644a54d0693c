import numpy as np
import pytest

from approx_solver.blocks import (build_partition, normalized_weights, unit_partition,
                                  weighted_inner, weighted_norm_sq)
from approx_solver.errors import DimensionError, PartitionError


def test_unit_partition_offsets():
    p = build_partition([1, 1, 1])
    assert p.n == 3
    assert p.N == 3
    assert list(p.offsets) == [0, 1, 2, 3]
    assert p.is_unit


def test_partition_offsets_are_cumulative():
    p = build_partition([2, 3])
    assert (p.n, p.N) == (2, 5)
    assert list(p.offsets) == [0, 2, 5]
    assert not p.is_unit
    assert p.block_slice(1) == slice(2, 5)
    assert list(p.block_of()) == [0, 0, 1, 1, 1]


@pytest.mark.parametrize("sizes", [[], [0], [2, -1], [1.5]])
def test_invalid_sizes_raise(sizes):
    with pytest.raises(PartitionError):
        build_partition(sizes)


def test_weighted_norm_hand_example():
    p = build_partition([2, 1])
    assert weighted_norm_sq([1.0, 1.0, 2.0], [2.0, 3.0], p) == pytest.approx(16.0)


def test_weighted_norm_reduces_to_euclidean():
    x = np.random.default_rng(0).standard_normal(7)
    p = unit_partition(7)
    assert weighted_norm_sq(x, np.ones(7), p) == pytest.approx(float(x @ x), rel=1e-12)
    assert weighted_norm_sq(np.zeros(7), np.ones(7), p) == 0.0


def test_weighted_inner_properties():
    rng = np.random.default_rng(1)
    p = build_partition([3, 1, 2, 4])
    v = rng.uniform(0.5, 2.0, size=4)
    a = rng.standard_normal(10)
    h = rng.standard_normal(10)
    assert weighted_inner(a, np.zeros(10), v, p) == 0.0
    assert weighted_inner(a, a, v, p) == pytest.approx(weighted_norm_sq(a, v, p), rel=1e-12)
    unit = unit_partition(10)
    assert weighted_inner(a, h, np.ones(10), unit) == pytest.approx(float(a @ h), rel=1e-12)
    assert weighted_norm_sq(2.5 * a, v, p) == pytest.approx(6.25 * weighted_norm_sq(a, v, p),
                                                            rel=1e-12)


def test_length_mismatch_raises():
    p = build_partition([2, 1])
    with pytest.raises(DimensionError):
        weighted_norm_sq([1.0, 2.0], [1.0, 1.0], p)
    with pytest.raises(DimensionError):
        weighted_norm_sq([1.0, 2.0, 3.0], [1.0], p)
    with pytest.raises(DimensionError):
        weighted_inner([1.0, 2.0, 3.0], [1.0], [1.0, 1.0], p)


def test_normalized_weights_sum_to_n():
    v = np.random.default_rng(2).uniform(0.1, 10.0, size=13)
    assert normalized_weights(v).sum() == pytest.approx(13.0, rel=1e-12)


def test_lift_and_restrict():
    p = build_partition([2, 1, 2])
    assert list(p.lift(1, np.array([7.0]))) == [0, 0, 7, 0, 0]
    h = np.arange(1.0, 6.0)
    assert list(p.restrict(h, [0, 2])) == [1, 2, 0, 4, 5]
    assert list(p.block_sq_norms(h)) == [5.0, 9.0, 41.0]
