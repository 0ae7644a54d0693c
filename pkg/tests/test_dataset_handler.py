import numpy as np
import pytest

from approx_solver.dataset_handler import (Regime, gen_synthetic, lasso_targets, random_labels,
                                           read_libsvm, read_point, regime_omegas, write_libsvm,
                                           write_point)
from approx_solver.errors import ConfigurationError, DimensionError, LibSVMFormatError
from approx_solver.sparse_data import compute_omega

from conftest import random_sparse


def write_text(tmp_path, text, name="data.svm"):
    path = tmp_path / name
    path.write_text(text)
    return path


def test_reads_a_small_file(tmp_path):
    path = write_text(tmp_path, "1 1:2.0 3:1.0\n-1 2:4.0\n")
    A, b = read_libsvm(path)
    assert A.shape == (2, 3)
    assert A.nnz == 3
    np.testing.assert_array_equal(b, [1.0, -1.0])
    np.testing.assert_array_equal(A.toarray(), [[2.0, 0.0, 1.0], [0.0, 4.0, 0.0]])


def test_comments_blank_lines_and_explicit_zeros(tmp_path):
    path = write_text(tmp_path, "# header\n\n0.5 1:1.0 2:0.0  # trailing\n-2 2:3\n")
    A, b = read_libsvm(path)
    np.testing.assert_array_equal(b, [0.5, -2.0])
    assert A.nnz == 2


def test_row_without_features_is_kept(tmp_path):
    A, b = read_libsvm(write_text(tmp_path, "1 2:1.0\n-1\n"))
    assert A.shape == (2, 2)
    assert len(b) == 2


def test_n_features_pads_columns(tmp_path):
    A, _ = read_libsvm(write_text(tmp_path, "1 1:1.0\n"), n_features=5)
    assert A.N == 5


def test_index_beyond_n_features_raises(tmp_path):
    with pytest.raises(LibSVMFormatError, match="n_features"):
        read_libsvm(write_text(tmp_path, "1 1:1.0\n1 7:1.0\n"), n_features=5)


@pytest.mark.parametrize("text", ["", "# only a comment\n\n"])
def test_empty_input_raises(tmp_path, text):
    with pytest.raises(LibSVMFormatError, match="no data rows"):
        read_libsvm(write_text(tmp_path, text))


def test_file_without_features_raises(tmp_path):
    with pytest.raises(LibSVMFormatError, match="no features"):
        read_libsvm(write_text(tmp_path, "1\n-1\n"))


def test_duplicate_index_reports_the_line(tmp_path):
    with pytest.raises(LibSVMFormatError) as info:
        read_libsvm(write_text(tmp_path, "1 1:1.0\n1 2:1.0 2:3.0\n"))
    assert info.value.line_number == 2
    assert "line 2" in str(info.value)


@pytest.mark.parametrize("line", [
    "x 1:1.0",
    "1 1=1.0",
    "1 a:1.0",
    "1 0:1.0",
    "1 2147483648:1.0",
])
def test_malformed_lines_raise(tmp_path, line):
    with pytest.raises(LibSVMFormatError):
        read_libsvm(write_text(tmp_path, line + "\n"))


def test_write_then_read_is_exact(tmp_path):
    A = random_sparse(25, 10, 0.3, seed=8)
    b = np.random.default_rng(8).standard_normal(25)
    path = tmp_path / "round.svm"
    write_libsvm(path, A, b)
    A2, b2 = read_libsvm(path, n_features=10)
    np.testing.assert_array_equal(b2, b)
    np.testing.assert_array_equal(A2.toarray(), A.toarray())


def test_write_checks_target_count(tmp_path):
    with pytest.raises(ConfigurationError):
        write_libsvm(tmp_path / "bad.svm", random_sparse(5, 3, 0.5, seed=0), np.ones(4))


def test_point_files(tmp_path):
    x = np.array([0.1, -2.5e-300, 3.0, 1.0 / 3.0])
    path = write_point(tmp_path / "x.txt", x)
    np.testing.assert_array_equal(read_point(path, 4), x)
    with pytest.raises(DimensionError):
        read_point(path, 5)
    bad = write_text(tmp_path, "1.0\nabc\n", name="bad.txt")
    with pytest.raises(DimensionError):
        read_point(bad, 2)
    wide = write_text(tmp_path, "1.0 2.0\n3.0 4.0\n", name="wide.txt")
    with pytest.raises(DimensionError):
        read_point(wide, 4)


def test_regime_omegas():
    np.testing.assert_array_equal(regime_omegas("uniform", 7), np.full(7, 30))
    inter = regime_omegas(Regime.INTERMEDIATE, 1000)
    assert inter[0] == 1
    assert inter[-1] == 31
    assert np.all(np.diff(inter) >= 0)
    extreme = regime_omegas("extreme", 10)
    assert extreme[0] == 500
    assert np.all(extreme[1:] == 3)


@pytest.mark.parametrize("regime", list(Regime))
def test_generated_rows_have_the_regime_pattern(regime):
    m, n = 120, 600
    A = gen_synthetic(regime, m, n, seed=1)
    assert A.shape == (m, n)
    np.testing.assert_array_equal(compute_omega(A), regime_omegas(regime, m))


def test_generation_is_deterministic():
    a = gen_synthetic("intermediate", 50, 40, seed=12)
    b = gen_synthetic("intermediate", 50, 40, seed=12)
    c = gen_synthetic("intermediate", 50, 40, seed=13)
    assert (a.csc != b.csc).nnz == 0
    assert (a.csc != c.csc).nnz > 0


def test_regime_wider_than_n_raises():
    with pytest.raises(ConfigurationError, match="500"):
        gen_synthetic("extreme", 10, 100)
    with pytest.raises(ConfigurationError):
        gen_synthetic("uniform", 10, 0)


def test_lasso_targets_are_sparse_and_consistent():
    A = gen_synthetic("uniform", 80, 60, seed=2)
    b, x_true = lasso_targets(A, seed=2, density=0.25, noise=0.0)
    assert np.count_nonzero(x_true) == 15
    np.testing.assert_allclose(b, A.matvec(x_true))
    with pytest.raises(ConfigurationError):
        lasso_targets(A, density=0.0)


def test_random_labels_are_signs():
    labels = random_labels(200, seed=4)
    assert set(np.unique(labels)) == {-1.0, 1.0}
    np.testing.assert_array_equal(labels, random_labels(200, seed=4))
