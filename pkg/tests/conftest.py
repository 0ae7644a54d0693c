"""Shared fixtures: small random instances and the standard problems"""
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

import numpy as np  # noqa: E402
import pytest  # noqa: E402
import scipy.sparse as sp  # noqa: E402

from approx_solver.dataset_handler import gen_synthetic, lasso_targets  # noqa: E402
from approx_solver.problem import dual_svm, lasso  # noqa: E402
from approx_solver.sparse_data import SparseMatrix  # noqa: E402


def random_sparse(m, N, density, seed):
    """m x N sparse matrix with standard normal nonzeros"""
    rng = np.random.default_rng(seed)
    A = sp.random(m, N, density=density, format="csc", random_state=rng,
                  data_rvs=rng.standard_normal)
    return SparseMatrix(A)


def random_labels(count, seed):
    rng = np.random.default_rng(seed)
    return rng.choice(np.array([-1.0, 1.0]), size=count)


@pytest.fixture
def small_matrix():
    return random_sparse(30, 12, 0.3, seed=0)


@pytest.fixture
def lasso_problem():
    A = random_sparse(60, 40, 0.15, seed=1)
    b = np.random.default_rng(2).standard_normal(60)
    return lasso(A, b, lam=0.1)


@pytest.fixture
def synthetic_lasso():
    """LASSO on a uniformly sparse synthetic matrix, m=300, n=200"""
    A = gen_synthetic("uniform", 300, 200, seed=3)
    b, _ = lasso_targets(A, seed=3)
    return lasso(A, b, lam=0.05)


@pytest.fixture
def svm_data():
    """40 features by 30 examples, +-1 labels"""
    A = random_sparse(40, 30, 0.2, seed=4)
    labels = random_labels(30, seed=5)
    return A, labels


@pytest.fixture
def svm_problem(svm_data):
    A, labels = svm_data
    return dual_svm(A, labels)


def lasso_oracle(problem, iters=20000):
    """
    Accelerated proximal gradient with function-value restarts on the dense
    matrix; returns (x*, F*) to near machine precision on desk-scale LASSO.
    """
    from approx_solver.prox import soft_threshold

    A = problem.matrix.toarray()
    b = problem.loss.b
    lam = problem.regularizer.lam
    L = np.linalg.norm(A, 2) ** 2
    x = np.zeros(A.shape[1])
    y = x.copy()
    t = 1.0
    f_prev = problem.objective(x)
    for _ in range(iters):
        g = A.T @ (A @ y - b)
        x_new = soft_threshold(y - g / L, lam / L)
        f = problem.objective(x_new)
        if f > f_prev:
            y = x_new
            t = 1.0
        else:
            t_new = (1.0 + np.sqrt(1.0 + 4.0 * t * t)) / 2.0
            y = x_new + ((t - 1.0) / t_new) * (x_new - x)
            t = t_new
        x, f_prev = x_new, f
    return x, problem.objective(x)
