"""
APPROX Solver Module
Block partitions, samplings, ESO stepsizes and the accelerated coordinate solver.
"""

from .blocks import BlockPartition, build_partition, unit_partition, weighted_inner, weighted_norm_sq
from .config import Engine, SolverConfig, SolverMode
from .dataset_handler import gen_synthetic, lasso_targets, read_libsvm, write_libsvm
from .errors import ApproxError
from .eso import StepsizeKind, eso_slack, lipschitz_table, separability_averages, stepsizes
from .export_formats import read_runlog, write_runlog, write_summary_json
from .losses import LossKind, ScalarLoss
from .problem import CompositeProblem, dual_svm, lasso, logistic, smoothed_l1
from .prox import RegularizerKind, SeparableRegularizer, prox_step
from .sampling import RngState, SamplingKind, SamplingScheme, draw
from .schedule import complexity_bound, gamma_coeffs, iteration_complexity, theta_next
from .solver import (RunLog, SolveResult, recover_x, run, run_replicates, step_efficient,
                     step_reference)
from .sparse_data import SparseMatrix, compute_omega

__all__ = [
    'ApproxError',
    'BlockPartition', 'build_partition', 'unit_partition', 'weighted_norm_sq', 'weighted_inner',
    'SamplingKind', 'SamplingScheme', 'RngState', 'draw',
    'SparseMatrix', 'compute_omega',
    'LossKind', 'ScalarLoss',
    'RegularizerKind', 'SeparableRegularizer', 'prox_step',
    'StepsizeKind', 'lipschitz_table', 'stepsizes', 'separability_averages', 'eso_slack',
    'CompositeProblem', 'lasso', 'logistic', 'smoothed_l1', 'dual_svm',
    'theta_next', 'gamma_coeffs', 'complexity_bound', 'iteration_complexity',
    'SolverConfig', 'SolverMode', 'Engine',
    'RunLog', 'SolveResult', 'run', 'run_replicates', 'step_reference', 'step_efficient',
    'recover_x',
    'read_libsvm', 'write_libsvm', 'gen_synthetic', 'lasso_targets',
    'write_runlog', 'read_runlog', 'write_summary_json',
]
