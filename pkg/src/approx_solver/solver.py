"""
Solver Module
APPROX in its reference and efficient forms, the PCDM special case and the
driver loop that logs a run
"""
import logging
import time
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, List, Optional

import numpy as np
from tqdm import tqdm

from .config import Engine, SolverConfig, SolverMode
from .errors import ConfigurationError, RunLogError
from .eso import StepsizeVector, stepsizes, table_for_loss
from .losses import ResidualPair, block_gradient, residual_update
from .prox import prox_increment, prox_step
from .sampling import RngState, draw
from .schedule import ThetaSchedule

logger = logging.getLogger(__name__)


class ReferenceState:
    """x_k, y_k, z_k of the reference iteration (full-dimensional y)"""

    def __init__(self, x0, tau: int, n: int, keep_history: bool = True):
        x0 = np.array(x0, dtype=np.float64)
        self.x = x0.copy()
        self.z = x0.copy()
        self.y = x0.copy()
        self.k = 0
        self.schedule = ThetaSchedule(tau, n, keep_history=keep_history)


class EfficientState:
    """
    z~_k, u_k and the residuals r_u = A u, r_z = A z~.

    u starts at zero and stays bitwise zero in pcdm mode. theta_prev holds
    theta_{k-1}, needed to rebuild x_k.
    """

    def __init__(self, x0, matrix, tau: int, n: int, mode=SolverMode.APPROX,
                 keep_history: bool = True):
        self.z = np.array(x0, dtype=np.float64)
        self.u = np.zeros_like(self.z)
        self.rp = ResidualPair(np.zeros(matrix.m), matrix.matvec(self.z))
        self.k = 0
        self.mode = SolverMode(mode)
        self.schedule = ThetaSchedule(tau, n, keep_history=keep_history)
        self.theta_prev = None

    def recompute_residuals(self, matrix) -> float:
        """Rebuild rp from u and z~; returns the relative drift that was removed"""
        fresh = ResidualPair.from_vectors(matrix, self.u, self.z)
        scale = 1.0 + np.linalg.norm(fresh.r_z) + np.linalg.norm(fresh.r_u)
        drift = (np.linalg.norm(fresh.r_z - self.rp.r_z)
                 + np.linalg.norm(fresh.r_u - self.rp.r_u)) / scale
        self.rp = fresh
        return float(drift)


def _stiffness_scale(theta: float, tau: int, n: int, mode=SolverMode.APPROX) -> float:
    """n theta / tau; exactly 1 in pcdm mode, where theta stays tau / n"""
    if mode is SolverMode.PCDM:
        return 1.0
    return n * theta / tau


def step_reference(state: ReferenceState, blocks, problem, v, tau: int) -> ReferenceState:
    """
    One iteration with explicit y_k = (1 - theta) x_k + theta z_k

    Gradients are taken at y_k, blocks in ``blocks`` get a prox step with
    stiffness n theta v_i / tau and x_{k+1} = y_k + (n/tau) theta (z_{k+1} - z_k).
    """
    v = np.asarray(v, dtype=np.float64)
    partition = problem.partition
    n = partition.n
    theta = state.schedule.theta
    state.y = (1.0 - theta) * state.x + theta * state.z
    grad = problem.gradient(state.y)
    z_new = state.z.copy()
    for i in blocks:
        sl = partition.block_slice(i)
        a = _stiffness_scale(theta, tau, n) * v[i]
        z_new[sl] = prox_step(problem.regularizer, state.z[sl], grad[sl], a)
    state.x = state.y + (n / tau) * theta * (z_new - state.z)
    state.z = z_new
    state.schedule.advance()
    state.k += 1
    return state


def _block_increment(problem, state: EfficientState, v, i: int, theta: float, scale: float):
    partition = problem.partition
    sl = partition.block_slice(i)
    g = block_gradient(problem.loss, problem.matrix, partition, i, theta * theta, state.rp)
    a = scale * v[i]
    return prox_increment(problem.regularizer, state.z[sl], g, a)


def step_efficient(state: EfficientState, blocks, problem, v, tau: int,
                   mode=None, executor: Optional[ThreadPoolExecutor] = None) -> EfficientState:
    """
    One iteration without full-dimensional vectors

    Every block increment t_i is computed from the residuals at y_k before
    any of them is applied. Increments are then applied in ascending block
    order, so a thread pool gives bitwise the same result as a serial run.

    Args:
        state: Efficient iterate, updated in place
        blocks: Sampled block indices (sorted)
        problem: CompositeProblem
        v: Positive stepsizes, one per block
        tau: Nominal sampling size
        mode: approx or pcdm (defaults to state.mode)
        executor: Optional thread pool for the per-block prox steps

    Returns:
        The updated state
    """
    mode = state.mode if mode is None else SolverMode(mode)
    v = np.asarray(v, dtype=np.float64)
    partition = problem.partition
    n = partition.n
    theta = state.schedule.theta
    blocks = sorted(int(i) for i in blocks)
    scale = _stiffness_scale(theta, tau, n, mode)

    if executor is not None and len(blocks) > 1:
        increments = list(executor.map(
            lambda i: _block_increment(problem, state, v, i, theta, scale), blocks))
    else:
        increments = [_block_increment(problem, state, v, i, theta, scale) for i in blocks]

    if mode is SolverMode.APPROX:
        coeff_u = -(1.0 - (n / tau) * theta) / (theta * theta)
    else:
        coeff_u = 0.0
    for i, t in zip(blocks, increments):
        sl = partition.block_slice(i)
        state.z[sl] += t
        if coeff_u != 0.0:
            state.u[sl] += coeff_u * t
        residual_update(state.rp, problem.matrix, partition, i, t, coeff_u)

    state.theta_prev = theta
    if mode is SolverMode.APPROX:
        state.schedule.advance()
    state.k += 1
    return state


def recover_x(state: EfficientState) -> np.ndarray:
    """x_k = z~_0 at k = 0, theta_{k-1}^2 u_k + z~_k afterwards"""
    if state.k == 0 or state.theta_prev is None:
        return state.z.copy()
    return state.theta_prev ** 2 * state.u + state.z


def efficient_residual(state: EfficientState) -> np.ndarray:
    """A x_k from the maintained residuals"""
    if state.k == 0 or state.theta_prev is None:
        return state.rp.r_z.copy()
    return state.theta_prev ** 2 * state.rp.r_u + state.rp.r_z


@dataclass
class RunRecord:
    k: int
    elapsed_s: float
    objective: float
    dist: Optional[float] = None


@dataclass
class RunLog:
    """Logged objective values of one run plus its metadata"""
    records: List[RunRecord] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def append(self, k: int, elapsed_s: float, objective: float,
               dist: Optional[float] = None) -> RunRecord:
        if self.records and k <= self.records[-1].k:
            raise RunLogError(f"record k={k} does not follow k={self.records[-1].k}")
        record = RunRecord(int(k), float(elapsed_s), float(objective),
                           None if dist is None else float(dist))
        self.records.append(record)
        return record

    @property
    def has_dist(self) -> bool:
        return any(r.dist is not None for r in self.records)

    def ks(self) -> np.ndarray:
        return np.array([r.k for r in self.records], dtype=np.int64)

    def objectives(self) -> np.ndarray:
        return np.array([r.objective for r in self.records])

    def __len__(self):
        return len(self.records)


@dataclass
class SolveResult:
    x: np.ndarray
    log: RunLog
    state: object
    stepsizes: StepsizeVector
    iterations: int
    elapsed_s: float
    stopped_early: bool = False

    @property
    def objective(self) -> float:
        return self.log.records[-1].objective


def _window_stalled(history: deque, k: int, window: int, tol: float) -> bool:
    """
    Relative decrease of F since the newest evaluation at least window
    iterations back is below tol. history holds (k, F) pairs in k order.
    """
    while len(history) > 1 and history[1][0] <= k - window:
        history.popleft()
    start_k, start = history[0]
    if start_k > k - window:
        return False
    end = history[-1][1]
    return start - end <= tol * max(1.0, abs(start))


def run(problem, config: SolverConfig, x0=None, x_ref=None,
        callback: Optional[Callable[[int, np.ndarray], None]] = None,
        rng: Optional[RngState] = None) -> SolveResult:
    """
    Drive the configured engine until max_iters or the window tolerance

    x_k and F(x_k) are only formed on logging steps (and for the callback),
    so the window rule is checked at those steps.

    Args:
        problem: CompositeProblem to minimize
        config: SolverConfig, validated against problem before iterating
        x0: Starting point (projected onto dom psi), zero by default
        x_ref: Optional point; its distance to x_k is logged
        callback: Called as callback(k, x_k) after every iteration
        rng: Block-draw stream; RngState(config.seed) by default

    Returns:
        SolveResult with the final x, the RunLog and the final engine state
    """
    config.validate(problem)
    partition = problem.partition
    n = partition.n
    tau = config.tau
    x0 = problem.feasible_start(x0)
    x_ref = None if x_ref is None else np.asarray(x_ref, dtype=np.float64)

    table = table_for_loss(problem.matrix, partition, problem.loss)
    sv = stepsizes(config.stepsizes, table, problem.matrix, tau, loss=problem.loss)
    v = sv.positive()
    untouched = int(np.sum(sv.v <= 0))
    if untouched:
        logger.info("%d blocks have no nonzero in A; using v_i = 1 for them", untouched)

    rng = rng if rng is not None else RngState(config.seed)
    log = RunLog(metadata={
        "problem": problem.name,
        "seed": rng.seed,
        "tau": tau,
        "n": n,
        "N": partition.N,
        "mode": config.mode.value,
        "engine": config.engine.value,
        "sampling": config.sampling.value,
        "stepsizes": config.stepsizes.value,
        "loss": problem.loss.kind.value,
        "reg": problem.regularizer.kind.value,
    })
    if rng.stream is not None:
        log.metadata["stream"] = rng.stream

    keep_history = config.debug
    if config.engine is Engine.REFERENCE:
        state = ReferenceState(x0, tau, n, keep_history=keep_history)
    else:
        state = EfficientState(x0, problem.matrix, tau, n, mode=config.mode,
                               keep_history=keep_history)

    def current_x():
        # rounding in the x recombination may leave dom psi by an ulp
        raw = state.x if isinstance(state, ReferenceState) else recover_x(state)
        return problem.regularizer.project(raw)

    def current_objective(x):
        if isinstance(state, ReferenceState):
            return problem.objective(x)
        return problem.objective_from_residual(efficient_residual(state), x)

    def record(k, x, objective):
        dist = None if x_ref is None else float(np.linalg.norm(x - x_ref))
        log.append(k, time.perf_counter() - start, objective, dist)

    scheme = config.scheme
    executor = ThreadPoolExecutor(max_workers=config.threads) if config.threads > 1 else None
    history = deque()
    stopped_early = False
    k = 0

    start = time.perf_counter()
    x = current_x()
    objective = current_objective(x)
    record(0, x, objective)
    history.append((0, objective))
    logger.info("start: F(x0)=%.10g tau=%d n=%d mode=%s stepsizes=%s",
                objective, tau, n, config.mode.value, config.stepsizes.value)

    try:
        for k in tqdm(range(1, config.max_iters + 1), desc="Iterations", leave=False,
                      disable=not config.progress):
            blocks = draw(scheme, n, rng)
            theta = state.schedule.theta
            if isinstance(state, ReferenceState):
                step_reference(state, blocks, problem, v, tau)
            else:
                step_efficient(state, blocks, problem, v, tau, executor=executor)
                if config.recompute_period and k % config.recompute_period == 0:
                    drift = state.recompute_residuals(problem.matrix)
                    logger.debug("k=%d residual drift %.3e", k, drift)
            if config.debug and state.schedule.theta != theta:
                state.schedule.check(theta)
                logger.debug("k=%d theta=%.17g", k, state.schedule.theta)

            log_step = k % config.log_period == 0 or k == config.max_iters
            if callback is None and not log_step:
                continue
            # x and F are dense in N; skip them off the logging steps
            x = current_x()
            if callback is not None:
                callback(k, x)
            if not log_step:
                continue
            objective = current_objective(x)
            record(k, x, objective)
            if config.tol is not None:
                history.append((k, objective))
                if _window_stalled(history, k, config.window, config.tol):
                    stopped_early = True
                    logger.info("stopped at k=%d: F decreased by less than %g over %d "
                                "iterations", k, config.tol, config.window)
                    break
    finally:
        if executor is not None:
            executor.shutdown(wait=True)

    elapsed = time.perf_counter() - start
    x = current_x()
    logger.info("done: k=%d F=%.10g elapsed=%.3fs", state.k, log.records[-1].objective, elapsed)
    return SolveResult(x=x, log=log, state=state, stepsizes=sv, iterations=state.k,
                       elapsed_s=elapsed, stopped_early=stopped_early)



def run_replicates(problem, config: SolverConfig, count: int, x0=None,
                   x_ref=None) -> List[SolveResult]:
    """
    count independent runs, replicate i drawing blocks from stream i spawned
    from config.seed. Replicates share config.threads workers and each run
    is serial, so the results do not depend on the thread count.
    """
    if count < 1:
        raise ConfigurationError(f"replicate count must be positive, got {count}")
    config.validate(problem)
    streams = RngState(config.seed).spawn(count)
    single = replace(config, threads=1, progress=False)

    def one(stream):
        return run(problem, single, x0=x0, x_ref=x_ref, rng=stream)

    logger.info("running %d replicates on %d threads", count, min(config.threads, count))
    if config.threads > 1 and count > 1:
        with ThreadPoolExecutor(max_workers=min(config.threads, count)) as pool:
            return list(pool.map(one, streams))
    return [one(stream) for stream in streams]
