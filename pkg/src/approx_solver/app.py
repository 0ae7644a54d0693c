"""
Command Line Application
solve, gen, compare-stepsizes and plot subcommands
"""
import argparse
import logging
import sys

import numpy as np

from .blocks import build_partition
from .config import Engine, SolverConfig, SolverMode
from .dataset_handler import (Regime, gen_synthetic, lasso_targets, random_labels,
                              read_libsvm, read_point, write_libsvm, write_point)
from .errors import ApproxError, ConfigurationError
from .eso import StepsizeKind, compare_stepsizes, table_for_loss, weighted_distance_table
from .export_formats import write_runlog, write_stepsize_table, write_summary_json
from .losses import LossKind, ScalarLoss
from .plotting import plot_runlogs
from .problem import (CompositeProblem, dual_svm, dual_svm_objective_dense, fold_labels,
                      svm_duality_gap)
from .prox import RegularizerKind, SeparableRegularizer
from .sampling import SamplingKind
from .solver import run, run_replicates
from .sparse_data import SparseMatrix

logger = logging.getLogger(__name__)

RULE = "=" * 60


def _row(name, value):
    print(f"{name:25s}: {value}")


def _choices(enum_cls):
    return [member.value for member in enum_cls]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="approx-solver",
        description="Accelerated parallel proximal coordinate descent")
    parser.add_argument("--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="minimize f + psi on a LibSVM instance")
    solve.add_argument("--input", required=True, help="LibSVM file")
    solve.add_argument("--problem", choices=["generic", "dual-svm"], default="generic")
    solve.add_argument("--loss", choices=_choices(LossKind), default=LossKind.SQUARE.value)
    solve.add_argument("--mu", type=float, default=None, help="smoothing for smoothed-abs")
    solve.add_argument("--reg", choices=_choices(RegularizerKind),
                       default=RegularizerKind.ZERO.value)
    solve.add_argument("--lambda", dest="lam", type=float, default=None,
                       help="l1 weight, or the SVM regularization (default 1/N)")
    solve.add_argument("--box-lo", type=float, default=0.0)
    solve.add_argument("--box-hi", type=float, default=1.0)
    solve.add_argument("--box-c", type=float, default=0.0, help="linear term of box-linear")
    solve.add_argument("--block-size", type=int, default=1)
    solve.add_argument("--tau", type=int, default=1)
    solve.add_argument("--mode", choices=_choices(SolverMode), default=SolverMode.APPROX.value)
    solve.add_argument("--engine", choices=_choices(Engine), default=Engine.EFFICIENT.value)
    solve.add_argument("--sampling", choices=_choices(SamplingKind),
                       default=SamplingKind.TAU_NICE.value)
    solve.add_argument("--stepsizes", choices=_choices(StepsizeKind),
                       default=StepsizeKind.FR.value)
    solve.add_argument("--max-iters", type=int, default=1000)
    solve.add_argument("--seed", type=int, default=0)
    solve.add_argument("--repeats", type=int, default=1,
                       help="independent replicates on spawned streams (threads run them)")
    solve.add_argument("--log", default=None, help="RunLog CSV output")
    solve.add_argument("--log-period", type=int, default=1)
    solve.add_argument("--threads", type=int, default=1)
    solve.add_argument("--tol", type=float, default=None)
    solve.add_argument("--recompute-period", type=int, default=SolverConfig.recompute_period)
    solve.add_argument("--summary", default=None, help="summary JSON output")
    solve.add_argument("--save-x", default=None, help="write the final x, one value per line")
    solve.add_argument("--debug", action="store_true", help="assert theta invariants")
    solve.add_argument("--progress", action="store_true", help="show a progress bar")
    solve.set_defaults(handler=cmd_solve)

    gen = sub.add_parser("gen", help="write a synthetic LibSVM instance")
    gen.add_argument("--regime", choices=_choices(Regime), required=True)
    gen.add_argument("--m", type=int, required=True)
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True)
    gen.add_argument("--labels", action="store_true",
                     help="write +-1 labels instead of LASSO targets")
    gen.set_defaults(handler=cmd_gen)

    compare = sub.add_parser("compare-stepsizes", help="l1 norms of fr / rt / nc stepsizes")
    compare.add_argument("--input", required=True)
    compare.add_argument("--tau", required=True, help="comma-separated tau values")
    compare.add_argument("--loss", choices=_choices(LossKind), default=LossKind.SQUARE.value)
    compare.add_argument("--mu", type=float, default=None)
    compare.add_argument("--out", default=None, help="CSV output (stdout when omitted)")
    compare.add_argument("--xstar", default=None,
                         help="point file; adds x* - x0 distances in the fr and rt norms")
    compare.add_argument("--x0", default=None, help="point file for x0 (zero by default)")
    compare.add_argument("--progress", action="store_true")
    compare.set_defaults(handler=cmd_compare_stepsizes)

    plot = sub.add_parser("plot", help="plot RunLog CSV files")
    plot.add_argument("--logs", nargs="+", required=True)
    plot.add_argument("--out", required=True)
    plot.add_argument("--fstar", type=float, default=None)
    plot.set_defaults(handler=cmd_plot)
    return parser


def uniform_blocks(N: int, block_size: int):
    """Contiguous blocks of block_size, the last one possibly shorter"""
    if block_size < 1:
        raise ConfigurationError(f"block size must be positive, got {block_size}")
    sizes = [block_size] * (N // block_size)
    if N % block_size:
        sizes.append(N % block_size)
    return build_partition(sizes)


def build_problem(args, matrix: SparseMatrix, b) -> CompositeProblem:
    """Assemble the objective named by the solve flags"""
    if args.problem == "dual-svm":
        # LibSVM rows are examples; the dual has one coordinate per example
        return dual_svm(SparseMatrix(matrix.csc.T), b, lam=args.lam)

    loss_kind = LossKind(args.loss)
    if loss_kind is LossKind.LOGISTIC:
        matrix = SparseMatrix(fold_labels(matrix, b))
        loss = ScalarLoss(loss_kind, np.zeros(matrix.m))
    else:
        loss = ScalarLoss(loss_kind, b, mu=args.mu)

    reg_kind = RegularizerKind(args.reg)
    if reg_kind is RegularizerKind.L1:
        if args.lam is None:
            raise ConfigurationError("--reg l1 needs --lambda")
        reg = SeparableRegularizer.l1(args.lam)
    elif reg_kind is RegularizerKind.BOX_LINEAR:
        reg = SeparableRegularizer.box_linear(args.box_lo, args.box_hi, args.box_c)
    else:
        reg = SeparableRegularizer.zero()
    return CompositeProblem(matrix, loss, reg, uniform_blocks(matrix.N, args.block_size))


def config_from_args(args) -> SolverConfig:
    return SolverConfig(
        tau=args.tau,
        mode=args.mode,
        engine=args.engine,
        sampling=args.sampling,
        stepsizes=args.stepsizes,
        max_iters=args.max_iters,
        seed=args.seed,
        log_period=args.log_period,
        tol=args.tol,
        recompute_period=args.recompute_period,
        threads=args.threads,
        debug=args.debug,
        progress=args.progress,
    )


def cmd_solve(args) -> int:
    matrix, b = read_libsvm(args.input)
    problem = build_problem(args, matrix, b)
    config = config_from_args(args)

    print(RULE)
    print("APPROX SOLVE")
    print(RULE)
    _row("Input", args.input)
    _row("Problem", problem.name)
    _row("Rows x columns", f"{problem.matrix.m} x {problem.N}")
    _row("Blocks", problem.n)
    _row("Loss", problem.loss.kind.value)
    _row("Regularizer", problem.regularizer.kind.value)
    _row("Mode", config.mode.value)
    _row("Engine", config.engine.value)
    _row("Sampling", f"{config.sampling.value} (tau={config.tau})")
    _row("Stepsizes", config.stepsizes.value)
    _row("Max iterations", config.max_iters)
    _row("Seed", config.seed)
    print(RULE)

    if args.repeats == 1:
        replicates = [run(problem, config)]
    else:
        replicates = run_replicates(problem, config, args.repeats)
    result = replicates[0]
    finals = [float(r.objective) for r in replicates]

    print(RULE)
    print("RUN SUMMARY")
    print(RULE)
    _row("Iterations", result.iterations)
    _row("Final objective", f"{result.objective:.12g}")
    _row("||v||_1", f"{result.stepsizes.l1:.6g}")
    _row("Elapsed", f"{result.elapsed_s:.3f} s")
    if result.stopped_early:
        _row("Stopped by", f"tol={config.tol} over {config.window} iterations")
    if len(replicates) > 1:
        _row("Replicates", len(replicates))
        _row("Mean final objective", f"{np.mean(finals):.12g} (std {np.std(finals):.3g})")

    summary = {
        "input": args.input,
        "problem": problem.name,
        "objective": float(result.objective),
        "iterations": int(result.iterations),
        "elapsed_s": float(result.elapsed_s),
        "stopped_early": bool(result.stopped_early),
        "stepsizes_l1": float(result.stepsizes.l1),
        "config": config.as_dict(),
    }
    if len(replicates) > 1:
        summary["replicate_objectives"] = finals
        summary["mean_objective"] = float(np.mean(finals))
    if args.problem == "dual-svm":
        features = SparseMatrix(matrix.csc.T)
        lam = args.lam if args.lam is not None else 1.0 / features.N
        gap = svm_duality_gap(features, b, lam, result.x)
        dense = dual_svm_objective_dense(features, b, lam, result.x)
        logger.info("dual SVM objective %.12g (direct), duality gap %.6g", dense, gap)
        _row("Duality gap", f"{gap:.6g}")
        summary["duality_gap"] = float(gap)
    print(RULE)

    if args.log:
        write_runlog(result.log, args.log)
        print(f"  ✓ Run log saved to: {args.log}")
    if args.summary:
        write_summary_json(args.summary, summary)
        print(f"  ✓ Summary saved to: {args.summary}")
    if args.save_x:
        write_point(args.save_x, result.x)
        print(f"  ✓ Final x saved to: {args.save_x}")
    print("\n✓ Solve complete!")
    return 0


def cmd_gen(args) -> int:
    matrix = gen_synthetic(args.regime, args.m, args.n, seed=args.seed)
    if args.labels:
        b = random_labels(matrix.m, seed=args.seed)
    else:
        b, _ = lasso_targets(matrix, seed=args.seed)
    write_libsvm(args.out, matrix, b)

    print(RULE)
    print("SYNTHETIC INSTANCE")
    print(RULE)
    _row("Regime", args.regime)
    _row("Rows x columns", f"{matrix.m} x {matrix.N}")
    _row("Nonzeros", matrix.nnz)
    _row("Targets", "+-1 labels" if args.labels else "A x_true + noise")
    print(RULE)
    print(f"\n✓ Instance written to: {args.out}")
    return 0


def _parse_taus(text: str):
    try:
        taus = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise ConfigurationError(f"--tau expects comma-separated integers, got {text!r}") from None
    if not taus:
        raise ConfigurationError("--tau is empty")
    return taus


def cmd_compare_stepsizes(args) -> int:
    matrix, b = read_libsvm(args.input)
    loss_kind = LossKind(args.loss)
    if loss_kind is LossKind.LOGISTIC:
        matrix = SparseMatrix(fold_labels(matrix, b))
        b = np.zeros(matrix.m)
    loss = ScalarLoss(loss_kind, b, mu=args.mu)
    partition = uniform_blocks(matrix.N, 1)
    taus = _parse_taus(args.tau)
    for tau in taus:
        if not 1 <= tau <= partition.n:
            raise ConfigurationError(f"tau must lie in [1, {partition.n}], got {tau}")
    table = table_for_loss(matrix, partition, loss)
    records = compare_stepsizes(matrix, table, taus, loss=loss, progress=args.progress)
    if args.xstar:
        xstar = read_point(args.xstar, matrix.N)
        x0 = read_point(args.x0, matrix.N) if args.x0 else np.zeros(matrix.N)
        distances = weighted_distance_table(xstar, x0, matrix, table, taus)
        for record, row in zip(records, distances):
            record.update(dist_fr=row["dist_fr"], dist_rt=row["dist_rt"])
    if args.out:
        write_stepsize_table(records, args.out)
        print(f"✓ Stepsize table saved to: {args.out}")
    else:
        write_stepsize_table(records, sys.stdout)
    return 0


def cmd_plot(args) -> int:
    plot_runlogs(args.logs, args.out, fstar=args.fstar)
    print(f"✓ Plot saved to: {args.out}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.handler(args)
    except ApproxError as exc:
        print(f"Error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"Error: {exc}", file=sys.stderr)
        return 1
