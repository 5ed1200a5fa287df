"""
Benchmark and sweep command handlers for the TRK toolkit.
Run configured experiments and penalty sensitivity sweeps.
"""

import argparse
import logging
from pathlib import Path

from utils import file_manager
from utils.errors import TRKError
from utils.runner import ExperimentConfig, emit_report, run_experiment, sensitivity_sweep
from utils.tuner import GscvConfig

from .fit import fit_options_from_args, parse_floats

logger = logging.getLogger(__name__)


def bench_command(args: argparse.Namespace) -> int:
    """
    Handle `bench` - Run the experiment described by a TOML config.

    Args:
        args: Parsed arguments (--config, --out)

    Returns:
        int: Exit status
    """
    try:
        cfg = ExperimentConfig.from_toml(Path(args.config))
        report = run_experiment(cfg)
        out_dir = Path(args.out) if args.out else file_manager.output_dir / file_manager.sanitize_filename(cfg.benchmark)
        paths = emit_report(report, out_dir)

        failed = sum(1 for record in report.records if record.status != "ok")
        print(f"✅ {cfg.benchmark}: {len(report.records)} run(s), {failed} failed")
        aggregate = report.aggregate()
        for _, row in aggregate[aggregate["metric"] == "rmse"].iterrows():
            marker = " ⭐" if row["is_best"] else ""
            print(f"   {row['model']}: RMSE {row['mean']:.6g} ± {row['std']:.3g}{marker}")
        print(f"📁 Reports: {', '.join(str(p) for p in paths)}")
        return 0

    except (TRKError, OSError) as e:
        logger.error(f"Benchmark failed: {e}")
        return 1


def sweep_command(args: argparse.Namespace) -> int:
    """Handle `sweep` - Penalty sensitivity table on one fixed design."""
    try:
        coefficients = parse_floats(args.coefficients) if args.coefficients else GscvConfig().coefficients().tolist()
        alphas = parse_floats(args.alphas) if args.alphas else None
        table = sensitivity_sweep(
            args.benchmark,
            args.penalty,
            coefficients,
            alphas=alphas,
            n_train=args.n_train,
            n_test=args.n_test,
            seed=args.seed,
            basis_kind=args.basis,
            opts=fit_options_from_args(args),
        )
        out = Path(args.out) if args.out else file_manager.ensure_dir() / f"sweep_{args.benchmark}_{args.penalty}.csv"
        file_manager.write_table(out, table)
        failed = int((table["status"] != "ok").sum())
        print(f"✅ Sweep finished: {len(table)} cell(s), {failed} failed")
        print(f"📊 Table written to {out}")
        return 0

    except (TRKError, OSError) as e:
        logger.error(f"Sweep failed: {e}")
        return 1
