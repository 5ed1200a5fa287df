"""
Tune command handler for the TRK toolkit.
Runs GSCV on a dataset and writes the scored candidate grid.
"""

import argparse
import logging
from pathlib import Path

import config
from utils import file_manager
from utils.errors import TRKError
from utils.kriging import RegressionBasis
from utils.optimizer import fit_trk
from utils.tuner import GscvConfig, gscv

from .fit import fit_options_from_args

logger = logging.getLogger(__name__)


def add_gscv_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--k", type=int, default=config.GSCV_FOLDS, help="number of CV folds")
    parser.add_argument("--a0", type=float, default=config.GSCV_A0, help="first coefficient")
    parser.add_argument("--q", type=float, default=config.GSCV_RATIO, help="geometric ratio")
    parser.add_argument("--n-terms", type=int, default=config.GSCV_TERMS, help="ratio steps in the sequence")
    parser.add_argument("--alpha-step", type=float, default=config.GSCV_ALPHA_STEP, help="elastic-net alpha grid step")
    parser.add_argument("--seed", type=int, default=config.GSCV_SEED, help="fold shuffling seed")


def gscv_config_from_args(args: argparse.Namespace) -> GscvConfig:
    return GscvConfig(
        k=args.k,
        a0=args.a0,
        q=args.q,
        n_terms=args.n_terms,
        alpha_step=args.alpha_step,
        seed=args.seed,
    )


def tune_command(args: argparse.Namespace) -> int:
    """
    Handle `tune` - Select penalty coefficients by GSCV.

    Args:
        args: Parsed arguments (--data, --penalty, GSCV and fit options, --out, --model-out)

    Returns:
        int: Exit status
    """
    try:
        data = file_manager.read_dataset(args.data)
        basis = RegressionBasis(args.basis, data.dimension)
        opts = fit_options_from_args(args)
        result = gscv(data, basis, args.penalty, gscv_config_from_args(args), opts)

        out = Path(args.out) if args.out else file_manager.ensure_dir() / "gscv.csv"
        file_manager.write_table(out, result.to_frame())
        print(f"✅ GSCV finished: {result.summary()}")
        print(f"📊 Candidate grid written to {out}")

        if args.model_out:
            model, _ = fit_trk(data, basis, result.best_spec(), opts)
            file_manager.write_model(args.model_out, model)
            print(f"💾 Model with the selected penalty saved to {args.model_out}")
        return 0

    except (TRKError, OSError) as e:
        logger.error(f"Tuning failed: {e}")
        return 1
