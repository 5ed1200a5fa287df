"""
TRK Kriging Toolkit - Command-line entry point
Theta-regularized Kriging surrogates with GSCV penalty tuning.

Commands:
- sample: Latin hypercube designs (optionally with benchmark responses)
- fit / predict: Train a model on a dataset CSV and query it
- tune: GSCV selection of penalty coefficients
- diag: Likelihood gradient, Hessian and spectrum dumps
- bench / sweep: Benchmark experiments and penalty sensitivity tables
- about / check: Tool information and environment check

Version: 1.0.0
"""

import argparse
import logging
import sys
from typing import List, Optional

import config
from handlers import (
    about_command,
    bench_command,
    check_command,
    diag_command,
    fit_command,
    predict_command,
    sample_command,
    sweep_command,
    tune_command
)
from handlers.diag import add_diag_arguments
from handlers.fit import add_fit_arguments, add_penalty_arguments
from handlers.tune import add_gscv_arguments

# Configure logging
logging.basicConfig(
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    level=getattr(logging, config.LOG_LEVEL, logging.INFO)
)
logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    """
    Build the argument parser with one subcommand per handler.

    Returns:
        argparse.ArgumentParser: Parser whose namespaces carry a `handler`
    """
    parser = argparse.ArgumentParser(prog="trk", description=config.TOOL_DESCRIPTION)
    parser.add_argument("--version", action="version", version=f"{config.TOOL_NAME} {config.TOOL_VERSION}")
    commands = parser.add_subparsers(dest="command", required=True)

    sample = commands.add_parser("sample", help="write a Latin hypercube design")
    sample.add_argument("--n", type=int, required=True, help="number of points")
    sample.add_argument("--seed", type=int, default=config.MASTER_SEED)
    sample.add_argument("--benchmark", help="benchmark whose domain is sampled")
    sample.add_argument("--dim", type=int, help="dimension when no benchmark is given")
    sample.add_argument("--bounds", default="0,1", help="low,high applied to every dimension")
    sample.add_argument("--with-response", action="store_true", help="append the benchmark response as y")
    sample.add_argument("--out", help="output CSV")
    sample.set_defaults(handler=sample_command)

    fit = commands.add_parser("fit", help="fit a TRK or UK model")
    fit.add_argument("--data", required=True, help="dataset CSV (x1..xD, y)")
    add_fit_arguments(fit)
    add_penalty_arguments(fit)
    fit.add_argument("--out", help="model document path")
    fit.add_argument("--trace", help="optional CSV for the optimizer trace")
    fit.set_defaults(handler=fit_command)

    predict = commands.add_parser("predict", help="predict with a saved model")
    predict.add_argument("--model", required=True, help="model document")
    predict.add_argument("--points", required=True, help="CSV of query points")
    predict.add_argument("--mse", action="store_true", help="also write the predicted MSE")
    predict.add_argument("--out", help="output CSV (stdout if omitted)")
    predict.set_defaults(handler=predict_command)

    tune = commands.add_parser("tune", help="select penalty coefficients by GSCV")
    tune.add_argument("--data", required=True, help="dataset CSV (x1..xD, y)")
    tune.add_argument("--penalty", choices=("lasso", "ridge", "elastic_net"), required=True)
    add_gscv_arguments(tune)
    add_fit_arguments(tune)
    tune.add_argument("--out", help="candidate grid CSV")
    tune.add_argument("--model-out", help="also fit and save the selected model")
    tune.set_defaults(handler=tune_command)

    diag = commands.add_parser("diag", help="likelihood derivative diagnostics")
    diag.add_argument("--data", required=True, help="dataset CSV (x1..xD, y)")
    diag.add_argument("--basis", choices=("constant", "linear"), default="constant")
    add_diag_arguments(diag)
    add_penalty_arguments(diag)
    diag.add_argument("--out", default=str(config.OUTPUT_DIR / "diag"), help="output directory")
    diag.set_defaults(handler=diag_command)

    bench = commands.add_parser("bench", help="run a benchmark experiment from a TOML config")
    bench.add_argument("--config", required=True, help="experiment TOML file")
    bench.add_argument("--out", help="report directory")
    bench.set_defaults(handler=bench_command)

    sweep = commands.add_parser("sweep", help="penalty sensitivity sweep")
    sweep.add_argument("--benchmark", required=True)
    sweep.add_argument("--penalty", choices=("lasso", "ridge", "elastic_net"), required=True)
    sweep.add_argument("--coefficients", help="comma-separated coefficients (default: GSCV sequence)")
    sweep.add_argument("--alphas", help="comma-separated elastic-net alphas")
    sweep.add_argument("--n-train", type=int, default=config.N_TRAIN)
    sweep.add_argument("--n-test", type=int, default=config.N_TEST)
    sweep.add_argument("--seed", type=int, default=config.MASTER_SEED)
    add_fit_arguments(sweep)
    sweep.add_argument("--out", help="output CSV")
    sweep.set_defaults(handler=sweep_command)

    about = commands.add_parser("about", help="tool information")
    about.set_defaults(handler=about_command)

    check = commands.add_parser("check", help="check dependencies and configuration")
    check.set_defaults(handler=check_command)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    Parse arguments and dispatch to the subcommand handler.

    Returns:
        int: Exit status
    """
    args = build_parser().parse_args(argv)

    if args.command != "check" and not config.validate_config():
        logger.error("Configuration validation failed!")
        return 1

    return args.handler(args)


if __name__ == '__main__':
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        logger.info("Stopped by user")
        sys.exit(130)
    except Exception as e:
        logger.error(f"Fatal error: {e}")
        sys.exit(1)
