"""
Fit and predict command handlers for the TRK toolkit.
Train one model on a dataset CSV, save it, and predict from a saved model.
"""

import argparse
import logging
from pathlib import Path
from typing import List, Tuple

import numpy as np

import config
from utils import file_manager
from utils.errors import InvalidArgumentError, TRKError
from utils.kriging import RegressionBasis, predict, predict_mse
from utils.objective import PenaltySpec
from utils.optimizer import FitOptions, fit_trk

logger = logging.getLogger(__name__)


def parse_floats(text: str) -> List[float]:
    """Parse '1e-3,0.1,10' into floats."""
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise InvalidArgumentError(f"Expected comma-separated numbers, got '{text}'") from None


def parse_bounds(text: str) -> Tuple[float, float]:
    values = parse_floats(text)
    if len(values) != 2:
        raise InvalidArgumentError(f"Expected 'low,high', got '{text}'")
    return values[0], values[1]


def add_fit_arguments(parser: argparse.ArgumentParser) -> None:
    """Options shared by every command that runs the theta search."""
    parser.add_argument("--basis", choices=("constant", "linear"), default="constant")
    parser.add_argument("--theta-init", default=str(config.THETA_INIT),
                        help="scalar or comma-separated per-dimension initial theta")
    parser.add_argument("--theta-bounds", default=f"{config.THETA_LOWER},{config.THETA_UPPER}",
                        help="low,high box for every theta component")
    parser.add_argument("--max-iters", type=int, default=config.MAX_ITERS)
    parser.add_argument("--epsilon", type=float, default=config.EPSILON)


def add_penalty_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--penalty", choices=("none", "lasso", "ridge", "elastic_net"), default="none")
    parser.add_argument("--lambda", dest="lam", type=float, default=0.0, help="lasso coefficient")
    parser.add_argument("--mu", type=float, default=0.0, help="ridge coefficient")
    parser.add_argument("--gamma", type=float, default=0.0, help="elastic-net coefficient")
    parser.add_argument("--alpha", type=float, default=0.5, help="elastic-net l1 share")


def fit_options_from_args(args: argparse.Namespace) -> FitOptions:
    init = parse_floats(args.theta_init)
    lower, upper = parse_bounds(args.theta_bounds)
    return FitOptions(
        theta_init=init[0] if len(init) == 1 else tuple(init),
        theta_lower=lower,
        theta_upper=upper,
        max_iters=args.max_iters,
        epsilon=args.epsilon,
    )


def penalty_from_args(args: argparse.Namespace) -> PenaltySpec:
    return PenaltySpec(args.penalty, lam=args.lam, mu=args.mu, gamma=args.gamma, alpha=args.alpha)


def fit_command(args: argparse.Namespace) -> int:
    """
    Handle `fit` - Fit a TRK (or UK) model and save it as a model document.

    Args:
        args: Parsed arguments (--data, --out, --trace, fit and penalty options)

    Returns:
        int: Exit status
    """
    try:
        data = file_manager.read_dataset(args.data)
        basis = RegressionBasis(args.basis, data.dimension)
        spec = penalty_from_args(args)
        model, trace = fit_trk(data, basis, spec, fit_options_from_args(args))

        out = Path(args.out) if args.out else file_manager.ensure_dir() / "model.json"
        file_manager.write_model(out, model)
        if args.trace:
            file_manager.write_table(args.trace, trace.to_frame())

        theta = ", ".join(f"{t:.6g}" for t in model.theta.values)
        print(f"✅ Fitted {spec.label} on n={data.n}, D={data.dimension}")
        print(f"📐 theta = [{theta}]")
        print(f"🔁 {trace.iterations} iterations ({trace.reason})")
        print(f"💾 Model saved to {out}")
        return 0

    except (TRKError, OSError) as e:
        logger.error(f"Fit failed: {e}")
        diagnostic = getattr(e, "diagnostic", None)
        if diagnostic:
            logger.error(f"Diagnostic: {diagnostic}")
        return 1


def predict_command(args: argparse.Namespace) -> int:
    """Handle `predict` - Predict (and optionally the MSE) at query points from a saved model."""
    try:
        model = file_manager.read_model(args.model)
        points = file_manager.read_points(args.points)
        prediction = np.atleast_1d(predict(model, points))
        frame = file_manager.points_frame(points)
        frame["prediction"] = prediction
        if args.mse:
            frame["mse"] = np.atleast_1d(predict_mse(model, points))

        if args.out:
            file_manager.write_table(args.out, frame)
            print(f"✅ {len(frame)} prediction(s) written to {args.out}")
        else:
            print(frame.to_csv(index=False, lineterminator="\n"), end="")
        return 0

    except (TRKError, OSError) as e:
        logger.error(f"Prediction failed: {e}")
        return 1
