"""
Diagnostics command handler for the TRK toolkit.
Dumps the likelihood gradient, Hessian, its singular spectrum and
optional objective scans at a given theta.
"""

import argparse
import logging

import numpy as np
import pandas as pd

import config
from utils import file_manager
from utils.errors import TRKError
from utils.kriging import RegressionBasis
from utils.objective import (
    hessian_spectrum,
    likelihood_gradient,
    likelihood_hessian,
    objective_scan,
    profiled_log_likelihood,
)

from .fit import parse_bounds, parse_floats, penalty_from_args

logger = logging.getLogger(__name__)


def diag_command(args: argparse.Namespace) -> int:
    """
    Handle `diag` - Write gradient.csv, hessian.csv and spectrum.csv.

    With --scan N the objective is also evaluated on N log-spaced values of a
    common theta across --scan-range and written to scan.csv.

    Args:
        args: Parsed arguments (--data, --basis, --theta, --out, --scan, penalty options)

    Returns:
        int: Exit status
    """
    try:
        data = file_manager.read_dataset(args.data)
        basis = RegressionBasis(args.basis, data.dimension)
        theta = np.asarray(parse_floats(args.theta), dtype=float)
        if theta.size == 1:
            theta = np.full(data.dimension, theta[0])

        out_dir = file_manager.ensure_dir(args.out)
        labels = [f"theta_{k + 1}" for k in range(data.dimension)]

        gradient = likelihood_gradient(data, basis, theta)
        hessian = likelihood_hessian(data, basis, theta)
        spectrum = hessian_spectrum(data, basis, theta)

        file_manager.write_table(
            out_dir / "gradient.csv",
            pd.DataFrame({"parameter": labels, "theta": theta, "gradient": gradient})
        )
        file_manager.write_table(out_dir / "hessian.csv", pd.DataFrame(hessian, columns=labels))
        file_manager.write_table(
            out_dir / "spectrum.csv",
            pd.DataFrame({
                "index": np.arange(1, spectrum.singular_values.size + 1),
                "singular_value": spectrum.singular_values,
            })
        )

        print(f"✅ Diagnostics at theta = {np.round(theta, 6).tolist()}")
        print(f"📈 log-likelihood = {profiled_log_likelihood(data, basis, theta):.6g}")
        print(f"📐 Hessian condition ratio s1/sD = {spectrum.condition_ratio:.6g}")

        if args.scan:
            low, high = parse_bounds(args.scan_range)
            grid = np.logspace(np.log10(low), np.log10(high), args.scan)
            spec = penalty_from_args(args)
            values = objective_scan(data, basis, spec, [np.full(data.dimension, t) for t in grid])
            file_manager.write_table(out_dir / "scan.csv", pd.DataFrame({"theta": grid, "objective": values}))
            print(f"🔎 Objective scan ({spec.label}) over {args.scan} points written")

        print(f"📁 Files written to {out_dir}")
        return 0

    except (TRKError, OSError) as e:
        logger.error(f"Diagnostics failed: {e}")
        return 1


def add_diag_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--theta", default=str(config.THETA_INIT), help="scalar or comma-separated theta")
    parser.add_argument("--scan", type=int, default=0, help="number of objective scan points (0 = no scan)")
    parser.add_argument("--scan-range", default=f"{config.THETA_LOWER},{config.THETA_UPPER}",
                        help="low,high range of the objective scan")
