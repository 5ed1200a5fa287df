"""
Sample command handler for the TRK toolkit.
Writes Latin hypercube designs, optionally with benchmark responses.
"""

import argparse
import logging
from pathlib import Path

from utils import file_manager
from utils.benchmarks import get_benchmark
from utils.errors import InvalidArgumentError, TRKError
from utils.runner import SIMULATOR_DESIGNS
from utils.sampling import DesignRequest

from .fit import parse_bounds

logger = logging.getLogger(__name__)


def sample_command(args: argparse.Namespace) -> int:
    """
    Handle `sample` - Generate a design of n points.

    With --benchmark the design covers that benchmark's domain (the simulators
    use their own input generators); otherwise --dim and --bounds define a box.

    Args:
        args: Parsed arguments (--n, --seed, --benchmark | --dim/--bounds, --with-response, --out)

    Returns:
        int: Exit status
    """
    try:
        responses = None
        if args.benchmark:
            benchmark = get_benchmark(args.benchmark)
            if benchmark.name in SIMULATOR_DESIGNS:
                generator, _ = SIMULATOR_DESIGNS[benchmark.name]
                points = generator(args.n, args.seed)
            else:
                points = DesignRequest(args.n, benchmark.dimension, args.seed, benchmark.bounds).generate()
            if args.with_response:
                responses = benchmark.evaluate(points)
        else:
            if args.with_response:
                raise InvalidArgumentError("--with-response needs --benchmark")
            if args.dim is None:
                raise InvalidArgumentError("give --benchmark or --dim")
            bounds = (parse_bounds(args.bounds),) * args.dim
            points = DesignRequest(args.n, args.dim, args.seed, bounds).generate()

        out = Path(args.out) if args.out else file_manager.ensure_dir() / "design.csv"
        file_manager.write_points(out, points, responses)
        print(f"✅ {points.shape[0]} x {points.shape[1]} design written to {out}")
        return 0

    except (TRKError, OSError) as e:
        logger.error(f"Sampling failed: {e}")
        return 1
