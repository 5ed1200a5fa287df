"""
About and check command handlers for the TRK toolkit.
Provide tool information and the environment self-check.
"""

import argparse
import logging

import config
from system_check import run_system_checks
from utils.benchmarks import list_benchmarks

logger = logging.getLogger(__name__)


def about_command(args: argparse.Namespace) -> int:
    """
    Handle `about` - Show tool information and the benchmark registry.

    Args:
        args: Parsed command-line arguments

    Returns:
        int: Exit status
    """
    info = config.get_tool_info()
    print(f"ℹ️  {info['name']} v{info['version']}")
    print(f"{info['description']}\n")
    print(f"📄 Model documents: {info['model_format']}")
    print(f"📚 Benchmarks: {', '.join(list_benchmarks())}")
    print(f"⚙️  theta init {config.THETA_INIT:g} in [{config.THETA_LOWER:g}, {config.THETA_UPPER:g}], "
          f"max {config.MAX_ITERS} iterations, epsilon {config.EPSILON:g}")
    print(f"🔍 GSCV: k={config.GSCV_FOLDS}, a0={config.GSCV_A0:g}, q={config.GSCV_RATIO:.6g}, "
          f"n_terms={config.GSCV_TERMS}, alpha step={config.GSCV_ALPHA_STEP:g}")
    return 0


def check_command(args: argparse.Namespace) -> int:
    """Handle `check` - Run the dependency checks and validate the configuration."""
    passed = run_system_checks()
    if not config.validate_config():
        logger.error("Configuration validation failed!")
        passed = False
    return 0 if passed else 1
