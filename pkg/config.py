"""
Configuration management for the Theta-Regularized Kriging toolkit.
Handles environment variables and numerical defaults.
Every default below can be overridden with a TRK_* environment variable or a .env file.
"""

import os
from pathlib import Path
from typing import Final

from dotenv import load_dotenv

load_dotenv()


def _env_float(name: str, default: float) -> float:
    return float(os.getenv(name, repr(default)))


def _env_int(name: str, default: int) -> int:
    return int(os.getenv(name, str(default)))


# Correlation hyperparameters (normalized input space)
THETA_INIT: Final[float] = _env_float("TRK_THETA_INIT", 10.0)
THETA_LOWER: Final[float] = _env_float("TRK_THETA_LOWER", 1e-2)
THETA_UPPER: Final[float] = _env_float("TRK_THETA_UPPER", 1e2)

# Pattern search settings (steps are in log10(theta) units)
MAX_ITERS: Final[int] = _env_int("TRK_MAX_ITERS", 500)
EPSILON: Final[float] = _env_float("TRK_EPSILON", 1e-8)
INITIAL_STEP: Final[float] = _env_float("TRK_INITIAL_STEP", 1.0)
STEP_EXPAND: Final[float] = _env_float("TRK_STEP_EXPAND", 2.0)
STEP_SHRINK: Final[float] = _env_float("TRK_STEP_SHRINK", 0.5)
MIN_STEP: Final[float] = _env_float("TRK_MIN_STEP", 1e-6)

# Conditioning
NUGGET_LADDER: Final[tuple] = (0.0, 1e-12, 1e-10, 1e-8)  # multiples of mean diag(R)
DUPLICATE_TOLERANCE: Final[float] = 1e-12
MSE_NEGATIVE_TOLERANCE: Final[float] = 10.0  # in units of machine epsilon * sigma2
REGRESSION_RCOND: Final[float] = 1e-10

# GSCV defaults
GSCV_FOLDS: Final[int] = _env_int("TRK_GSCV_FOLDS", 5)
GSCV_A0: Final[float] = _env_float("TRK_GSCV_A0", 1e-5)
GSCV_RATIO: Final[float] = _env_float("TRK_GSCV_RATIO", 10 ** 0.5)
GSCV_TERMS: Final[int] = _env_int("TRK_GSCV_TERMS", 20)
GSCV_ALPHA_STEP: Final[float] = _env_float("TRK_GSCV_ALPHA_STEP", 0.05)
GSCV_SEED: Final[int] = _env_int("TRK_GSCV_SEED", 0)

# Experiment protocol
N_TRAIN: Final[int] = _env_int("TRK_N_TRAIN", 60)
N_TEST: Final[int] = _env_int("TRK_N_TEST", 5000)
REPETITIONS: Final[int] = _env_int("TRK_REPETITIONS", 10)
BOREHOLE_SAMPLES: Final[int] = 80
STEEL_COLUMN_SAMPLES: Final[int] = 100
SIMULATOR_TRAIN_RATIO: Final[float] = 0.75  # 3:1 split
MASTER_SEED: Final[int] = _env_int("TRK_MASTER_SEED", 0)

# Concurrency (independent fits only; a single fit is always serial)
MAX_WORKERS: Final[int] = _env_int("TRK_MAX_WORKERS", 1)

# Output
OUTPUT_DIR: Final[Path] = Path(os.getenv("TRK_OUTPUT_DIR", "trk_output"))
LOG_LEVEL: Final[str] = os.getenv("TRK_LOG_LEVEL", "INFO").upper()

# Model documents
MODEL_FORMAT: Final[str] = "trk-model"
MODEL_FORMAT_VERSION: Final[int] = 1

# Tool Information
TOOL_NAME: Final[str] = "TRK Kriging Toolkit"
TOOL_VERSION: Final[str] = "1.0.0"
TOOL_DESCRIPTION: Final[str] = "Theta-regularized Kriging surrogates with GSCV tuning"


def validate_config() -> bool:
    """
    Validate that the configured defaults are usable.

    Returns:
        bool: True if config is valid, False otherwise
    """
    if not 0 < THETA_LOWER <= THETA_INIT <= THETA_UPPER:
        print("❌ ERROR: theta defaults must satisfy 0 < TRK_THETA_LOWER <= TRK_THETA_INIT <= TRK_THETA_UPPER")
        return False

    if MAX_ITERS < 1 or EPSILON <= 0:
        print("❌ ERROR: TRK_MAX_ITERS must be >= 1 and TRK_EPSILON must be > 0")
        return False

    if not (STEP_EXPAND > 1 and 0 < STEP_SHRINK < 1 and MIN_STEP > 0):
        print("❌ ERROR: step constants need expand > 1, 0 < shrink < 1, min step > 0")
        return False

    if GSCV_FOLDS < 2 or GSCV_A0 <= 0 or GSCV_RATIO <= 1 or GSCV_TERMS < 1:
        print("❌ ERROR: GSCV defaults need k >= 2, a0 > 0, q > 1, n_terms >= 1")
        return False

    if not 0 < GSCV_ALPHA_STEP <= 1:
        print("❌ ERROR: TRK_GSCV_ALPHA_STEP must lie in (0, 1]")
        return False

    if MAX_WORKERS < 1:
        print("⚠️  WARNING: TRK_MAX_WORKERS < 1, falling back to serial execution.")

    if N_TEST < 1000:
        print(f"⚠️  WARNING: TRK_N_TEST={N_TEST} is below the usual 5000 test points.")

    return True


def get_tool_info() -> dict:
    """
    Get tool information for the about command.

    Returns:
        dict: Tool information
    """
    return {
        "name": TOOL_NAME,
        "version": TOOL_VERSION,
        "description": TOOL_DESCRIPTION,
        "model_format": f"{MODEL_FORMAT} v{MODEL_FORMAT_VERSION}",
    }
