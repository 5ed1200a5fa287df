"""
Shared fixtures for the TRK test suite.
"""

from pathlib import Path
from typing import Tuple

import numpy as np
import pytest

from utils.benchmarks import get_benchmark
from utils.kriging import Dataset, RegressionBasis, correlation_matrix, fit_given_theta
from utils.optimizer import FitOptions
from utils.sampling import DesignRequest


def benchmark_dataset(name: str, n: int, seed: int) -> Dataset:
    """LHS design over a benchmark's domain with its responses."""
    benchmark = get_benchmark(name)
    points = DesignRequest(n, benchmark.dimension, seed, benchmark.bounds).generate()
    return Dataset.from_arrays(points, benchmark.evaluate(points), np.asarray(benchmark.bounds))


def well_conditioned_instance(rng: np.random.Generator, dimension: int, n: int) -> Tuple[Dataset, np.ndarray]:
    """
    Random dataset and theta whose correlation matrix factorizes without a nugget.

    Used by derivative checks, where a nugget change between finite-difference
    evaluations would make the likelihood non-smooth.
    """
    while True:
        points = rng.uniform(0.0, 1.0, size=(n, dimension))
        responses = np.sin(3.0 * points.sum(axis=1)) + rng.normal(0.0, 0.1, size=n)
        data = Dataset.from_arrays(points, responses, np.array([[0.0, 1.0]] * dimension))
        theta = rng.uniform(1.0, 5.0, size=dimension)
        R = correlation_matrix(theta, data.x)
        if np.linalg.cond(R) > 1e6:
            continue
        model = fit_given_theta(data, RegressionBasis.constant(dimension), theta)
        if model.nugget == 0.0:
            return data, theta


@pytest.fixture
def forrester_data() -> Dataset:
    """Ten LHS points of the Forrester function."""
    return benchmark_dataset("forrester", 10, seed=1)


@pytest.fixture
def branin_like_data() -> Dataset:
    """Two-dimensional smooth dataset on the unit square."""
    rng = np.random.default_rng(7)
    points = rng.uniform(0.0, 1.0, size=(15, 2))
    responses = np.sin(4.0 * points[:, 0]) + points[:, 1] ** 2
    return Dataset.from_arrays(points, responses, np.array([[0.0, 1.0], [0.0, 1.0]]))


@pytest.fixture
def quick_options() -> FitOptions:
    """Short pattern search for tests that fit many models."""
    return FitOptions(max_iters=60, epsilon=1e-6, min_step=1e-3)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(2024)


@pytest.fixture
def temp_dir(tmp_path: Path) -> Path:
    """Scratch directory for written files."""
    return tmp_path
