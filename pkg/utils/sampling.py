"""
Design-of-experiments utilities for the TRK toolkit.
Latin hypercube designs, scaling to variable bounds and the normal
transform used for stochastic engineering inputs.
"""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from scipy.special import ndtri
from scipy.stats import qmc

from .errors import InvalidArgumentError


@dataclass(frozen=True)
class DesignRequest:
    """A Latin hypercube design of n points over D bounded variables."""

    n: int
    dimension: int
    seed: Optional[int]
    bounds: Tuple[Tuple[float, float], ...]

    def __post_init__(self):
        if self.n < 1 or self.dimension < 1:
            raise InvalidArgumentError("n and D must be >= 1")
        if len(self.bounds) != self.dimension:
            raise InvalidArgumentError(f"{len(self.bounds)} bounds given for {self.dimension} dimensions")
        if any(low >= high for low, high in self.bounds):
            raise InvalidArgumentError("bounds must satisfy low < high")

    def generate(self) -> np.ndarray:
        return scale_to_bounds(lhs(self.n, self.dimension, self.seed), np.asarray(self.bounds, dtype=float))


def lhs(n: int, dimension: int, seed: Optional[int] = None) -> np.ndarray:
    """
    Random-permutation Latin hypercube with uniform jitter inside each stratum.

    Args:
        n: Number of points (strata per dimension)
        dimension: Number of variables
        seed: RNG seed; equal seeds give equal designs

    Returns:
        np.ndarray: n x D points in [0, 1)^D with one point per stratum per column
    """
    if n < 1 or dimension < 1:
        raise InvalidArgumentError("n and D must be >= 1")
    sampler = qmc.LatinHypercube(d=dimension, seed=np.random.default_rng(seed))
    return sampler.random(n)


def _bounds_arrays(bounds: Union[np.ndarray, Sequence[Tuple[float, float]]]) -> Tuple[np.ndarray, np.ndarray]:
    bounds = np.asarray(bounds, dtype=float).reshape(-1, 2)
    return bounds[:, 0], bounds[:, 1]


def _scale(points: np.ndarray, bounds, reverse: bool) -> np.ndarray:
    low, high = _bounds_arrays(bounds)
    try:
        return qmc.scale(np.atleast_2d(points), low, high, reverse=reverse)
    except ValueError as e:
        raise InvalidArgumentError(f"Cannot {'unscale' if reverse else 'scale'} points: {e}") from None


def scale_to_bounds(points: np.ndarray, bounds) -> np.ndarray:
    """
    Affine map of unit-cube points onto per-dimension (low, high) bounds.

    Raises:
        InvalidArgumentError: If a point lies outside the unit cube or a bound has low >= high
    """
    return _scale(points, bounds, reverse=False)


def unscale_from_bounds(points: np.ndarray, bounds) -> np.ndarray:
    """
    Inverse of scale_to_bounds.

    Raises:
        InvalidArgumentError: If a point lies outside the bounds
    """
    return _scale(points, bounds, reverse=True)


def normal_transform(u: Union[float, np.ndarray], mean: float, sd: float) -> Union[float, np.ndarray]:
    """
    Map a probability u in (0, 1) to mean + sd * inverse-normal-CDF(u).

    Raises:
        InvalidArgumentError: If any u is outside (0, 1) or sd <= 0
    """
    values = np.asarray(u, dtype=float)
    if np.any(values <= 0.0) or np.any(values >= 1.0):
        raise InvalidArgumentError("u must lie strictly between 0 and 1")
    if sd <= 0:
        raise InvalidArgumentError("sd must be positive")
    result = mean + sd * ndtri(values)
    return float(result) if result.ndim == 0 else result


def shuffle_split(n: int, train_fraction: float, seed: Optional[int]) -> Tuple[np.ndarray, np.ndarray]:
    """
    Seeded uniform split of 0..n-1 into train and test index sets.

    Returns:
        Tuple[np.ndarray, np.ndarray]: (train indices, test indices), both sorted
    """
    if not 0 < train_fraction < 1:
        raise InvalidArgumentError("train_fraction must lie in (0, 1)")
    order = np.random.default_rng(seed).permutation(n)
    cut = int(round(train_fraction * n))
    return np.sort(order[:cut]), np.sort(order[cut:])
