"""
Response functions and accuracy metrics for the TRK toolkit.
Analytic test functions, the borehole and steel-column simulators,
and the R2 / RMSE / MAE report.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from sklearn.metrics import mean_absolute_error, mean_squared_error, r2_score

from .errors import InvalidArgumentError, SingularConfigurationError
from .sampling import DesignRequest, lhs, normal_transform

logger = logging.getLogger(__name__)

STEEL_COLUMN_LENGTH = 7500.0  # mm

# (mean, standard deviation) of F_s, Z1, Z2, Z3, b, t, h, F0, E
STEEL_COLUMN_VARIABLES: Tuple[Tuple[float, float], ...] = (
    (400.0, 35.0),
    (500000.0, 50000.0),
    (600000.0, 90000.0),
    (600000.0, 90000.0),
    (300.0, 3.0),
    (20.0, 2.0),
    (400.0, 5.0),
    (30.0, 10.0),
    (21000.0, 4200.0),
)
STEEL_DESIGN_BOUNDS = ((25.0, 450.0), (5.0, 40.0), (150.0, 600.0))  # b, t, h

BOREHOLE_BOUNDS = (
    (0.05, 0.15),  # r_w
    (100.0, 50000.0),  # r
    (63070.0, 115600.0),  # T_u
    (990.0, 1110.0),  # H_u
    (63.1, 116.0),  # T_l
    (700.0, 820.0),  # H_l
    (1120.0, 1680.0),  # L
    (9855.0, 12045.0),  # K_w
)

LANGERMANN_C = np.array([1.0, 2.0, 5.0, 2.0, 3.0])
LANGERMANN_A = np.array([[3.0, 5.0], [5.0, 2.0], [2.0, 1.0], [1.0, 4.0], [7.0, 9.0]])


def forrester(x: np.ndarray) -> float:
    return float((6.0 * x[0] - 1.0) ** 2 * np.sin(12.0 * x[0] - 4.0))


def cornerpeak(x: np.ndarray) -> float:
    return float((1.0 + 5.0 * (x[0] + x[1])) ** -3)


def langermann(x: np.ndarray) -> float:
    distance = np.sum((x[None, :] - LANGERMANN_A) ** 2, axis=1)
    return float(np.sum(LANGERMANN_C * np.exp(-distance / np.pi) * np.cos(np.pi * distance)))


def rastrigin(x: np.ndarray) -> float:
    return float(20.0 + np.sum(x ** 2 - 10.0 * np.cos(2.0 * np.pi * x)))


def morcaf(x: np.ndarray) -> float:
    return float(9.0 / 4.0 * np.prod(np.sqrt(x)))


def sphere(x: np.ndarray) -> float:
    return float(np.sum(x ** 2))


def rhe(x: np.ndarray) -> float:
    # sum over i of the partial sums x_1^2 + ... + x_i^2
    return float(np.sum(np.cumsum(x ** 2)))


def trid(x: np.ndarray) -> float:
    return float(np.sum((x - 1.0) ** 2) - np.sum(x[1:] * x[:-1]))


def schwefel(x: np.ndarray) -> float:
    return float(418.9829 * 12 - np.sum(x * np.sin(np.sqrt(np.abs(x)))))


def stybtang(x: np.ndarray) -> float:
    return float(0.5 * np.sum(x ** 4 - 16.0 * x ** 2 + 5.0 * x))


def shd_parts(x: np.ndarray) -> Tuple[float, float, float]:
    """
    The three unweighted components of the 25-D coupled function.

    Returns:
        Tuple[float, float, float]: (Styblinski-Tang sum over x1..x8,
            Griewank-style term over x9..x16, nested square sums for i = 17..25)
    """
    head = x[:8]
    styblinski = float(np.sum(head ** 4 - 16.0 * head ** 2 + 5.0 * head))

    index = np.arange(9, 17)
    middle = x[8:16]
    griewank = float(np.sum(middle ** 2 / 100.0) - np.prod(np.cos(middle / np.sqrt(index))) + 1.0)

    partial = np.cumsum(x ** 2)
    nested = float(np.sum(partial[16:25]))
    return styblinski, griewank, nested


def shd(x: np.ndarray) -> float:
    styblinski, griewank, nested = shd_parts(x)
    return styblinski / 8.0 + griewank / 40.0 + nested / 100.0


def borehole(x: np.ndarray) -> float:
    """
    Water flow rate (m^3/yr) through a borehole.

    Args:
        x: (r_w, r, T_u, H_u, T_l, H_l, L, K_w)

    Returns:
        float: Flow rate, using the natural logarithm of r / r_w
    """
    r_w, r, t_u, h_u, t_l, h_l, length, k_w = (float(v) for v in x)
    log_ratio = math.log(r / r_w)
    numerator = 2.0 * math.pi * t_u * (h_u - h_l)
    denominator = log_ratio * (1.0 + 2.0 * length * t_u / (log_ratio * r_w ** 2 * k_w) + t_u / t_l)
    return numerator / denominator


def steel_limit_state(x: np.ndarray) -> float:
    """
    Safety margin g_h of a steel column.

    g_h = F_s - F (1/(2bt) + F0/(bth) * xi_b/(xi_b - F)), with F = Z1 + Z2 + Z3
    and Euler buckling load xi_b = pi^2 E b t h^2 / (2 L^2), L = 7500 mm.

    Args:
        x: (F_s, Z1, Z2, Z3, b, t, h, F0, E)

    Raises:
        InvalidArgumentError: If b, t, h or E is not positive
        SingularConfigurationError: If xi_b equals F
    """
    f_s, z1, z2, z3, b, t, h, f0, e = (float(v) for v in x)
    if min(b, t, h, e) <= 0:
        raise InvalidArgumentError("b, t, h and E must be positive")
    load = z1 + z2 + z3
    buckling = math.pi ** 2 * e * b * t * h ** 2 / (2.0 * STEEL_COLUMN_LENGTH ** 2)
    if buckling == load:
        raise SingularConfigurationError("Euler buckling load equals the combined load")
    if buckling < load:
        logger.warning(f"Post-buckling configuration: xi_b={buckling:.6g} < F={load:.6g}")
    return f_s - load * (1.0 / (2.0 * b * t) + f0 / (b * t * h) * (buckling / (buckling - load)))


def steel_cost(b: float, t: float, h: float) -> float:
    """Column cost b*t + 5*h; warns outside the design bounds."""
    for name, value, (low, high) in zip("bth", (b, t, h), STEEL_DESIGN_BOUNDS):
        if not low <= value <= high:
            logger.warning(f"Steel column {name}={value:g} outside [{low:g}, {high:g}]")
    return b * t + 5.0 * h


@dataclass(frozen=True)
class BenchmarkDef:
    """A named response function with its dimension and domain."""

    name: str
    dimension: int
    bounds: Tuple[Tuple[float, float], ...]
    evaluator: Callable[[np.ndarray], float]
    kind: str = "analytic"

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        """Evaluate every row; warns once if some rows leave the domain."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if points.shape[1] != self.dimension:
            raise InvalidArgumentError(f"{self.name} takes {self.dimension} inputs, got {points.shape[1]}")
        _check_domain(self, points)
        return np.array([self.evaluator(row) for row in points])


def _check_domain(benchmark: BenchmarkDef, points: np.ndarray) -> None:
    bounds = np.asarray(benchmark.bounds)
    outside = np.any((points < bounds[:, 0]) | (points > bounds[:, 1]), axis=1)
    if np.any(outside):
        logger.warning(f"{int(outside.sum())} point(s) outside the {benchmark.name} domain")


def _steel_bounds() -> Tuple[Tuple[float, float], ...]:
    # mean +/- 4 standard deviations
    return tuple((mean - 4.0 * sd, mean + 4.0 * sd) for mean, sd in STEEL_COLUMN_VARIABLES)


_REGISTRY: Dict[str, BenchmarkDef] = {
    definition.name: definition
    for definition in (
        BenchmarkDef("forrester", 1, ((0.0, 1.0),), forrester),
        BenchmarkDef("cornerpeak", 2, ((0.0, 1.0),) * 2, cornerpeak),
        BenchmarkDef("langermann", 2, ((0.0, 1.0),) * 2, langermann),
        BenchmarkDef("rastrigin", 2, ((0.0, 1.8),) * 2, rastrigin),
        BenchmarkDef("morcaf", 2, ((0.0, 1.0),) * 2, morcaf),
        BenchmarkDef("sphere", 4, ((-5.12, 5.12),) * 4, sphere),
        BenchmarkDef("rhe", 6, ((-1.0, 1.0),) * 6, rhe),
        BenchmarkDef("trid", 8, ((-1.0, 1.0),) * 8, trid),
        BenchmarkDef("schwefel", 12, ((-1.0, 1.0),) * 12, schwefel),
        BenchmarkDef("stybtang", 24, ((0.0, 0.5),) * 24, stybtang),
        BenchmarkDef("shd", 25, ((0.0, 1.0),) * 25, shd),
        BenchmarkDef("borehole", 8, BOREHOLE_BOUNDS, borehole, kind="simulator"),
        BenchmarkDef("steelcolumn", 9, _steel_bounds(), steel_limit_state, kind="simulator"),
    )
}


def get_benchmark(name: str) -> BenchmarkDef:
    """
    Look up a benchmark by name.

    Raises:
        InvalidArgumentError: If the name is not registered
    """
    try:
        return _REGISTRY[name]
    except KeyError:
        raise InvalidArgumentError(
            f"Unknown benchmark '{name}'. Available: {', '.join(_REGISTRY)}"
        ) from None


def list_benchmarks() -> List[str]:
    return list(_REGISTRY)


def eval_benchmark(name: str, x) -> float:
    """
    Evaluate a registered benchmark at one point.

    Raises:
        InvalidArgumentError: Unknown name or wrong dimension
    """
    benchmark = get_benchmark(name)
    point = np.atleast_1d(np.asarray(x, dtype=float)).ravel()
    if point.size != benchmark.dimension:
        raise InvalidArgumentError(f"{name} takes {benchmark.dimension} inputs, got {point.size}")
    _check_domain(benchmark, point.reshape(1, -1))
    return benchmark.evaluator(point)


@dataclass(frozen=True)
class MetricsReport:
    """Accuracy of a prediction; r2 is None when y_true is constant."""

    r2: Optional[float]
    rmse: float
    mae: float


def metrics(y_true: np.ndarray, y_pred: np.ndarray) -> MetricsReport:
    """
    R2, RMSE and MAE of predictions.

    Raises:
        InvalidArgumentError: If lengths differ or fewer than 2 values are given
    """
    y_true = np.asarray(y_true, dtype=float).ravel()
    y_pred = np.asarray(y_pred, dtype=float).ravel()
    if y_true.size != y_pred.size or y_true.size < 2:
        raise InvalidArgumentError("y_true and y_pred need equal lengths >= 2")
    rmse = float(np.sqrt(mean_squared_error(y_true, y_pred)))
    mae = float(mean_absolute_error(y_true, y_pred))
    r2 = None if np.all(y_true == y_true[0]) else float(r2_score(y_true, y_pred))
    return MetricsReport(r2=r2, rmse=rmse, mae=mae)


def borehole_design(n: int, seed: Optional[int] = None) -> np.ndarray:
    """Uniform LHS over the borehole input bounds."""
    return DesignRequest(n, len(BOREHOLE_BOUNDS), seed, BOREHOLE_BOUNDS).generate()


def steel_column_design(n: int, seed: Optional[int] = None) -> np.ndarray:
    """
    Steel-column inputs: LHS in probability space, then a normal transform per variable.

    Args:
        n: Number of points
        seed: RNG seed

    Returns:
        np.ndarray: n x 9 matrix ordered (F_s, Z1, Z2, Z3, b, t, h, F0, E)
    """
    unit = lhs(n, len(STEEL_COLUMN_VARIABLES), seed)
    # LHS jitter can hit exactly 0; keep u strictly inside (0, 1)
    tiny = np.finfo(float).eps
    unit = np.clip(unit, tiny, 1.0 - tiny)
    columns = [normal_transform(unit[:, k], mean, sd) for k, (mean, sd) in enumerate(STEEL_COLUMN_VARIABLES)]
    return np.column_stack(columns)
