"""
Theta optimizer for the TRK toolkit.
Minimizes the regularized objective over the theta box with a
Hooke-Jeeves pattern search in log10(theta) coordinates.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple, Union

import numpy as np
import pandas as pd

import config
from .errors import FitFailedError, IllConditionedCorrelationError, InvalidArgumentError, SingularRegressionError
from .kriging import Dataset, FittedModel, RegressionBasis, Theta, fit_given_theta
from .objective import PenaltySpec, trk_objective

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FitOptions:
    """Settings of the pattern search (steps are in log10(theta) units)."""

    theta_init: Union[float, Tuple[float, ...]] = config.THETA_INIT
    theta_lower: float = config.THETA_LOWER
    theta_upper: float = config.THETA_UPPER
    max_iters: int = config.MAX_ITERS
    epsilon: float = config.EPSILON
    initial_step: float = config.INITIAL_STEP
    step_expand: float = config.STEP_EXPAND
    step_shrink: float = config.STEP_SHRINK
    min_step: float = config.MIN_STEP

    def __post_init__(self):
        if not 0 < self.theta_lower <= self.theta_upper:
            raise InvalidArgumentError("theta bounds need 0 < lower <= upper")
        init = np.atleast_1d(np.asarray(self.theta_init, dtype=float))
        if np.any(init < self.theta_lower) or np.any(init > self.theta_upper):
            raise InvalidArgumentError(
                f"theta_init {init.tolist()} outside [{self.theta_lower}, {self.theta_upper}]"
            )
        if self.max_iters < 1:
            raise InvalidArgumentError("max_iters must be >= 1")
        if self.epsilon <= 0:
            raise InvalidArgumentError("epsilon must be > 0")
        if self.step_expand <= 1 or not 0 < self.step_shrink < 1:
            raise InvalidArgumentError("need step_expand > 1 and 0 < step_shrink < 1")
        if self.initial_step <= 0 or self.min_step <= 0:
            raise InvalidArgumentError("steps must be positive")

    def initial_theta(self, dimension: int) -> Theta:
        return Theta.broadcast(self.theta_init, dimension, self.theta_lower, self.theta_upper)


@dataclass(frozen=True)
class TraceRow:
    iteration: int
    theta: Tuple[float, ...]
    objective: float
    best_objective: float


@dataclass
class FitTrace:
    """Every objective evaluation of one fit, with the termination outcome."""

    rows: List[TraceRow] = field(default_factory=list)
    iterations: int = 0
    converged: bool = False
    reason: str = ""

    @property
    def best_objectives(self) -> np.ndarray:
        return np.array([row.best_objective for row in self.rows])

    def to_frame(self) -> pd.DataFrame:
        """Trace as a table: iter, theta_1..theta_D, objective, best_objective."""
        dimension = len(self.rows[0].theta) if self.rows else 0
        records = []
        for row in self.rows:
            record = {"iter": row.iteration}
            record.update({f"theta_{k + 1}": value for k, value in enumerate(row.theta)})
            record["objective"] = row.objective
            record["best_objective"] = row.best_objective
            records.append(record)
        columns = ["iter"] + [f"theta_{k + 1}" for k in range(dimension)] + ["objective", "best_objective"]
        return pd.DataFrame.from_records(records, columns=columns)


class PatternSearch:
    """Hooke-Jeeves exploratory and pattern moves on a box, with an evaluation cache."""

    def __init__(
        self,
        objective: Callable[[np.ndarray], float],
        lower: np.ndarray,
        upper: np.ndarray,
        options: FitOptions
    ):
        """
        Args:
            objective: Function of the search point, +inf where infeasible
            lower: Lower box corner (search coordinates)
            upper: Upper box corner (search coordinates)
            options: Step constants and stopping rules
        """
        self.objective = objective
        self.lower = lower
        self.upper = upper
        self.options = options
        self.trace = FitTrace()
        self.iteration = 0
        self._cache: Dict[bytes, float] = {}
        self._best = math.inf

    def evaluate(self, point: np.ndarray, to_theta: Callable[[np.ndarray], np.ndarray]) -> float:
        key = point.tobytes()
        if key in self._cache:
            return self._cache[key]
        value = self.objective(point)
        self._cache[key] = value
        self._best = min(self._best, value)
        self.trace.rows.append(
            TraceRow(self.iteration, tuple(float(t) for t in to_theta(point)), value, self._best)
        )
        return value

    def explore(self, base: np.ndarray, base_value: float, steps: np.ndarray, to_theta) -> Tuple[np.ndarray, float]:
        """Coordinate-wise trial of +step then -step, keeping each improvement."""
        point = base.copy()
        best = base_value
        for k in range(point.size):
            for direction in (1.0, -1.0):
                candidate = point.copy()
                candidate[k] = np.clip(point[k] + direction * steps[k], self.lower[k], self.upper[k])
                if candidate[k] == point[k]:
                    continue
                value = self.evaluate(candidate, to_theta)
                if value < best:
                    point, best = candidate, value
                    break
        return point, best

    def run(self, start: np.ndarray, to_theta) -> Tuple[np.ndarray, float]:
        """
        Search from `start` until the relative decrease drops below epsilon,
        every step falls below min_step, or max_iters is reached.

        Returns:
            Tuple[np.ndarray, float]: (best point, best value)
        """
        opts = self.options
        span = np.maximum(self.upper - self.lower, opts.min_step)
        current = np.clip(start, self.lower, self.upper)
        value = self.evaluate(current, to_theta)
        steps = np.minimum(np.full(current.size, opts.initial_step), span)

        for iteration in range(1, opts.max_iters + 1):
            self.iteration = iteration
            self.trace.iterations = iteration
            moved, moved_value = self.explore(current, value, steps, to_theta)

            if moved_value < value:
                # Pattern move along the successful direction
                pattern = np.clip(2.0 * moved - current, self.lower, self.upper)
                pattern_value = self.evaluate(pattern, to_theta)
                explored, explored_value = self.explore(pattern, pattern_value, steps, to_theta)
                previous = value
                if explored_value < moved_value:
                    current, value = explored, explored_value
                else:
                    current, value = moved, moved_value
                steps = np.minimum(steps * opts.step_expand, span)

                if math.isfinite(previous):
                    decrease = (previous - value) / max(1.0, abs(previous))
                    if decrease < opts.epsilon:
                        self._finish(True, "objective decrease below epsilon")
                        break
            else:
                steps = steps * opts.step_shrink
                if steps.max() < opts.min_step:
                    self._finish(True, "step below minimum")
                    break
        else:
            self._finish(False, "maximum iterations reached")

        return current, value

    def _finish(self, converged: bool, reason: str) -> None:
        self.trace.converged = converged
        self.trace.reason = reason


def fit_trk(
    data: Dataset,
    basis: RegressionBasis,
    spec: PenaltySpec,
    opts: Optional[FitOptions] = None
) -> Tuple[FittedModel, FitTrace]:
    """
    Fit a theta-regularized Kriging model.

    Each objective evaluation re-estimates beta and sigma^2 at the trial theta;
    thetas where the correlation matrix cannot be factorized score +inf.

    Args:
        data: Training dataset
        basis: Regression basis
        spec: Penalty on theta (PenaltySpec.none() gives universal Kriging)
        opts: Search options (defaults from config)

    Returns:
        Tuple[FittedModel, FitTrace]: Model at the best theta visited and the search trace

    Raises:
        FitFailedError: If no trial theta was feasible
    """
    opts = opts or FitOptions()
    start_theta = opts.initial_theta(data.dimension)
    lower = np.full(data.dimension, math.log10(opts.theta_lower))
    upper = np.full(data.dimension, math.log10(opts.theta_upper))
    last_diagnostic: List[str] = []

    def to_theta(point: np.ndarray) -> np.ndarray:
        return np.clip(10.0 ** point, opts.theta_lower, opts.theta_upper)

    def objective(point: np.ndarray) -> float:
        theta = Theta(to_theta(point), opts.theta_lower, opts.theta_upper)
        try:
            return trk_objective(data, basis, theta, spec)
        except (IllConditionedCorrelationError, SingularRegressionError) as e:
            last_diagnostic.append(str(e))
            return math.inf

    search = PatternSearch(objective, lower, upper, opts)
    best_point, best_value = search.run(np.log10(start_theta.values), to_theta)

    if not math.isfinite(best_value):
        raise FitFailedError(
            f"No feasible theta found for {spec.label}",
            diagnostic=last_diagnostic[-1] if last_diagnostic else None
        )

    model = fit_given_theta(data, basis, Theta(to_theta(best_point), opts.theta_lower, opts.theta_upper))
    logger.debug(
        f"Fit {spec.label}: theta={np.round(model.theta.values, 6).tolist()} "
        f"psi={best_value:.6g} after {search.trace.iterations} iterations ({search.trace.reason})"
    )
    return model, search.trace


def fit_uk(data: Dataset, basis: RegressionBasis, opts: Optional[FitOptions] = None) -> FittedModel:
    """Universal Kriging: fit_trk without a penalty."""
    model, _ = fit_trk(data, basis, PenaltySpec.none(), opts)
    return model
