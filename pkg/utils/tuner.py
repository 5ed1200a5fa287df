"""
Penalty coefficient tuning for the TRK toolkit.
Geometric-search cross-validation (GSCV): candidate coefficients form a
geometric sequence (times an alpha grid for elastic-net) and the candidate
with the smallest k-fold cross-validation MSE wins.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, List, Optional, Sequence, Tuple, TypeVar

import numpy as np
import pandas as pd
from sklearn.model_selection import KFold

import config
from .errors import (
    DuplicatePointError,
    FitFailedError,
    IllConditionedCorrelationError,
    InvalidArgumentError,
    SingularRegressionError,
    TuningFailedError,
)
from .kriging import Dataset, RegressionBasis, predict
from .objective import PenaltySpec
from .optimizer import FitOptions, fit_trk

logger = logging.getLogger(__name__)

TUNABLE_KINDS = ("lasso", "ridge", "elastic_net")

T = TypeVar("T")
R = TypeVar("R")


def ordered_map(function: Callable[[T], R], items: Sequence[T], workers: int = config.MAX_WORKERS) -> List[R]:
    """
    Apply `function` to every item, concurrently when workers > 1.
    Results always come back in input order.
    """
    if workers <= 1 or len(items) <= 1:
        return [function(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(function, items))


@dataclass(frozen=True)
class GscvConfig:
    """
    GSCV settings.

    The coefficient sequence is a0 * q**(i - 1) for i = 1 .. n_terms + 1, so
    n_terms counts ratio steps and the defaults span [1e-5, 1e5].
    """

    k: int = config.GSCV_FOLDS
    a0: float = config.GSCV_A0
    q: float = config.GSCV_RATIO
    n_terms: int = config.GSCV_TERMS
    alpha_step: float = config.GSCV_ALPHA_STEP
    seed: int = config.GSCV_SEED

    def __post_init__(self):
        if self.k < 2:
            raise InvalidArgumentError("k must be >= 2")
        if self.a0 <= 0 or self.q <= 1:
            raise InvalidArgumentError("need a0 > 0 and q > 1")
        if self.n_terms < 1:
            raise InvalidArgumentError("n_terms must be >= 1")
        if not 0 < self.alpha_step <= 1:
            raise InvalidArgumentError("alpha_step must lie in (0, 1]")

    def coefficients(self) -> np.ndarray:
        return self.a0 * self.q ** np.arange(self.n_terms + 1)

    def alphas(self) -> np.ndarray:
        """0, h, 2h, ... up to 1, with the endpoint 1 always included."""
        count = int(math.floor(1.0 / self.alpha_step + 1e-9))
        grid = np.round(np.arange(count + 1) * self.alpha_step, 12)
        grid = grid[grid <= 1.0]
        if grid[-1] != 1.0:
            grid = np.append(grid, 1.0)
        return grid


@dataclass(frozen=True)
class GscvCandidate:
    coefficient: float
    alpha: Optional[float]
    score: float
    diagnostic: Optional[str] = None

    @property
    def feasible(self) -> bool:
        return math.isfinite(self.score)

    def spec(self, kind: str) -> PenaltySpec:
        return PenaltySpec.from_name(kind, self.coefficient, self.alpha)


@dataclass(frozen=True)
class GscvResult:
    """All candidates with their CV scores and the selected one."""

    kind: str
    candidates: Tuple[GscvCandidate, ...]
    best: GscvCandidate
    ties_broken: bool

    def best_spec(self) -> PenaltySpec:
        return self.best.spec(self.kind)

    def to_frame(self) -> pd.DataFrame:
        """Candidates as a table: lambda[,alpha],cv_score,feasible."""
        rows = []
        for candidate in self.candidates:
            row = {"lambda": candidate.coefficient}
            if self.kind == "elastic_net":
                row["alpha"] = candidate.alpha
            row["cv_score"] = candidate.score
            row["feasible"] = candidate.feasible
            rows.append(row)
        return pd.DataFrame(rows)

    def summary(self) -> str:
        alpha = f" alpha={self.best.alpha:g}" if self.best.alpha is not None else ""
        return (
            f"kind={self.kind} lambda={self.best.coefficient:.6g}{alpha} "
            f"cv_score={self.best.score:.6g} ties_broken={str(self.ties_broken).lower()} "
            f"candidates={len(self.candidates)}"
        )


def kfold_partition(n: int, k: int, seed: Optional[int] = config.GSCV_SEED) -> List[np.ndarray]:
    """
    Shuffle 0..n-1 with `seed` and cut it into k balanced folds.

    Returns:
        List[np.ndarray]: k disjoint sorted index arrays whose sizes differ by at most 1

    Raises:
        InvalidArgumentError: Unless 2 <= k <= n
    """
    if not 2 <= k <= n:
        raise InvalidArgumentError(f"Need 2 <= k <= n, got k={k}, n={n}")
    splitter = KFold(n_splits=k, shuffle=True, random_state=seed)
    return [np.sort(test) for _, test in splitter.split(np.arange(n))]


def _cross_validate(
    data: Dataset,
    basis: RegressionBasis,
    spec: PenaltySpec,
    opts: Optional[FitOptions],
    k: int,
    seed: Optional[int]
) -> Tuple[float, Optional[str]]:
    folds = kfold_partition(data.n, k, seed)
    smallest_train = data.n - max(len(fold) for fold in folds)
    if smallest_train < basis.p + 1:
        raise InvalidArgumentError(
            f"Training folds keep {smallest_train} points; the {basis.kind} basis needs {basis.p + 1}"
        )

    everything = np.arange(data.n)
    fold_errors = []
    for v, held_out in enumerate(folds):
        train = np.setdiff1d(everything, held_out)
        try:
            model, _ = fit_trk(data.subset(train), basis, spec, opts)
        except (FitFailedError, IllConditionedCorrelationError, SingularRegressionError, DuplicatePointError) as e:
            diagnostic = getattr(e, "diagnostic", None) or str(e)
            return math.inf, f"fold {v}: {diagnostic}"
        residual = data.responses[held_out] - predict(model, data.points[held_out])
        fold_errors.append(float(np.mean(residual ** 2)))
    return float(np.mean(fold_errors)), None


def cv_score(
    data: Dataset,
    basis: RegressionBasis,
    spec: PenaltySpec,
    opts: Optional[FitOptions] = None,
    k: int = config.GSCV_FOLDS,
    seed: Optional[int] = config.GSCV_SEED
) -> float:
    """
    k-fold cross-validation MSE of a penalty setting.

    Each fold's squared errors are averaged over the fold, then the fold
    means are averaged. A fold whose fit fails makes the score +inf.
    """
    score, diagnostic = _cross_validate(data, basis, spec, opts, k, seed)
    if diagnostic:
        logger.warning(f"CV for {spec.label} is infeasible: {diagnostic}")
    return score


def gscv(
    data: Dataset,
    basis: RegressionBasis,
    kind: str,
    cfg: Optional[GscvConfig] = None,
    opts: Optional[FitOptions] = None
) -> GscvResult:
    """
    Select penalty coefficients by geometric search and k-fold CV.

    Args:
        data: Training dataset
        basis: Regression basis
        kind: lasso, ridge or elastic_net
        cfg: GSCV settings
        opts: Fit options used for every fold fit

    Returns:
        GscvResult: Scored candidates and the argmin (smallest coefficient, then smallest alpha, on ties)

    Raises:
        TuningFailedError: If every candidate is infeasible
    """
    if kind not in TUNABLE_KINDS:
        raise InvalidArgumentError(f"Cannot tune '{kind}'. Use: {', '.join(TUNABLE_KINDS)}")
    cfg = cfg or GscvConfig()
    alphas: Iterable[Optional[float]] = cfg.alphas() if kind == "elastic_net" else [None]
    grid = [(float(c), None if a is None else float(a)) for c in cfg.coefficients() for a in alphas]

    logger.info(f"GSCV {kind}: scoring {len(grid)} candidates with {cfg.k}-fold CV")

    def evaluate(cell: Tuple[float, Optional[float]]) -> GscvCandidate:
        coefficient, alpha = cell
        spec = PenaltySpec.from_name(kind, coefficient, alpha)
        score, diagnostic = _cross_validate(data, basis, spec, opts, cfg.k, cfg.seed)
        return GscvCandidate(coefficient, alpha, score, diagnostic)

    candidates = tuple(ordered_map(evaluate, grid))
    scores = np.array([candidate.score for candidate in candidates])
    if not np.any(np.isfinite(scores)):
        raise TuningFailedError(f"All {len(candidates)} GSCV candidates for {kind} were infeasible")

    best_score = scores.min()
    tied = np.flatnonzero(scores == best_score)
    result = GscvResult(kind, candidates, candidates[int(tied[0])], bool(tied.size > 1))
    logger.info(f"GSCV selected {result.summary()}")
    return result
