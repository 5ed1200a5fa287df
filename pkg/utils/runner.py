"""
Experiment orchestration for the TRK toolkit.
Runs a model roster over repeated seeded designs of a benchmark, records
per-repetition metrics, aggregates them and writes the report files.
"""

import logging
import math
import time
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

import config
from .analytics import analytics
from .benchmarks import (
    BenchmarkDef,
    borehole_design,
    get_benchmark,
    metrics,
    steel_column_design,
)
from .errors import InvalidArgumentError, TRKError
from .file_manager import file_manager
from .kriging import BASIS_KINDS, Dataset, RegressionBasis, predict
from .objective import PENALTY_KINDS, PenaltySpec
from .optimizer import FitOptions, fit_trk
from .sampling import DesignRequest, shuffle_split
from .tuner import TUNABLE_KINDS, GscvConfig, gscv, ordered_map

logger = logging.getLogger(__name__)

SIMULATOR_DESIGNS = {
    "borehole": (borehole_design, config.BOREHOLE_SAMPLES),
    "steelcolumn": (steel_column_design, config.STEEL_COLUMN_SAMPLES),
}


@dataclass(frozen=True)
class ModelSpec:
    """One roster entry: a basis and a penalty, fixed or tuned by GSCV."""

    name: str
    basis: str = "constant"
    penalty: str = "none"
    coefficient: float = 0.0
    alpha: Optional[float] = None
    tune: bool = False

    def __post_init__(self):
        if not self.name:
            raise InvalidArgumentError("model name must not be empty")
        if self.basis not in BASIS_KINDS:
            raise InvalidArgumentError(f"{self.name}: unknown basis '{self.basis}'")
        if self.penalty not in PENALTY_KINDS:
            raise InvalidArgumentError(f"{self.name}: unknown penalty '{self.penalty}'")
        if self.tune and self.penalty not in TUNABLE_KINDS:
            raise InvalidArgumentError(f"{self.name}: penalty '{self.penalty}' cannot be tuned")

    def spec(self) -> PenaltySpec:
        return PenaltySpec.from_name(self.penalty, self.coefficient, self.alpha)

    def regression_basis(self, dimension: int) -> RegressionBasis:
        return RegressionBasis(self.basis, dimension)


def default_roster() -> Tuple[ModelSpec, ...]:
    """Universal Kriging plus the three GSCV-tuned TRK variants."""
    return (
        ModelSpec("UK"),
        ModelSpec("TR-LK", penalty="lasso", tune=True),
        ModelSpec("TR-RK", penalty="ridge", tune=True),
        ModelSpec("TR-ENK", penalty="elastic_net", tune=True),
    )


@dataclass(frozen=True)
class ExperimentConfig:
    """
    Everything needed to reproduce one benchmark comparison.

    Analytic benchmarks use n_train LHS training points and n_test LHS test
    points per repetition. Simulators draw n_samples inputs and split them 3:1.
    """

    benchmark: str
    n_train: int = config.N_TRAIN
    n_test: int = config.N_TEST
    repetitions: int = config.REPETITIONS
    models: Tuple[ModelSpec, ...] = field(default_factory=default_roster)
    fit: FitOptions = field(default_factory=FitOptions)
    gscv: GscvConfig = field(default_factory=GscvConfig)
    seed: int = config.MASTER_SEED
    n_samples: Optional[int] = None

    def __post_init__(self):
        definition = get_benchmark(self.benchmark)
        if self.repetitions < 1:
            raise InvalidArgumentError("repetitions must be >= 1")
        if not self.models:
            raise InvalidArgumentError("the model roster is empty")
        names = [model.name for model in self.models]
        if len(set(names)) != len(names):
            raise InvalidArgumentError(f"model names must be unique, got {names}")
        if self.n_test < 2:
            raise InvalidArgumentError("n_test must be >= 2")
        train_size = self.train_size
        for model in self.models:
            needed = model.regression_basis(definition.dimension).p + 1
            if train_size < needed:
                raise InvalidArgumentError(
                    f"{model.name}: {train_size} training points, the {model.basis} basis needs {needed}"
                )

    @property
    def definition(self) -> BenchmarkDef:
        return get_benchmark(self.benchmark)

    @property
    def total_samples(self) -> int:
        if self.benchmark in SIMULATOR_DESIGNS:
            return self.n_samples or SIMULATOR_DESIGNS[self.benchmark][1]
        return self.n_train + self.n_test

    @property
    def train_size(self) -> int:
        if self.benchmark in SIMULATOR_DESIGNS:
            return int(round(config.SIMULATOR_TRAIN_RATIO * self.total_samples))
        return self.n_train

    @classmethod
    def from_dict(cls, document: Dict[str, Any]) -> "ExperimentConfig":
        """
        Build a config from parsed TOML (keys mirror the field names).

        Raises:
            InvalidArgumentError: On unknown keys or invalid values
        """
        document = dict(document)
        known = {f.name for f in fields(cls)}
        unknown = set(document) - known
        if unknown:
            raise InvalidArgumentError(f"Unknown config keys: {', '.join(sorted(unknown))}")
        if "benchmark" not in document:
            raise InvalidArgumentError("config needs a 'benchmark' key")

        try:
            if "models" in document:
                document["models"] = tuple(ModelSpec(**entry) for entry in document["models"])
            if "fit" in document:
                fit = dict(document["fit"])
                if isinstance(fit.get("theta_init"), list):
                    fit["theta_init"] = tuple(fit["theta_init"])
                document["fit"] = FitOptions(**fit)
            if "gscv" in document:
                document["gscv"] = GscvConfig(**document["gscv"])
            return cls(**document)
        except TypeError as e:
            raise InvalidArgumentError(f"Invalid config: {e}") from None

    @classmethod
    def from_toml(cls, path: Path) -> "ExperimentConfig":
        with open(path, "rb") as f:
            try:
                document = tomllib.load(f)
            except tomllib.TOMLDecodeError as e:
                raise InvalidArgumentError(f"{path}: {e}") from None
        return cls.from_dict(document)


@dataclass(frozen=True)
class RunRecord:
    """Outcome of one (model, repetition) fit."""

    model: str
    repetition: int
    seed: int
    status: str
    r2: float = math.nan
    rmse: float = math.nan
    mae: float = math.nan
    theta: Tuple[float, ...] = ()
    coefficient: float = math.nan
    alpha: float = math.nan
    iterations: int = 0
    wall_time: float = 0.0
    diagnostic: str = ""


@dataclass(frozen=True)
class ExperimentReport:
    config: ExperimentConfig
    records: Tuple[RunRecord, ...]

    def runs_frame(self) -> pd.DataFrame:
        """Per-repetition rows; wall time lives in timings_frame."""
        rows = []
        for record in self.records:
            rows.append({
                "model": record.model,
                "repetition": record.repetition,
                "seed": record.seed,
                "status": record.status,
                "r2": record.r2,
                "rmse": record.rmse,
                "mae": record.mae,
                "theta": ";".join(repr(float(t)) for t in record.theta),
                "coefficient": record.coefficient,
                "alpha": record.alpha,
                "iterations": record.iterations,
                "diagnostic": record.diagnostic,
            })
        return pd.DataFrame(rows)

    def timings_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [{"model": r.model, "repetition": r.repetition, "wall_time": r.wall_time} for r in self.records]
        )

    def aggregate(self) -> pd.DataFrame:
        return analytics.aggregate(self.runs_frame(), [model.name for model in self.config.models])


def repetition_seeds(master_seed: int, repetitions: int) -> List[Tuple[int, int]]:
    """Independent (design seed, test seed) pairs derived from the master seed."""
    children = np.random.SeedSequence(master_seed).spawn(repetitions)
    return [tuple(int(s) for s in child.generate_state(2)) for child in children]


def build_designs(cfg: ExperimentConfig, design_seed: int, test_seed: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """
    Training and test arrays for one repetition, shared by every model.

    Returns:
        Tuple: (train points, train responses, test points, test responses)
    """
    definition = cfg.definition
    if cfg.benchmark in SIMULATOR_DESIGNS:
        generator, _ = SIMULATOR_DESIGNS[cfg.benchmark]
        points = generator(cfg.total_samples, design_seed)
        responses = definition.evaluate(points)
        train, test = shuffle_split(cfg.total_samples, config.SIMULATOR_TRAIN_RATIO, test_seed)
        return points[train], responses[train], points[test], responses[test]

    train_points = DesignRequest(cfg.n_train, definition.dimension, design_seed, definition.bounds).generate()
    test_points = DesignRequest(cfg.n_test, definition.dimension, test_seed, definition.bounds).generate()
    return train_points, definition.evaluate(train_points), test_points, definition.evaluate(test_points)


def _run_model(
    cfg: ExperimentConfig,
    model_spec: ModelSpec,
    repetition: int,
    seed: int,
    data: Dataset,
    test_points: np.ndarray,
    test_responses: np.ndarray
) -> RunRecord:
    start = time.perf_counter()
    basis = model_spec.regression_basis(data.dimension)
    try:
        spec = model_spec.spec()
        if model_spec.tune:
            spec = gscv(data, basis, model_spec.penalty, cfg.gscv, cfg.fit).best_spec()
        model, trace = fit_trk(data, basis, spec, cfg.fit)
        report = metrics(test_responses, predict(model, test_points))
    except TRKError as e:
        diagnostic = getattr(e, "diagnostic", None) or str(e)
        logger.warning(f"{model_spec.name} failed in repetition {repetition}: {diagnostic}")
        return RunRecord(
            model_spec.name, repetition, seed, "failed",
            wall_time=time.perf_counter() - start, diagnostic=diagnostic
        )

    return RunRecord(
        model=model_spec.name,
        repetition=repetition,
        seed=seed,
        status="ok",
        r2=math.nan if report.r2 is None else report.r2,
        rmse=report.rmse,
        mae=report.mae,
        theta=tuple(float(t) for t in model.theta.values),
        coefficient=spec.coefficient,
        alpha=spec.alpha if spec.kind == "elastic_net" else math.nan,
        iterations=trace.iterations,
        wall_time=time.perf_counter() - start,
    )


def _run_repetition(cfg: ExperimentConfig, repetition: int, seeds: Tuple[int, int]) -> List[RunRecord]:
    design_seed, test_seed = seeds
    logger.info(f"{cfg.benchmark}: repetition {repetition + 1}/{cfg.repetitions}")
    train_points, train_responses, test_points, test_responses = build_designs(cfg, design_seed, test_seed)
    try:
        data = Dataset.from_arrays(train_points, train_responses, np.asarray(cfg.definition.bounds))
    except TRKError as e:
        return [
            RunRecord(model.name, repetition, design_seed, "failed", diagnostic=str(e))
            for model in cfg.models
        ]
    return [
        _run_model(cfg, model, repetition, design_seed, data, test_points, test_responses)
        for model in cfg.models
    ]


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """
    Run every roster model on every repetition of a benchmark.

    Within a repetition all models see the same training and test arrays.
    GSCV runs on the repetition's training set only. A failed fit is kept as
    a failed row and left out of the aggregates.

    Args:
        cfg: Experiment configuration

    Returns:
        ExperimentReport: Per-repetition records in (repetition, roster) order
    """
    logger.info(
        f"Experiment on {cfg.benchmark}: {len(cfg.models)} model(s) x {cfg.repetitions} repetition(s), "
        f"train={cfg.train_size}"
    )
    seeds = repetition_seeds(cfg.seed, cfg.repetitions)
    batches = ordered_map(lambda r: _run_repetition(cfg, r, seeds[r]), list(range(cfg.repetitions)))
    records = tuple(record for batch in batches for record in batch)
    return ExperimentReport(config=cfg, records=records)


def sensitivity_sweep(
    benchmark: str,
    kind: str,
    coefficients: Sequence[float],
    alphas: Optional[Sequence[float]] = None,
    n_train: int = config.N_TRAIN,
    n_test: int = config.N_TEST,
    seed: int = config.MASTER_SEED,
    basis_kind: str = "constant",
    opts: Optional[FitOptions] = None
) -> pd.DataFrame:
    """
    Test-set accuracy over a grid of penalty settings on one fixed design.

    Args:
        benchmark: Registered benchmark name
        kind: lasso, ridge or elastic_net
        coefficients: Penalty coefficients to try
        alphas: Elastic-net mixing values (default: the GSCV alpha grid)
        n_train: Training points (simulators use their 3:1 split instead)
        n_test: Test points for analytic benchmarks
        seed: Design seed shared by every cell
        basis_kind: constant or linear
        opts: Fit options

    Returns:
        pd.DataFrame: Columns coefficient[, alpha], rmse, mae, r2, status; failed cells hold NaN
    """
    if kind not in TUNABLE_KINDS:
        raise InvalidArgumentError(f"Cannot sweep '{kind}'. Use: {', '.join(TUNABLE_KINDS)}")
    if not coefficients:
        raise InvalidArgumentError("coefficient list is empty")
    cfg = ExperimentConfig(
        benchmark=benchmark,
        n_train=n_train,
        n_test=n_test,
        repetitions=1,
        models=(ModelSpec("sweep", basis=basis_kind),),
        fit=opts or FitOptions(),
        seed=seed,
    )
    design_seed, test_seed = repetition_seeds(seed, 1)[0]
    train_points, train_responses, test_points, test_responses = build_designs(cfg, design_seed, test_seed)
    data = Dataset.from_arrays(train_points, train_responses, np.asarray(cfg.definition.bounds))
    basis = RegressionBasis(basis_kind, data.dimension)

    if kind == "elastic_net":
        alpha_grid = list(alphas) if alphas is not None else GscvConfig().alphas().tolist()
        grid = [(float(c), float(a)) for c in coefficients for a in alpha_grid]
    else:
        grid = [(float(c), None) for c in coefficients]

    logger.info(f"Sensitivity sweep on {benchmark}: {kind}, {len(grid)} cell(s)")

    def evaluate(cell: Tuple[float, Optional[float]]) -> Dict[str, Any]:
        coefficient, alpha = cell
        row: Dict[str, Any] = {"coefficient": coefficient}
        if kind == "elastic_net":
            row["alpha"] = alpha
        try:
            model, _ = fit_trk(data, basis, PenaltySpec.from_name(kind, coefficient, alpha), cfg.fit)
            report = metrics(test_responses, predict(model, test_points))
            row.update(rmse=report.rmse, mae=report.mae, r2=math.nan if report.r2 is None else report.r2, status="ok")
        except TRKError as e:
            logger.warning(f"Sweep cell {cell} failed: {e}")
            row.update(rmse=math.nan, mae=math.nan, r2=math.nan, status="failed")
        return row

    return pd.DataFrame(ordered_map(evaluate, grid))


def emit_report(report: ExperimentReport, out_dir: Path) -> List[Path]:
    """
    Write runs.csv, aggregate.csv and timings.csv.

    runs.csv and aggregate.csv depend only on the configuration, so re-running
    the same config reproduces them byte for byte.

    Raises:
        OSError: If the directory cannot be written
    """
    out_dir = file_manager.ensure_dir(out_dir)
    return [
        file_manager.write_table(out_dir / "runs.csv", report.runs_frame()),
        file_manager.write_table(out_dir / "aggregate.csv", report.aggregate()),
        file_manager.write_table(out_dir / "timings.csv", report.timings_frame()),
    ]
