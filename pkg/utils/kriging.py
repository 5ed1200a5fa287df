"""
Kriging model core for the TRK toolkit.
Handles datasets and their normalization, the Gaussian correlation kernel,
the regression design, GLS estimation at a fixed theta and the predictor.

All hyperparameters and estimates live in normalized space: inputs and
responses are standardized per column, predictions are mapped back to raw units.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from numpy.linalg import LinAlgError
from scipy.linalg import cholesky, qr, solve_triangular
from scipy.spatial.distance import cdist, pdist, squareform
from sklearn.preprocessing import StandardScaler

import config
from .errors import (
    DuplicatePointError,
    IllConditionedCorrelationError,
    InvalidArgumentError,
    SingularRegressionError,
    UnderdeterminedBasisError,
)

logger = logging.getLogger(__name__)

ArrayLike = Union[float, Sequence[float], np.ndarray]

BASIS_KINDS = ("constant", "linear")


def _frozen(values: np.ndarray) -> np.ndarray:
    values = np.array(values, dtype=float)
    values.setflags(write=False)
    return values


@dataclass(frozen=True, eq=False)
class AffineTransform:
    """Per-column standardization record: normalized = (raw - shift) / scale."""

    shift: np.ndarray
    scale: np.ndarray

    @classmethod
    def fit(cls, values: np.ndarray) -> "AffineTransform":
        """
        Build the transform that maps each column to zero mean, unit variance.

        Args:
            values: n x k array of raw values

        Returns:
            AffineTransform: Record with one shift and scale per column
        """
        scaler = StandardScaler().fit(np.asarray(values, dtype=float))
        return cls(shift=_frozen(scaler.mean_), scale=_frozen(scaler.scale_))

    def apply(self, values: np.ndarray) -> np.ndarray:
        return (np.asarray(values, dtype=float) - self.shift) / self.scale

    def invert(self, values: np.ndarray) -> np.ndarray:
        return np.asarray(values, dtype=float) * self.scale + self.shift


@dataclass(frozen=True, eq=False)
class Dataset:
    """
    Training data: raw design points, raw responses, bounds and normalization.

    Build instances with Dataset.from_arrays so every invariant is checked.
    """

    points: np.ndarray
    responses: np.ndarray
    bounds: np.ndarray
    input_transform: AffineTransform
    output_transform: AffineTransform
    x: np.ndarray  # normalized points
    y: np.ndarray  # normalized responses

    @classmethod
    def from_arrays(
        cls,
        points: np.ndarray,
        responses: np.ndarray,
        bounds: Optional[np.ndarray] = None
    ) -> "Dataset":
        """
        Validate raw arrays and build a normalized dataset.

        Args:
            points: n x D design matrix in raw units (a 1-D array is read as D = 1)
            responses: Length-n response vector
            bounds: Optional D x 2 array of (low, high); inferred from the data if omitted

        Returns:
            Dataset: Immutable dataset

        Raises:
            InvalidArgumentError: If shapes or bounds are invalid
            DuplicatePointError: If two points coincide after normalization
        """
        points = np.asarray(points, dtype=float)
        if points.ndim == 1:
            points = points.reshape(-1, 1)
        responses = np.asarray(responses, dtype=float).ravel()

        if points.ndim != 2 or points.shape[1] < 1:
            raise InvalidArgumentError("points must be an n x D matrix with D >= 1")
        if points.shape[0] < 2:
            raise InvalidArgumentError(f"At least 2 points are required, got {points.shape[0]}")
        if responses.shape[0] != points.shape[0]:
            raise InvalidArgumentError(
                f"responses has length {responses.shape[0]}, expected {points.shape[0]}"
            )
        if not (np.all(np.isfinite(points)) and np.all(np.isfinite(responses))):
            raise InvalidArgumentError("points and responses must be finite")

        if bounds is None:
            bounds = np.column_stack([points.min(axis=0), points.max(axis=0)])
        bounds = np.asarray(bounds, dtype=float).reshape(-1, 2)
        if bounds.shape[0] != points.shape[1]:
            raise InvalidArgumentError(
                f"bounds cover {bounds.shape[0]} dimensions, points have {points.shape[1]}"
            )
        if np.any(bounds[:, 0] >= bounds[:, 1]):
            raise InvalidArgumentError(
                "bounds must satisfy low < high in every dimension "
                "(pass explicit bounds when a column is constant)"
            )

        input_transform = AffineTransform.fit(points)
        output_transform = AffineTransform.fit(responses.reshape(-1, 1))
        x = input_transform.apply(points)
        y = output_transform.apply(responses.reshape(-1, 1)).ravel()

        gaps = pdist(x)
        if gaps.size and gaps.min() < config.DUPLICATE_TOLERANCE:
            i, j = _pair_from_condensed(int(np.argmin(gaps)), points.shape[0])
            raise DuplicatePointError(f"Points {i} and {j} coincide after normalization")

        return cls(
            points=_frozen(points),
            responses=_frozen(responses),
            bounds=_frozen(bounds),
            input_transform=input_transform,
            output_transform=output_transform,
            x=_frozen(x),
            y=_frozen(y),
        )

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dimension(self) -> int:
        return self.points.shape[1]

    def subset(self, indices: Sequence[int]) -> "Dataset":
        """Rows `indices` as a new dataset, renormalized, keeping the bounds."""
        indices = np.asarray(indices, dtype=int)
        return Dataset.from_arrays(self.points[indices], self.responses[indices], self.bounds)


def _pair_from_condensed(k: int, n: int) -> Tuple[int, int]:
    i = 0
    while k >= n - i - 1:
        k -= n - i - 1
        i += 1
    return i, i + 1 + k


@dataclass(frozen=True)
class RegressionBasis:
    """Polynomial trend: constant (p = 1) or linear (p = D + 1)."""

    kind: str
    dimension: int

    def __post_init__(self):
        if self.kind not in BASIS_KINDS:
            raise InvalidArgumentError(f"Unknown basis '{self.kind}'. Use: {', '.join(BASIS_KINDS)}")
        if self.dimension < 1:
            raise InvalidArgumentError("basis dimension must be >= 1")

    @property
    def p(self) -> int:
        return 1 if self.kind == "constant" else self.dimension + 1

    @classmethod
    def constant(cls, dimension: int) -> "RegressionBasis":
        return cls("constant", dimension)

    @classmethod
    def linear(cls, dimension: int) -> "RegressionBasis":
        return cls("linear", dimension)


@dataclass(frozen=True, eq=False)
class Theta:
    """Positive per-dimension correlation parameters inside a box."""

    values: np.ndarray
    lower: float = config.THETA_LOWER
    upper: float = config.THETA_UPPER

    def __post_init__(self):
        values = np.atleast_1d(np.array(self.values, dtype=float)).ravel()
        if not 0 < self.lower <= self.upper:
            raise InvalidArgumentError(f"theta bounds need 0 < low <= high, got ({self.lower}, {self.upper})")
        if values.size < 1 or np.any(values < self.lower) or np.any(values > self.upper):
            raise InvalidArgumentError(
                f"theta values {values.tolist()} outside [{self.lower}, {self.upper}]"
            )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def broadcast(
        cls,
        value: ArrayLike,
        dimension: int,
        lower: float = config.THETA_LOWER,
        upper: float = config.THETA_UPPER
    ) -> "Theta":
        """Scalar or length-D value as a Theta of the given dimension."""
        values = np.atleast_1d(np.asarray(value, dtype=float)).ravel()
        if values.size == 1:
            values = np.full(dimension, values[0])
        if values.size != dimension:
            raise InvalidArgumentError(f"theta has {values.size} entries, expected {dimension}")
        return cls(values, lower, upper)

    @property
    def dimension(self) -> int:
        return self.values.size


def _theta_values(theta: Union["Theta", ArrayLike]) -> np.ndarray:
    if isinstance(theta, Theta):
        return theta.values
    return np.atleast_1d(np.asarray(theta, dtype=float)).ravel()


def correlation(theta: Union[Theta, ArrayLike], xi: ArrayLike, xj: ArrayLike) -> float:
    """
    Gaussian correlation exp(-sum_k theta_k (xi_k - xj_k)^2).

    Raises:
        InvalidArgumentError: If xi, xj and theta disagree on dimension
    """
    weights = _theta_values(theta)
    xi = np.atleast_1d(np.asarray(xi, dtype=float)).ravel()
    xj = np.atleast_1d(np.asarray(xj, dtype=float)).ravel()
    if not xi.size == xj.size == weights.size:
        raise InvalidArgumentError(
            f"Dimension mismatch: theta {weights.size}, xi {xi.size}, xj {xj.size}"
        )
    return float(np.exp(-np.dot(weights, (xi - xj) ** 2)))


def correlation_matrix(theta: Union[Theta, ArrayLike], X: np.ndarray) -> np.ndarray:
    """
    Correlation matrix R with R_ij = correlation(theta, x_i, x_j).

    Args:
        theta: Correlation parameters (length D)
        X: n x D point set

    Returns:
        np.ndarray: Symmetric n x n matrix with unit diagonal
    """
    weights = _theta_values(theta)
    X = _as_matrix(X, weights.size)
    distances = pdist(X * np.sqrt(weights), "sqeuclidean")
    R = squareform(np.exp(-distances))
    np.fill_diagonal(R, 1.0)
    return R


def cross_correlation(theta: Union[Theta, ArrayLike], X: np.ndarray, x: ArrayLike) -> np.ndarray:
    """
    Correlations between query point(s) and the design.

    Args:
        theta: Correlation parameters (length D)
        X: n x D design
        x: One point (length D) or an m x D batch

    Returns:
        np.ndarray: Length-n vector for one point, m x n matrix for a batch
    """
    weights = _theta_values(theta)
    X = _as_matrix(X, weights.size)
    query = np.asarray(x, dtype=float)
    single = query.ndim < 2
    query = _as_matrix(query.reshape(1, -1) if single else query, weights.size)
    scale = np.sqrt(weights)
    r = np.exp(-cdist(query * scale, X * scale, "sqeuclidean"))
    return r[0] if single else r


def _as_matrix(X: np.ndarray, dimension: int) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1 and dimension == 1:
        X = X.reshape(-1, 1)
    if X.ndim != 2 or X.shape[1] != dimension:
        raise InvalidArgumentError(f"Expected points of dimension {dimension}, got shape {X.shape}")
    return X


def design_matrix(basis: RegressionBasis, X: np.ndarray, check_rank: bool = True) -> np.ndarray:
    """
    Regression design F: a column of ones, plus the coordinates for a linear basis.

    Args:
        basis: Regression basis
        X: n x D point set (normalized)
        check_rank: Reject bases with more functions than points

    Returns:
        np.ndarray: n x p matrix

    Raises:
        UnderdeterminedBasisError: If check_rank and p > n
    """
    X = _as_matrix(X, basis.dimension)
    if check_rank and basis.p > X.shape[0]:
        raise UnderdeterminedBasisError(
            f"{basis.kind} basis needs p={basis.p} functions but only {X.shape[0]} points were given"
        )
    ones = np.ones((X.shape[0], 1))
    if basis.kind == "constant":
        return ones
    return np.hstack([ones, X])


def factorize_correlation(R: np.ndarray) -> Tuple[np.ndarray, float]:
    """
    Lower Cholesky factor of R + nugget*I, escalating the nugget on failure.

    Returns:
        Tuple[np.ndarray, float]: (factor, nugget actually used)

    Raises:
        IllConditionedCorrelationError: If every nugget on the ladder fails
    """
    n = R.shape[0]
    scale = float(np.mean(np.diag(R)))
    last_error = None
    for factor in config.NUGGET_LADDER:
        nugget = factor * scale
        try:
            C = cholesky(R + nugget * np.eye(n), lower=True)
        except LinAlgError as e:
            last_error = e
            logger.debug(f"Cholesky failed with nugget {nugget:.1e}: {e}")
            continue
        if nugget > 0:
            logger.debug(f"Cholesky succeeded after raising the nugget to {nugget:.1e}")
        return C, nugget
    raise IllConditionedCorrelationError(
        f"Correlation matrix is not positive definite even with nugget "
        f"{config.NUGGET_LADDER[-1] * scale:.1e}: {last_error}"
    )


@dataclass(frozen=True, eq=False)
class FittedModel:
    """Trained Kriging state at a fixed theta (normalized space)."""

    theta: Theta
    beta: np.ndarray
    sigma2: float
    corr_factor: np.ndarray
    gamma_star: np.ndarray
    basis: RegressionBasis
    inputs: np.ndarray
    outputs: np.ndarray
    input_transform: AffineTransform
    output_transform: AffineTransform
    nugget: float
    regression_factor: np.ndarray  # G from F~ = QG, F~ = C^-1 F
    whitened_design: np.ndarray  # F~

    @property
    def n(self) -> int:
        return self.inputs.shape[0]

    @property
    def dimension(self) -> int:
        return self.inputs.shape[1]

    @property
    def log_det(self) -> float:
        """ln|R + nugget*I| from the Cholesky diagonal."""
        return 2.0 * float(np.sum(np.log(np.diag(self.corr_factor))))


def _as_theta(theta: Union[Theta, ArrayLike], dimension: int) -> Theta:
    if isinstance(theta, Theta):
        if theta.dimension != dimension:
            raise InvalidArgumentError(f"theta has {theta.dimension} entries, expected {dimension}")
        return theta
    return Theta.broadcast(theta, dimension)


def fit_given_theta(
    data: Dataset,
    basis: RegressionBasis,
    theta: Union[Theta, ArrayLike]
) -> FittedModel:
    """
    GLS estimates of beta and sigma^2 at a fixed theta.

    beta = (F^T R^-1 F)^-1 F^T R^-1 y and sigma^2 = (y - F beta)^T R^-1 (y - F beta) / n,
    both computed through the Cholesky factor and a QR of the whitened design.

    Args:
        data: Training dataset
        basis: Regression basis
        theta: Correlation parameters (scalar values are broadcast)

    Returns:
        FittedModel: Model ready for prediction

    Raises:
        IllConditionedCorrelationError: If R cannot be factorized
        SingularRegressionError: If F^T R^-1 F is rank deficient
    """
    if basis.dimension != data.dimension:
        raise InvalidArgumentError(
            f"basis dimension {basis.dimension} does not match data dimension {data.dimension}"
        )
    theta = _as_theta(theta, data.dimension)

    F = design_matrix(basis, data.x)
    C, nugget = factorize_correlation(correlation_matrix(theta, data.x))

    Ft = solve_triangular(C, F, lower=True)
    Q, G = qr(Ft, mode="economic")
    if np.linalg.cond(G) > 1.0 / config.REGRESSION_RCOND:
        raise SingularRegressionError("F^T R^-1 F is singular; choose a smaller basis or more points")

    Yt = solve_triangular(C, data.y, lower=True)
    beta = solve_triangular(G, Q.T @ Yt)
    rho = Yt - Ft @ beta
    sigma2 = max(float(rho @ rho) / data.n, np.finfo(float).tiny)
    gamma_star = solve_triangular(C.T, rho, lower=False)

    return FittedModel(
        theta=theta,
        beta=_frozen(beta),
        sigma2=sigma2,
        corr_factor=_frozen(C),
        gamma_star=_frozen(gamma_star),
        basis=basis,
        inputs=data.x,
        outputs=data.y,
        input_transform=data.input_transform,
        output_transform=data.output_transform,
        nugget=nugget,
        regression_factor=_frozen(G),
        whitened_design=_frozen(Ft),
    )


def _query(model: FittedModel, x: ArrayLike) -> Tuple[np.ndarray, bool]:
    query = np.asarray(x, dtype=float)
    if query.ndim == 0:
        query = query.reshape(1)
    single = query.ndim == 1
    if single:
        if query.size != model.dimension:
            raise InvalidArgumentError(f"Point has {query.size} coordinates, expected {model.dimension}")
        query = query.reshape(1, -1)
    return _as_matrix(query, model.dimension), single


def predict(model: FittedModel, x: ArrayLike) -> Union[float, np.ndarray]:
    """
    Kriging prediction f(x)^T beta + r(x)^T gamma*, in raw output units.

    Args:
        model: Fitted model
        x: One raw point (length D, or a scalar when D = 1) or an m x D batch

    Returns:
        float for one point, np.ndarray of length m for a batch
    """
    points, single = _query(model, x)
    xn = model.input_transform.apply(points)
    f = design_matrix(model.basis, xn, check_rank=False)
    r = cross_correlation(model.theta, model.inputs, xn)
    values = model.output_transform.invert(f @ model.beta + r @ model.gamma_star)
    return float(values[0]) if single else values


def predict_mse(model: FittedModel, x: ArrayLike) -> Union[float, np.ndarray]:
    """
    Universal-Kriging mean squared error of the prediction, in raw output units squared.

    sigma^2 (1 - r^T R^-1 r + u^T (F^T R^-1 F)^-1 u) with u = F^T R^-1 r - f(x).
    Small negative values from round-off are clamped to zero.
    """
    points, single = _query(model, x)
    xn = model.input_transform.apply(points)
    f = design_matrix(model.basis, xn, check_rank=False)
    r = cross_correlation(model.theta, model.inputs, xn)

    rt = solve_triangular(model.corr_factor, r.T, lower=True)
    u = solve_triangular(
        model.regression_factor.T,
        model.whitened_design.T @ rt - f.T,
        lower=True
    )
    mse = model.sigma2 * (1.0 + np.sum(u ** 2, axis=0) - np.sum(rt ** 2, axis=0))

    tolerance = config.MSE_NEGATIVE_TOLERANCE * np.finfo(float).eps * model.sigma2
    if np.any(mse < -tolerance):
        logger.warning(
            f"Predicted MSE reached {mse.min():.3e}; clamping to 0 (correlation matrix is poorly conditioned)"
        )
    mse = np.maximum(mse, 0.0) * float(model.output_transform.scale[0]) ** 2
    return float(mse[0]) if single else mse
