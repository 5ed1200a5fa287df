"""
Penalized likelihood machinery for the TRK toolkit.
Handles penalty terms on theta, the regularized objective, the Gaussian
log-likelihood and its analytic derivatives in theta.
"""

import logging
from dataclasses import dataclass
from typing import Iterable, Optional, Tuple, Union

import numpy as np
from scipy.linalg import cho_solve, qr, solve_triangular

from .errors import IllConditionedCorrelationError, InvalidArgumentError, SingularRegressionError
from .kriging import (
    ArrayLike,
    Dataset,
    FittedModel,
    RegressionBasis,
    Theta,
    _theta_values,
    correlation_matrix,
    design_matrix,
    factorize_correlation,
    fit_given_theta,
)

logger = logging.getLogger(__name__)

PENALTY_KINDS = ("none", "lasso", "ridge", "elastic_net")


@dataclass(frozen=True)
class PenaltySpec:
    """
    Penalty on theta and its coefficients.

    The coefficients are the effective (already rescaled) regularization
    coefficients; only the ones belonging to `kind` are used.
    """

    kind: str = "none"
    lam: float = 0.0
    mu: float = 0.0
    gamma: float = 0.0
    alpha: float = 0.5

    def __post_init__(self):
        if self.kind not in PENALTY_KINDS:
            raise InvalidArgumentError(f"Unknown penalty '{self.kind}'. Use: {', '.join(PENALTY_KINDS)}")
        if min(self.lam, self.mu, self.gamma) < 0:
            raise InvalidArgumentError("penalty coefficients must be nonnegative")
        if not 0.0 <= self.alpha <= 1.0:
            raise InvalidArgumentError(f"alpha must lie in [0, 1], got {self.alpha}")

    @classmethod
    def none(cls) -> "PenaltySpec":
        return cls()

    @classmethod
    def lasso(cls, lam: float) -> "PenaltySpec":
        return cls("lasso", lam=lam)

    @classmethod
    def ridge(cls, mu: float) -> "PenaltySpec":
        return cls("ridge", mu=mu)

    @classmethod
    def elastic_net(cls, gamma: float, alpha: float) -> "PenaltySpec":
        return cls("elastic_net", gamma=gamma, alpha=alpha)

    @classmethod
    def from_name(cls, kind: str, coefficient: float = 0.0, alpha: Optional[float] = None) -> "PenaltySpec":
        """Build a spec from a kind name and its single coefficient."""
        if kind == "none":
            return cls.none()
        if kind == "lasso":
            return cls.lasso(coefficient)
        if kind == "ridge":
            return cls.ridge(coefficient)
        if kind == "elastic_net":
            return cls.elastic_net(coefficient, 0.5 if alpha is None else alpha)
        raise InvalidArgumentError(f"Unknown penalty '{kind}'. Use: {', '.join(PENALTY_KINDS)}")

    @property
    def coefficient(self) -> float:
        return {"none": 0.0, "lasso": self.lam, "ridge": self.mu, "elastic_net": self.gamma}[self.kind]

    @property
    def label(self) -> str:
        if self.kind == "none":
            return "none"
        if self.kind == "elastic_net":
            return f"elastic_net(gamma={self.gamma:g}, alpha={self.alpha:g})"
        return f"{self.kind}({self.coefficient:g})"


def penalty(spec: PenaltySpec, theta: Union[Theta, ArrayLike]) -> float:
    """
    Penalty value summed over dimensions.

    lasso: lam * sum|theta|; ridge: mu * sum theta^2;
    elastic_net: gamma * sum(alpha |theta| + (1 - alpha) theta^2); none: 0.
    """
    magnitude = np.abs(_theta_values(theta))
    if spec.kind == "lasso":
        return spec.lam * float(np.sum(magnitude))
    if spec.kind == "ridge":
        return spec.mu * float(np.sum(magnitude ** 2))
    if spec.kind == "elastic_net":
        return spec.gamma * float(np.sum(spec.alpha * magnitude + (1.0 - spec.alpha) * magnitude ** 2))
    return 0.0


def concentrated_objective(model: FittedModel) -> float:
    """sigma^2 |R|^(1/n) evaluated in the log domain."""
    return float(np.exp(np.log(model.sigma2) + model.log_det / model.n))


def trk_objective(
    data: Dataset,
    basis: RegressionBasis,
    theta: Union[Theta, ArrayLike],
    spec: PenaltySpec
) -> float:
    """
    Regularized objective psi(theta) = sigma^2 |R|^(1/n) + penalty(theta).

    Raises:
        IllConditionedCorrelationError: If R cannot be factorized at theta
    """
    model = fit_given_theta(data, basis, theta)
    return concentrated_objective(model) + penalty(spec, model.theta)


def objective_scan(
    data: Dataset,
    basis: RegressionBasis,
    spec: PenaltySpec,
    thetas: Iterable[ArrayLike]
) -> np.ndarray:
    """
    Objective at every theta in `thetas`; infeasible points score +inf.

    Thetas are taken as given, without clipping to the default box.
    """
    values = []
    for theta in thetas:
        try:
            values.append(trk_objective(data, basis, _free_theta(theta, data.dimension), spec))
        except (IllConditionedCorrelationError, SingularRegressionError):
            values.append(np.inf)
    return np.asarray(values)


def profiled_parameters(model: FittedModel) -> Tuple[np.ndarray, float]:
    """
    beta-hat and sigma^2-hat converted to raw output units.

    The first regression column is the constant, so the output shift lands on beta[0].
    """
    scale = float(model.output_transform.scale[0])
    shift = float(model.output_transform.shift[0])
    beta = np.array(model.beta) * scale
    beta[0] += shift
    return beta, model.sigma2 * scale ** 2


def log_likelihood(
    data: Dataset,
    basis: RegressionBasis,
    theta: Union[Theta, ArrayLike],
    beta: ArrayLike,
    sigma2: float
) -> float:
    """
    Gaussian log-likelihood of the raw responses.

    ln L = -(n/2) ln(2 pi) - (n/2) ln sigma^2 - (1/2) ln|R| - (y - F beta)^T R^-1 (y - F beta) / (2 sigma^2)

    Args:
        data: Training dataset (theta acts on normalized inputs)
        basis: Regression basis
        theta: Correlation parameters
        beta: Trend coefficients in raw output units
        sigma2: Process variance in raw output units

    Returns:
        float: Log-likelihood value
    """
    if sigma2 <= 0:
        raise InvalidArgumentError(f"sigma2 must be positive, got {sigma2}")
    beta = np.atleast_1d(np.asarray(beta, dtype=float))
    if beta.size != basis.p:
        raise InvalidArgumentError(f"beta has {beta.size} entries, basis needs {basis.p}")

    C, _ = factorize_correlation(correlation_matrix(_theta_values(theta), data.x))
    residual = data.responses - design_matrix(basis, data.x) @ beta
    quadratic = float(residual @ cho_solve((C, True), residual))
    log_det = 2.0 * float(np.sum(np.log(np.diag(C))))
    n = data.n
    return -0.5 * n * np.log(2.0 * np.pi) - 0.5 * n * np.log(sigma2) - 0.5 * log_det - quadratic / (2.0 * sigma2)


def profiled_log_likelihood(data: Dataset, basis: RegressionBasis, theta: Union[Theta, ArrayLike]) -> float:
    """Log-likelihood at the GLS estimates for this theta."""
    model = fit_given_theta(data, basis, _free_theta(theta, data.dimension))
    beta, sigma2 = profiled_parameters(model)
    return log_likelihood(data, basis, model.theta, beta, sigma2)


def _squared_differences(x: np.ndarray) -> np.ndarray:
    # D x n x n stack of (x_k^(i) - x_l^(i))^2
    return np.moveaxis((x[:, None, :] - x[None, :, :]) ** 2, 2, 0)


def _free_theta(theta: Union[Theta, ArrayLike], dimension: int) -> Theta:
    # Diagnostics and scans accept any positive theta, not only the fitting box.
    if isinstance(theta, Theta):
        return theta
    values = np.atleast_1d(np.asarray(theta, dtype=float)).ravel()
    if np.any(values <= 0):
        raise InvalidArgumentError(f"theta must be positive, got {values.tolist()}")
    return Theta.broadcast(values, dimension, lower=float(values.min()), upper=float(values.max()))


def _derivative_setup(data: Dataset, basis: RegressionBasis, theta: Union[Theta, ArrayLike]):
    model = fit_given_theta(data, basis, _free_theta(theta, data.dimension))
    K = correlation_matrix(model.theta, data.x)
    S = _squared_differences(data.x)
    R_inv = cho_solve((model.corr_factor, True), np.eye(model.n))
    return model, K, S, R_inv


def likelihood_gradient(data: Dataset, basis: RegressionBasis, theta: Union[Theta, ArrayLike]) -> np.ndarray:
    """
    Gradient of the profiled log-likelihood in theta.

    dL/dtheta_i = (1/2) tr(R^-1 (sigma^-2 e e^T - R) R^-1 dR/dtheta_i),
    with dR/dtheta_i = -(x^(i)_k - x^(i)_l)^2 R_kl and e = y - F beta-hat.

    Returns:
        np.ndarray: Length-D gradient
    """
    model, K, S, R_inv = _derivative_setup(data, basis, theta)
    a = model.gamma_star
    dS = S.reshape(S.shape[0], -1)
    quad = -dS @ (K * np.outer(a, a)).ravel()  # a^T dR_i a
    trace = -dS @ (R_inv * K).ravel()  # tr(R^-1 dR_i)
    return 0.5 * quad / model.sigma2 - 0.5 * trace


def likelihood_hessian(data: Dataset, basis: RegressionBasis, theta: Union[Theta, ArrayLike]) -> np.ndarray:
    """
    Hessian of the profiled log-likelihood in theta.

    Holds the two trace terms of the fixed-(beta, sigma^2) Hessian,
    built from d2R/dtheta_i dtheta_j = (x^(i) diff)^2 (x^(j) diff)^2 R,
    plus the terms from re-estimating beta and sigma^2 at each theta, so it
    is the exact derivative of likelihood_gradient.

    Returns:
        np.ndarray: Symmetric D x D matrix
    """
    model, K, S, R_inv = _derivative_setup(data, basis, theta)
    n = model.n
    sigma2 = model.sigma2
    a = model.gamma_star
    D = S.shape[0]
    flat = S.reshape(D, -1)

    dR = -S * K  # D x n x n
    quad = -flat @ (K * np.outer(a, a)).ravel()

    # P = R^-1 - R^-1 F (F^T R^-1 F)^-1 F^T R^-1
    Q, _ = qr(model.whitened_design, mode="economic")
    Z = Q.T @ solve_triangular(model.corr_factor, np.eye(n), lower=True)
    P = R_inv - Z.T @ Z

    V = dR @ a  # D x n, row i is dR_i a
    M = R_inv @ dR  # D x n x n, slice i is R^-1 dR_i

    second_quad = flat @ (flat * (K * np.outer(a, a)).ravel()).T  # a^T d2R_ij a
    second_trace = flat @ (flat * (R_inv * K).ravel()).T  # tr(R^-1 d2R_ij)
    cross_trace = M.reshape(D, -1) @ np.transpose(M, (0, 2, 1)).reshape(D, -1).T

    H = (
        second_quad / (2.0 * sigma2)
        - (V @ P @ V.T) / sigma2
        + np.outer(quad, quad) / (2.0 * n * sigma2 ** 2)
        - 0.5 * second_trace
        + 0.5 * cross_trace
    )
    return 0.5 * (H + H.T)


@dataclass(frozen=True, eq=False)
class SpectrumReport:
    """Singular values (descending) and the ratio s_1 / s_D."""

    singular_values: np.ndarray
    condition_ratio: float


def singular_spectrum(matrix: np.ndarray) -> SpectrumReport:
    """Singular values of a square matrix, largest first."""
    values = np.linalg.svd(np.atleast_2d(matrix), compute_uv=False)
    smallest = values[-1]
    ratio = float(values[0] / smallest) if smallest > 0 else float("inf")
    return SpectrumReport(singular_values=values, condition_ratio=ratio)


def hessian_spectrum(data: Dataset, basis: RegressionBasis, theta: Union[Theta, ArrayLike]) -> SpectrumReport:
    """Singular values of the likelihood Hessian, used as a conditioning diagnostic."""
    return singular_spectrum(likelihood_hessian(data, basis, theta))
