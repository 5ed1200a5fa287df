"""
Tests for penalties, the regularized objective, the log-likelihood and its derivatives.
"""

import math

import numpy as np
import pytest

from tests.conftest import benchmark_dataset, well_conditioned_instance
from utils.errors import InvalidArgumentError
from utils.kriging import Dataset, RegressionBasis, fit_given_theta
from utils.objective import (
    PenaltySpec,
    concentrated_objective,
    hessian_spectrum,
    likelihood_gradient,
    likelihood_hessian,
    log_likelihood,
    objective_scan,
    penalty,
    profiled_log_likelihood,
    profiled_parameters,
    singular_spectrum,
    trk_objective,
)


class TestPenalty:

    def test_values(self):
        theta = [1.0, 3.0]
        assert penalty(PenaltySpec.none(), theta) == 0.0
        assert penalty(PenaltySpec.lasso(2.0), theta) == 8.0
        assert penalty(PenaltySpec.ridge(2.0), theta) == 20.0
        assert penalty(PenaltySpec.elastic_net(2.0, 0.25), theta) == pytest.approx(17.0, rel=1e-15)

    @pytest.mark.parametrize("coefficient", [0.0, 1e-5, 0.37, 10.0, 1e5])
    def test_elastic_net_reduces_exactly(self, coefficient, rng):
        theta = rng.uniform(0.01, 100.0, size=5)
        assert penalty(PenaltySpec.elastic_net(coefficient, 1.0), theta) == penalty(PenaltySpec.lasso(coefficient), theta)
        assert penalty(PenaltySpec.elastic_net(coefficient, 0.0), theta) == penalty(PenaltySpec.ridge(coefficient), theta)

    def test_validation(self):
        with pytest.raises(InvalidArgumentError):
            PenaltySpec("group_lasso")
        with pytest.raises(InvalidArgumentError):
            PenaltySpec.ridge(-1.0)
        with pytest.raises(InvalidArgumentError):
            PenaltySpec.elastic_net(1.0, 1.5)

    def test_from_name(self):
        assert PenaltySpec.from_name("ridge", 3.0) == PenaltySpec.ridge(3.0)
        assert PenaltySpec.from_name("elastic_net", 3.0, 0.2) == PenaltySpec.elastic_net(3.0, 0.2)
        assert PenaltySpec.from_name("none", 5.0).coefficient == 0.0


class TestObjective:

    def test_unpenalized_objective_is_concentrated_likelihood(self, forrester_data):
        basis = RegressionBasis.constant(1)
        model = fit_given_theta(forrester_data, basis, 5.0)
        expected = model.sigma2 * math.exp(model.log_det / model.n)
        assert trk_objective(forrester_data, basis, 5.0, PenaltySpec.none()) == pytest.approx(expected, rel=1e-12)
        assert concentrated_objective(model) == pytest.approx(expected, rel=1e-12)

    def test_zero_coefficient_matches_uk(self, forrester_data):
        basis = RegressionBasis.constant(1)
        uk = trk_objective(forrester_data, basis, 5.0, PenaltySpec.none())
        for spec in (PenaltySpec.lasso(0.0), PenaltySpec.ridge(0.0), PenaltySpec.elastic_net(0.0, 0.3)):
            assert trk_objective(forrester_data, basis, 5.0, spec) == uk

    def test_penalty_adds_on_top(self, forrester_data):
        basis = RegressionBasis.constant(1)
        uk = trk_objective(forrester_data, basis, 5.0, PenaltySpec.none())
        ridge = trk_objective(forrester_data, basis, 5.0, PenaltySpec.ridge(10.0))
        assert ridge == pytest.approx(uk + 250.0, rel=1e-12)

    def test_scan_matches_pointwise(self, forrester_data):
        basis = RegressionBasis.constant(1)
        spec = PenaltySpec.lasso(0.5)
        thetas = [0.1, 1.0, 10.0]
        values = objective_scan(forrester_data, basis, spec, thetas)
        assert values.shape == (3,)
        for theta, value in zip(thetas, values):
            assert value == pytest.approx(trk_objective(forrester_data, basis, theta, spec), rel=1e-12)

    @pytest.mark.parametrize("spec", [PenaltySpec.none(), PenaltySpec.lasso(0.3), PenaltySpec.ridge(0.5)])
    def test_two_point_closed_form(self, spec):
        # Normalized data is x = (-1, 1), y = (-1, 1), so beta = 0 and psi = sqrt((1 + rho) / (1 - rho))
        data = Dataset.from_arrays(np.array([0.2, 0.7]), np.array([3.0, 5.0]))
        basis = RegressionBasis.constant(1)
        for theta in (0.05, 0.3, 1.0, 4.0):
            rho = math.exp(-4.0 * theta)
            expected = math.sqrt((1.0 + rho) / (1.0 - rho)) + penalty(spec, [theta])
            assert trk_objective(data, basis, theta, spec) == pytest.approx(expected, rel=1e-10)

    def test_objective_and_likelihood_grids_agree(self, forrester_data):
        basis = RegressionBasis.constant(1)
        thetas = np.logspace(0.0, 1.5, 25)
        objective = objective_scan(forrester_data, basis, PenaltySpec.none(), thetas)
        likelihood = np.array([profiled_log_likelihood(forrester_data, basis, t) for t in thetas])
        assert int(np.argmin(objective)) == int(np.argmax(likelihood))
        # ln L = -(n/2) ln psi + constant
        offset = likelihood + 0.5 * forrester_data.n * np.log(objective)
        assert np.ptp(offset) <= 1e-6 * np.max(np.abs(offset))

    @pytest.mark.parametrize("kind", ["lasso", "ridge", "elastic_net"])
    def test_objective_increases_with_coefficient(self, forrester_data, kind):
        basis = RegressionBasis.constant(1)
        coefficients = [0.0, 1e-3, 0.1, 1.0, 10.0, 1e3]
        for theta in (0.05, 2.0, 40.0):
            values = [trk_objective(forrester_data, basis, theta, PenaltySpec.from_name(kind, c, 0.4)) for c in coefficients]
            assert np.all(np.diff(values) > 0)

    @pytest.mark.parametrize("seed", range(5))
    def test_ridge_grid_minimizer_shrinks_with_mu(self, seed):
        data = benchmark_dataset("forrester", 10, seed=seed)
        basis = RegressionBasis.constant(1)
        thetas = np.logspace(-2, 2, 161)
        path = []
        for mu in (0.0, 1e-2, 0.1, 1.0, 10.0, 100.0):
            values = objective_scan(data, basis, PenaltySpec.ridge(mu), thetas)
            path.append(thetas[int(np.argmin(values))])
        assert np.all(np.diff(path) <= 0)
        assert path[-1] < path[0]


class TestLogLikelihood:

    def test_profiled_parameters_maximize(self, branin_like_data):
        basis = RegressionBasis.linear(2)
        theta = [2.0, 3.0]
        best = profiled_log_likelihood(branin_like_data, basis, theta)
        model = fit_given_theta(branin_like_data, basis, theta)
        beta, sigma2 = profiled_parameters(model)
        assert log_likelihood(branin_like_data, basis, theta, beta, sigma2) == pytest.approx(best, rel=1e-12)
        assert log_likelihood(branin_like_data, basis, theta, beta + 0.1, sigma2) < best
        assert log_likelihood(branin_like_data, basis, theta, beta, 1.2 * sigma2) < best
        assert log_likelihood(branin_like_data, basis, theta, beta, 0.8 * sigma2) < best

    def test_output_scaling_shifts_by_n_log_c(self, branin_like_data):
        basis = RegressionBasis.constant(2)
        c = 10.0
        scaled = Dataset.from_arrays(branin_like_data.points, c * branin_like_data.responses, branin_like_data.bounds)
        base = profiled_log_likelihood(branin_like_data, basis, [2.0, 3.0])
        shifted = profiled_log_likelihood(scaled, basis, [2.0, 3.0])
        assert shifted - base == pytest.approx(-branin_like_data.n * math.log(c), rel=1e-9)

    def test_rejects_bad_parameters(self, forrester_data):
        basis = RegressionBasis.constant(1)
        with pytest.raises(InvalidArgumentError):
            log_likelihood(forrester_data, basis, 1.0, [0.0], 0.0)
        with pytest.raises(InvalidArgumentError):
            log_likelihood(forrester_data, basis, 1.0, [0.0, 1.0], 1.0)


def _central_gradient(data, basis, theta, step=1e-5):
    gradient = np.zeros_like(theta)
    for k in range(theta.size):
        h = step * theta[k]
        up, down = theta.copy(), theta.copy()
        up[k] += h
        down[k] -= h
        gradient[k] = (profiled_log_likelihood(data, basis, up) - profiled_log_likelihood(data, basis, down)) / (2 * h)
    return gradient


def _central_hessian(data, basis, theta, step=1e-5):
    D = theta.size
    hessian = np.zeros((D, D))
    for k in range(D):
        h = step * theta[k]
        up, down = theta.copy(), theta.copy()
        up[k] += h
        down[k] -= h
        hessian[:, k] = (likelihood_gradient(data, basis, up) - likelihood_gradient(data, basis, down)) / (2 * h)
    return hessian


def _instances(count=21):
    rng = np.random.default_rng(99)
    for i in range(count):
        dimension = 1 + i % 3
        n = int(rng.integers(5, 9)) if dimension == 1 else int(rng.integers(6, 13))
        yield well_conditioned_instance(rng, dimension, n)


def _difference_noise(magnitude, theta, step=1e-5):
    """Round-off floor of a central difference with relative step `step`."""
    return 1e2 * np.finfo(float).eps * max(magnitude, 1.0) / (step * float(np.min(theta)))


class TestDerivatives:

    def test_gradient_matches_finite_differences(self):
        for data, theta in _instances():
            for basis in (RegressionBasis.constant(data.dimension), RegressionBasis.linear(data.dimension)):
                if basis.p + 1 > data.n:
                    continue
                analytic = likelihood_gradient(data, basis, theta)
                numeric = _central_gradient(data, basis, theta)
                noise = _difference_noise(abs(profiled_log_likelihood(data, basis, theta)), theta)
                assert np.linalg.norm(analytic - numeric) <= 1e-5 * np.linalg.norm(numeric) + noise

    def test_hessian_matches_finite_differences(self):
        for data, theta in _instances():
            basis = RegressionBasis.constant(data.dimension)
            analytic = likelihood_hessian(data, basis, theta)
            numeric = _central_hessian(data, basis, theta)
            noise = _difference_noise(np.linalg.norm(likelihood_gradient(data, basis, theta)), theta)
            assert np.linalg.norm(analytic - numeric) <= 1e-4 * np.linalg.norm(numeric) + noise

    def test_hessian_is_symmetric(self, branin_like_data):
        H = likelihood_hessian(branin_like_data, RegressionBasis.linear(2), [2.0, 3.0])
        assert np.allclose(H, H.T)

    def test_gradient_accepts_theta_outside_fit_box(self, forrester_data):
        gradient = likelihood_gradient(forrester_data, RegressionBasis.constant(1), [500.0])
        assert gradient.shape == (1,)
        assert np.all(np.isfinite(gradient))


class TestSpectrum:

    def test_singular_spectrum(self):
        report = singular_spectrum(np.diag([1.0, 3.0, 2.0]))
        assert np.allclose(report.singular_values, [3.0, 2.0, 1.0])
        assert report.condition_ratio == pytest.approx(3.0)

    def test_singular_matrix_ratio_is_infinite(self):
        assert singular_spectrum(np.zeros((2, 2))).condition_ratio == math.inf

    def test_hessian_spectrum_shape(self):
        data = benchmark_dataset("trid", 30, seed=3)
        report = hessian_spectrum(data, RegressionBasis.constant(8), 1.0)
        assert report.singular_values.shape == (8,)
        assert np.all(np.diff(report.singular_values) <= 0)
