"""
Tests for GSCV: candidate grids, fold partitions and argmin selection.
"""

import math

import numpy as np
import pytest

from utils import tuner
from utils.errors import InvalidArgumentError, TuningFailedError
from utils.kriging import Dataset, RegressionBasis, predict
from utils.objective import PenaltySpec
from utils.optimizer import fit_trk
from utils.tuner import GscvConfig, cv_score, gscv, kfold_partition, ordered_map


class TestGscvConfig:

    def test_default_sequence_spans_ten_orders(self):
        coefficients = GscvConfig().coefficients()
        assert coefficients.size == 21
        assert coefficients[0] == pytest.approx(1e-5, rel=1e-12)
        assert coefficients[-1] == pytest.approx(1e5, rel=1e-9)
        assert np.allclose(coefficients[1:] / coefficients[:-1], 10 ** 0.5)

    def test_alpha_grid(self):
        alphas = GscvConfig().alphas()
        assert alphas.size == 21
        assert alphas[0] == 0.0 and alphas[-1] == 1.0
        assert GscvConfig(alpha_step=0.3).alphas().tolist() == [0.0, 0.3, 0.6, 0.9, 1.0]

    @pytest.mark.parametrize("kwargs", [{"k": 1}, {"a0": 0.0}, {"q": 1.0}, {"n_terms": 0}, {"alpha_step": 0.0}])
    def test_invalid(self, kwargs):
        with pytest.raises(InvalidArgumentError):
            GscvConfig(**kwargs)


class TestFolds:

    def test_balanced_disjoint_cover(self):
        folds = kfold_partition(23, 5, seed=3)
        sizes = sorted(len(fold) for fold in folds)
        assert sizes[-1] - sizes[0] <= 1
        merged = np.concatenate(folds)
        assert sorted(merged.tolist()) == list(range(23))

    def test_deterministic(self):
        first = kfold_partition(30, 5, seed=11)
        second = kfold_partition(30, 5, seed=11)
        assert all(np.array_equal(a, b) for a, b in zip(first, second))

    def test_k_larger_than_n(self):
        with pytest.raises(InvalidArgumentError):
            kfold_partition(4, 5)

    def test_training_folds_too_small_for_basis(self, forrester_data):
        with pytest.raises(InvalidArgumentError):
            cv_score(forrester_data.subset([0, 1]), RegressionBasis.constant(1), PenaltySpec.none(), k=2)


class TestCvScore:

    def test_exact_regression_trend_scores_zero(self, forrester_data, quick_options):
        responses = 2.0 - 3.0 * forrester_data.points[:, 0]
        data = Dataset.from_arrays(forrester_data.points, responses, forrester_data.bounds)
        score = cv_score(data, RegressionBasis.linear(1), PenaltySpec.ridge(1e-2), quick_options, k=5, seed=2)
        assert 0.0 <= score <= 1e-12 * np.var(responses)

    def test_leave_one_out_matches_hand_refits(self, forrester_data, quick_options):
        basis = RegressionBasis.constant(1)
        spec = PenaltySpec.ridge(1e-2)
        n = forrester_data.n
        errors = []
        for i in range(n):
            model, _ = fit_trk(forrester_data.subset(np.delete(np.arange(n), i)), basis, spec, quick_options)
            errors.append((forrester_data.responses[i] - predict(model, forrester_data.points[i])) ** 2)
        score = cv_score(forrester_data, basis, spec, quick_options, k=n, seed=9)
        assert score == pytest.approx(np.mean(errors), rel=1e-12)

    def test_equal_specs_score_identically(self, forrester_data, quick_options):
        basis = RegressionBasis.constant(1)
        first = cv_score(forrester_data, basis, PenaltySpec.elastic_net(0.1, 0.5), quick_options, k=4, seed=1)
        second = cv_score(forrester_data, basis, PenaltySpec.elastic_net(0.1, 0.5), quick_options, k=4, seed=1)
        assert first == second
        assert math.isfinite(first)


class TestGscv:

    @pytest.fixture
    def small_config(self) -> GscvConfig:
        return GscvConfig(k=3, a0=1e-2, q=10.0, n_terms=3, alpha_step=0.5, seed=5)

    @pytest.mark.parametrize("kind", ["lasso", "ridge"])
    def test_selection_is_exhaustive_argmin(self, forrester_data, small_config, quick_options, kind):
        basis = RegressionBasis.constant(1)
        result = gscv(forrester_data, basis, kind, small_config, quick_options)
        scores = [
            cv_score(forrester_data, basis, PenaltySpec.from_name(kind, c), quick_options, small_config.k, small_config.seed)
            for c in small_config.coefficients()
        ]
        assert [candidate.score for candidate in result.candidates] == scores
        assert result.best.coefficient == small_config.coefficients()[int(np.argmin(scores))]
        assert result.best.alpha is None

    def test_elastic_net_grid(self, forrester_data, small_config, quick_options):
        basis = RegressionBasis.constant(1)
        result = gscv(forrester_data, basis, "elastic_net", small_config, quick_options)
        assert len(result.candidates) == 4 * 3
        cells = [(c.coefficient, c.alpha) for c in result.candidates]
        assert cells[:3] == [(1e-2, 0.0), (1e-2, 0.5), (1e-2, 1.0)]
        scores = np.array([c.score for c in result.candidates])
        assert result.best is result.candidates[int(np.argmin(scores))]
        frame = result.to_frame()
        assert list(frame.columns) == ["lambda", "alpha", "cv_score", "feasible"]

    def test_best_spec(self, forrester_data, small_config, quick_options):
        result = gscv(forrester_data, RegressionBasis.constant(1), "ridge", small_config, quick_options)
        assert result.best_spec() == PenaltySpec.ridge(result.best.coefficient)
        assert "kind=ridge" in result.summary()

    def test_ties_take_first_candidate(self, forrester_data, small_config, monkeypatch):
        monkeypatch.setattr(tuner, "_cross_validate", lambda *args: (1.0, None))
        result = gscv(forrester_data, RegressionBasis.constant(1), "lasso", small_config)
        assert result.ties_broken
        assert result.best.coefficient == small_config.coefficients()[0]

    def test_all_infeasible(self, forrester_data, small_config, monkeypatch):
        monkeypatch.setattr(tuner, "_cross_validate", lambda *args: (math.inf, "fold 0: failed"))
        with pytest.raises(TuningFailedError):
            gscv(forrester_data, RegressionBasis.constant(1), "ridge", small_config)

    def test_untunable_kind(self, forrester_data):
        with pytest.raises(InvalidArgumentError):
            gscv(forrester_data, RegressionBasis.constant(1), "none")


def test_ordered_map_keeps_order():
    assert ordered_map(lambda x: x * x, list(range(20)), workers=4) == [x * x for x in range(20)]
    assert ordered_map(lambda x: -x, [3, 1, 2], workers=1) == [-3, -1, -2]
