import math

import numpy as np
import pytest

from powsec.econometrics import add_intercept, ols
from powsec.errors import NumericError


class TestExactFits:
    def test_perfect_line_through_origin_slope(self):
        x = np.arange(1.0, 11.0)
        fit = ols(2.0 * x, x[:, None], names=["x"], intercept=True)
        assert fit.coef("x") == pytest.approx(2.0, abs=1e-12)
        assert fit.coef("const") == pytest.approx(0.0, abs=1e-12)
        assert fit.rsquared == pytest.approx(1.0, abs=1e-12)

    def test_three_point_hand_solve(self):
        x = np.array([0.0, 1.0, 2.0])
        y = np.array([1.0, 3.0, 5.0])
        fit = ols(y, x[:, None], names=["x"], intercept=True)
        assert fit.coef("const") == pytest.approx(1.0, abs=1e-12)
        assert fit.coef("x") == pytest.approx(2.0, abs=1e-12)
        assert fit.ssr == pytest.approx(0.0, abs=1e-20)


class TestAgainstNormalEquations:
    def test_random_systems(self, rng):
        for _ in range(25):
            T, k = 120, 6
            X = rng.standard_normal((T, k))
            y = X @ rng.standard_normal(k) + rng.standard_normal(T)
            fit = ols(y, X, intercept=True)
            Xi = add_intercept(X)
            oracle = np.linalg.solve(Xi.T @ Xi, Xi.T @ y)
            assert np.max(np.abs(fit.params - oracle)) <= 1e-8 * max(1, np.abs(oracle).max())
            resid = y - Xi @ oracle
            oracle_sigma2 = resid @ resid / (T - Xi.shape[1])
            oracle_se = np.sqrt(np.diag(oracle_sigma2 * np.linalg.inv(Xi.T @ Xi)))
            assert np.max(np.abs(fit.stderr - oracle_se)) <= 1e-8

    def test_residuals_orthogonal_to_design(self, rng):
        X = rng.standard_normal((200, 4))
        y = rng.standard_normal(200)
        fit = ols(y, X, intercept=True)
        scale = np.abs(fit.design).max() * np.abs(fit.residuals).max()
        assert np.max(np.abs(fit.design.T @ fit.residuals)) <= 1e-8 * max(scale, 1.0)

    def test_fitted_plus_residuals_reconstruct_y(self, rng):
        X = rng.standard_normal((50, 3))
        y = rng.standard_normal(50)
        fit = ols(y, X, intercept=True)
        assert np.allclose(fit.fitted + fit.residuals, y, atol=1e-12)


class TestConventions:
    def test_aic_definition(self, rng):
        X = rng.standard_normal((80, 2))
        y = rng.standard_normal(80)
        fit = ols(y, X, intercept=True)
        assert fit.aic == pytest.approx(80 * math.log(fit.ssr / 80) + 2 * 3, abs=1e-10)

    def test_loglike_gaussian(self, rng):
        X = rng.standard_normal((60, 1))
        y = rng.standard_normal(60)
        fit = ols(y, X, intercept=True)
        sigma2 = fit.ssr / 60
        expected = -0.5 * 60 * (math.log(2 * math.pi * sigma2) + 1.0)
        assert fit.loglike == pytest.approx(expected, abs=1e-10)

    def test_tstats_are_coef_over_se(self, rng):
        X = rng.standard_normal((90, 3))
        y = X @ np.array([1.0, 0.0, -2.0]) + rng.standard_normal(90)
        fit = ols(y, X, intercept=True)
        assert np.allclose(fit.tstats, fit.params / fit.stderr, equal_nan=True)

    def test_adjusted_rsquared(self, rng):
        X = rng.standard_normal((70, 2))
        y = rng.standard_normal(70)
        fit = ols(y, X, intercept=True)
        expected = 1 - (1 - fit.rsquared) * 69 / (70 - 3)
        assert fit.rsquared_adj == pytest.approx(expected)


class TestErrors:
    def test_zero_column_named_in_rank_error(self, rng):
        X = np.column_stack([rng.standard_normal(40), np.zeros(40)])
        with pytest.raises(NumericError, match="dead"):
            ols(rng.standard_normal(40), X, names=["ok", "dead"], intercept=True)

    def test_duplicate_column_rank_error(self, rng):
        x = rng.standard_normal(40)
        with pytest.raises(NumericError, match="rank deficient"):
            ols(rng.standard_normal(40), np.column_stack([x, x]), intercept=True)

    def test_more_params_than_observations(self, rng):
        X = rng.standard_normal((4, 5))
        with pytest.raises(NumericError, match="more observations"):
            ols(rng.standard_normal(4), X, intercept=False)

    def test_shape_mismatch(self, rng):
        with pytest.raises(NumericError, match="rows"):
            ols(rng.standard_normal(5), rng.standard_normal((6, 2)))

    def test_unknown_name_lookup(self, rng):
        fit = ols(rng.standard_normal(30), rng.standard_normal((30, 1)), names=["x"])
        with pytest.raises(NumericError, match="no regressor"):
            fit.coef("ghost")
