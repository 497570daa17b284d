import math

import numpy as np
import pytest

from powsec.econometrics import (
    breusch_godfrey,
    breusch_pagan,
    cusum,
    diagnostics_report,
    durbin_alternative,
    jarque_bera,
    ols,
    recursive_residuals,
    replicate,
)
from powsec.errors import NumericError

from mc_helpers import (
    bg_power_rep,
    bg_size_rep,
    bp_power_rep,
    bp_size_rep,
    cusum_break_rep,
    cusum_null_rep,
    jb_power_rep,
    regression_fixture,
)


def brute_force_recursive_residuals(X, y):
    """Oracle: refit by OLS at every step instead of updating."""
    T, k = X.shape
    w = np.empty(T - k)
    for t in range(k, T):
        beta = np.linalg.lstsq(X[:t], y[:t], rcond=None)[0]
        xtx_inv = np.linalg.inv(X[:t].T @ X[:t])
        f = 1.0 + X[t] @ xtx_inv @ X[t]
        w[t - k] = (y[t] - X[t] @ beta) / math.sqrt(f)
    return w


class TestBreuschGodfrey:
    def test_iid_size_close_to_nominal(self, rng):
        rejections = replicate(bg_size_rep, 400, seed=101)
        assert 0.02 <= rejections.mean() <= 0.08

    def test_strong_ar1_power(self):
        rejections = replicate(bg_power_rep, 150, seed=102)
        assert rejections.mean() > 0.99

    def test_zero_lag_rejected(self, rng):
        with pytest.raises(NumericError, match="lag order"):
            breusch_godfrey(regression_fixture(rng), 0)

    def test_insufficient_observations(self, rng):
        fit = ols(rng.standard_normal(8), rng.standard_normal((8, 2)), intercept=True)
        with pytest.raises(NumericError, match="not enough"):
            breusch_godfrey(fit, 6)


class TestDurbinAlternative:
    def test_tracks_breusch_godfrey(self, rng):
        fit = regression_fixture(rng)
        lm = breusch_godfrey(fit, 2)
        wald = durbin_alternative(fit, 2)
        assert wald.distribution.startswith("F(2,")
        assert (lm.pvalue < 0.05) == (wald.pvalue < 0.05)

    def test_ar1_power(self):
        def rep(rng):
            u = rng.standard_normal(400)
            e = np.empty(400)
            e[0] = u[0]
            for t in range(1, 400):
                e[t] = 0.9 * e[t - 1] + u[t]
            return float(durbin_alternative(regression_fixture(rng, 400, e), 2).reject_at_5pct)

        assert replicate(rep, 120, seed=103).mean() > 0.99

    def test_zero_lag_rejected(self, rng):
        with pytest.raises(NumericError):
            durbin_alternative(regression_fixture(rng), 0)


class TestBreuschPagan:
    def test_homoscedastic_size(self):
        rejections = replicate(bp_size_rep, 400, seed=104)
        assert 0.02 <= rejections.mean() <= 0.08

    def test_variance_grows_with_fitted_power(self):
        rejections = replicate(bp_power_rep, 150, seed=105)
        assert rejections.mean() > 0.95

    def test_perfect_fit_rejected(self):
        x = np.arange(1.0, 20.0)
        fit = ols(3.0 * x, x[:, None], intercept=True)
        with pytest.raises(NumericError, match="zero residual variance"):
            breusch_pagan(fit)


class TestJarqueBera:
    def test_exact_zero_for_zero_skew_kurtosis_three(self):
        a = math.sqrt(3.0 + 2.0 * math.sqrt(2.0))  # makes kurtosis exactly 3
        sample = np.array([1.0, -1.0, a, -a, 0.0, 0.0, 0.0, 0.0])
        result = jarque_bera(sample)
        assert result.statistic == pytest.approx(0.0, abs=1e-12)
        assert result.pvalue == pytest.approx(1.0, abs=1e-12)

    def test_normal_sample_acceptance_rate(self):
        def rep(rng):
            return float(jarque_bera(rng.standard_normal(1000)).reject_at_5pct)

        rejections = replicate(rep, 400, seed=106)
        assert 0.02 <= rejections.mean() <= 0.09

    def test_exponential_sample_power(self):
        assert replicate(jb_power_rep, 100, seed=107).mean() > 0.99

    def test_minimum_sample_size(self):
        with pytest.raises(NumericError, match="at least 8"):
            jarque_bera(np.arange(5.0))

    def test_constant_residuals(self):
        with pytest.raises(NumericError, match="constant"):
            jarque_bera(np.ones(20))


class TestRecursiveResiduals:
    def test_matches_brute_force_oracle(self, rng):
        X = np.column_stack([np.ones(60), rng.standard_normal((60, 2))])
        y = X @ np.array([1.0, 2.0, -1.0]) + rng.standard_normal(60)
        fast = recursive_residuals(y, X)
        slow = brute_force_recursive_residuals(X, y)
        assert np.max(np.abs(fast - slow)) <= 1e-10

    def test_moments_under_stable_model(self):
        def rep(rng):
            x = rng.standard_normal(300)
            y = 1.0 + 0.5 * x + rng.standard_normal(300)
            w = recursive_residuals(y, np.column_stack([np.ones(300), x]))
            lag1 = np.corrcoef(w[1:], w[:-1])[0, 1]
            return (w.mean(), w.var(ddof=1), lag1)

        moments = replicate(rep, 200, seed=108)
        assert abs(moments[:, 0].mean()) < 0.02
        assert abs(moments[:, 1].mean() - 1.0) < 0.03
        assert abs(moments[:, 2].mean()) < 0.02  # uncorrelated one step apart

    def test_single_residual_case(self, rng):
        X = np.column_stack([np.ones(3), np.arange(3.0)])
        y = np.array([1.0, 2.0, 4.0])
        w = recursive_residuals(y, X)
        assert w.size == 1

    def test_singular_initial_block(self):
        X = np.zeros((10, 2))
        with pytest.raises(NumericError, match="singular recursive update at t=2"):
            recursive_residuals(np.arange(10.0), X)


class TestCusum:
    def test_null_coverage_near_nominal(self):
        inside = replicate(cusum_null_rep, 400, seed=109)
        assert 0.92 <= inside.mean() <= 0.99

    def test_break_detection_power(self):
        detected = replicate(cusum_break_rep, 200, seed=110)
        assert detected.mean() > 0.8

    def test_minimal_sample_inside(self):
        X = np.column_stack([np.ones(3), np.arange(3.0)])
        y = np.array([1.0, 2.0, 4.0])
        result = cusum(y, X)
        assert result.stable and result.path.size == 1

    def test_boundary_shape(self, rng):
        x = rng.standard_normal(100)
        y = 1 + x + rng.standard_normal(100)
        result = cusum(y, np.column_stack([np.ones(100), x]))
        n = result.path.size
        expected_first = 0.948 * (math.sqrt(n) + 2.0 / math.sqrt(n))
        assert result.upper[0] == pytest.approx(expected_first)
        assert (result.lower == -result.upper).all()

    def test_unknown_significance(self, rng):
        x = rng.standard_normal(50)
        with pytest.raises(NumericError, match="significance"):
            cusum(x, np.ones((50, 1)), significance=0.2)


class TestReport:
    def test_full_battery_shape(self, rng):
        report = diagnostics_report(regression_fixture(rng), lags=3)
        payload = report.to_dict()
        assert set(payload) == {
            "breusch_godfrey", "durbin_alternative", "breusch_pagan",
            "jarque_bera", "cusum",
        }
        assert isinstance(payload["cusum"]["stable"], bool)

    def test_json_and_text_serializations(self, rng):
        import json

        report = diagnostics_report(regression_fixture(rng), lags=2)
        json.dumps(report.to_dict())  # must be JSON-clean
        text = report.to_text()
        assert "breusch_godfrey" in text and "cusum" in text
        header, rule, *rows = text.splitlines()
        assert set(rule) == {"-"} and len(rows) == 5


class TestReplicationHarness:
    def test_workers_match_serial(self):
        serial = replicate(bg_size_rep, 24, seed=314, workers=1)
        parallel = replicate(bg_size_rep, 24, seed=314, workers=2)
        assert (serial == parallel).all()

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            replicate(bg_size_rep, 0, seed=1)
