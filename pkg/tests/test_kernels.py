import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from powsec import _kernels
from powsec._kernels import _fallback

_core = pytest.importorskip(
    "powsec._kernels._core", reason="compiled extension not built"
)


def random_problem(seed, nobs=80, k=5):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((nobs, k))
    X[:, 0] = 1.0
    y = X @ rng.standard_normal(k) + rng.standard_normal(nobs)
    return X, y


class TestBackendSelection:
    def test_backend_reports_a_known_name(self):
        assert _kernels.backend() in ("compiled", "fallback")

    def test_env_override_forces_fallback(self):
        import subprocess
        import sys

        out = subprocess.run(
            [sys.executable, "-c",
             "from powsec._kernels import backend; print(backend())"],
            env={"POWSEC_PURE_PYTHON": "1", "PATH": "/usr/bin:/bin"},
            capture_output=True, text=True, check=True,
        )
        assert out.stdout.strip() == "fallback"


class TestParity:
    @given(st.integers(0, 10_000))
    @settings(max_examples=60, deadline=None)
    def test_lstsq_stats(self, seed):
        X, y = random_problem(seed)
        for got, want in zip(_core.lstsq_stats(X, y), _fallback.lstsq_stats(X, y)):
            assert np.allclose(got, want, atol=1e-9, rtol=1e-9)

    @given(st.integers(0, 10_000))
    @settings(max_examples=40, deadline=None)
    def test_recursive_residuals(self, seed):
        X, y = random_problem(seed, nobs=60, k=4)
        got = _core.recursive_residuals(X, y)
        want = _fallback.recursive_residuals(X, y)
        assert np.allclose(got, want, atol=1e-9)

    @given(st.integers(0, 10_000), st.sampled_from([0, 1, 2]),
           st.booleans())
    @settings(max_examples=40, deadline=None)
    def test_adf_stat(self, seed, det, autolag):
        rng = np.random.default_rng(seed)
        y = np.cumsum(rng.standard_normal(200))
        got = _core.adf_stat(y, det, 8, autolag)
        want = _fallback.adf_stat(y, det, 8, autolag)
        assert got[1] == want[1] and got[2] == want[2]
        assert got[0] == pytest.approx(want[0], abs=1e-9)

    def test_read_only_inputs_accepted(self):
        X, y = random_problem(7)
        X.setflags(write=False)
        y.setflags(write=False)
        _core.lstsq_stats(X, y)
        _core.recursive_residuals(X, y)
        walk = np.cumsum(np.random.default_rng(0).standard_normal(100))
        walk.setflags(write=False)
        _core.adf_stat(walk, 1, 4, True)

    def test_inputs_not_mutated(self):
        X, y = random_problem(11, nobs=30, k=1)  # 1 column: F- and C-contiguous
        X_copy, y_copy = X.copy(), y.copy()
        _core.lstsq_stats(X, y)
        assert (X == X_copy).all() and (y == y_copy).all()

    def test_singular_design_error_parity(self):
        X = np.zeros((10, 2))
        X[:, 0] = 1.0
        y = np.arange(10.0)
        with pytest.raises(ValueError):
            _core.lstsq_stats(X, y)
        with pytest.raises(ValueError):
            _fallback.lstsq_stats(X, y)

    def test_recursive_singular_error_parity(self):
        X = np.zeros((10, 2))
        y = np.arange(10.0)
        for impl in (_core, _fallback):
            with pytest.raises(ValueError, match="t=2"):
                impl.recursive_residuals(X, y)
