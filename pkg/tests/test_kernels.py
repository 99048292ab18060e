"""The numba and pure-numpy kernel paths must agree on complete runs."""

import os
import subprocess
import sys

import numpy as np
import pytest

from jsrkit import _kernels
from jsrkit.config import NO_NUMBA_ENV

from conftest import random_family


def scan_both(mats, depth, budget=10**6, dedup=True):
    a = _kernels.scan_words(np.ascontiguousarray(mats), depth, budget, dedup)
    b = _kernels._scan_words_numpy(np.ascontiguousarray(mats), depth, budget, dedup)
    return a, b


class TestScanEquivalence:
    @pytest.mark.parametrize("seed", range(4))
    @pytest.mark.parametrize("dedup", [True, False])
    def test_per_depth_maxima_agree(self, seed, dedup):
        mats = random_family(seed).mats
        a, b = scan_both(mats, 5, dedup=dedup)
        np.testing.assert_allclose(a[0], b[0], rtol=1e-10)  # max_rho
        np.testing.assert_allclose(a[1], b[1], rtol=1e-10)  # max_norm
        assert a[2] == pytest.approx(b[2], rel=1e-10)       # best value
        assert a[8] == b[8]                                  # node count
        assert bool(a[9]) and bool(b[9])

    @pytest.mark.parametrize("seed", range(4))
    def test_best_word_agrees(self, seed):
        mats = random_family(seed).mats
        a, b = scan_both(mats, 5)
        wa = tuple(a[3][:a[4]])
        wb = tuple(b[3][:b[4]])
        assert wa == wb

    def test_max_norm_word_agrees(self):
        mats = random_family(11, k=3).mats
        a, b = scan_both(mats, 4)
        assert a[5] == pytest.approx(b[5], rel=1e-10)
        assert tuple(a[6][:a[7]]) == tuple(b[6][:b[7]])


class TestPathEquivalence:
    @pytest.mark.parametrize("seed", range(3))
    def test_path_log_norms(self, seed):
        rng = np.random.default_rng(seed)
        mats = np.ascontiguousarray(
            rng.standard_normal((2, 2, 2)).astype(np.complex128))
        paths = rng.integers(0, 2, size=(8, 100))
        a = _kernels.path_log_norms(mats, paths)
        b = _kernels._path_log_norms_numpy(mats, paths)
        np.testing.assert_allclose(a, b, rtol=1e-10)

    def test_power_log_norms(self):
        mat = np.ascontiguousarray(
            np.array([[1.0, 1.0], [0.0, 0.9]], dtype=np.complex128))
        a = _kernels.power_log_norms(mat, 80)
        b = _kernels._power_log_norms_numpy(mat, 80)
        np.testing.assert_allclose(a, b, rtol=1e-10)

    def test_zero_matrix_neg_inf(self):
        mat = np.zeros((2, 2), dtype=np.complex128)
        a = _kernels.power_log_norms(mat, 5)
        assert np.all(np.isneginf(a))


class TestEnvFlag:
    def test_numpy_path_selectable(self):
        env = dict(os.environ, **{NO_NUMBA_ENV: "1"})
        code = ("import jsrkit._kernels as k; "
                "assert not k.USE_NUMBA; "
                "import numpy as np; from jsrkit import bounds_bracket, MatrixFamily; "
                "fam = MatrixFamily.from_matrices("
                "[[[1,1],[0,1]],[[1,0],[1,1]]]); "
                "b = bounds_bracket(fam, 10); "
                "phi = (1 + 5 ** 0.5) / 2; "
                "assert abs(b.lower - phi) < 1e-9, b.lower; "
                "print('ok')")
        out = subprocess.run([sys.executable, "-c", code], env=env,
                             capture_output=True, text=True, timeout=300)
        assert out.returncode == 0, out.stderr
        assert "ok" in out.stdout
