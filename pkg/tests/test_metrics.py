import math

import numpy as np
import pytest

import oracles
from ghgif.metrics import MetricReport, evaluate, mse, psnr, ssim, ssim_map


@pytest.fixture
def pair():
    rng = np.random.default_rng(11)
    x = rng.random((32, 32))
    return x, np.clip(x + 0.1 * rng.standard_normal((32, 32)), 0, 1)


class TestPsnr:
    def test_identical_is_inf(self, pair):
        assert psnr(pair[0], pair[0]) == math.inf

    def test_constant_offset(self):
        x = np.full((8, 8), 0.3)
        assert psnr(x, x + 0.1) == pytest.approx(20.0, abs=1e-9)

    def test_scalar_oracle(self, pair):
        x, y = pair
        assert psnr(x, y) == pytest.approx(10 * math.log10(1.0 / oracles.mse(x, y)), abs=1e-9)

    def test_peak(self, pair):
        x, y = pair
        assert psnr(255 * x, 255 * y, peak=255.0) == pytest.approx(psnr(x, y), abs=1e-9)

    def test_symmetric(self, pair):
        assert psnr(*pair) == psnr(*pair[::-1])

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            mse(np.zeros((4, 4)), np.zeros((4, 5)))


class TestSsim:
    def test_identical_is_one(self, pair):
        assert abs(ssim(pair[0], pair[0]) - 1.0) < 1e-12

    def test_constant_luminance_term(self):
        x = np.full((16, 16), 0.5)
        y = x + 0.2
        c1 = 0.01**2
        expected = (2 * 0.5 * 0.7 + c1) / (0.5**2 + 0.7**2 + c1)
        assert ssim(x, y) == pytest.approx(expected, abs=1e-12)

    def test_window_oracle(self, pair):
        assert ssim(*pair) == pytest.approx(oracles.ssim(*pair), abs=1e-6)

    def test_map_covers_valid_windows(self, pair):
        assert ssim_map(*pair).shape == (22, 22)

    def test_symmetric_and_bounded(self, pair):
        a, b = ssim(*pair), ssim(*pair[::-1])
        assert abs(a - b) < 1e-9
        assert a <= 1 + 1e-12

    def test_too_small(self):
        with pytest.raises(ValueError, match="11"):
            ssim(np.zeros((10, 20)), np.zeros((10, 20)))


def test_evaluate_report(pair):
    rep = evaluate(pair[0], pair[0])
    assert isinstance(rep, MetricReport)
    assert rep.to_dict() == {"psnr_db": "inf", "ssim": pytest.approx(1.0)}
    rep = evaluate(*pair)
    assert rep.psnr_db == psnr(*pair) and rep.ssim == ssim(*pair)
