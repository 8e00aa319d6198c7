"""Full-reference quality metrics: PSNR and SSIM.

SSIM uses the customary reference settings (11x11 Gaussian window with
sigma 1.5, K1 = 0.01, K2 = 0.03, dynamic range 1.0) and averages the local
index over every window that fits entirely inside the image.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy import ndimage

from .imgcore import as_image, check_same_shape

SSIM_SETTINGS = {"window": 11, "sigma": 1.5, "k1": 0.01, "k2": 0.03, "data_range": 1.0}


@dataclass(frozen=True)
class MetricReport:
    psnr_db: float
    ssim: float

    def to_dict(self) -> dict:
        d = asdict(self)
        if math.isinf(self.psnr_db):
            d["psnr_db"] = "inf"
        return d


def mse(x, y) -> float:
    x, y = as_image(x, "x"), as_image(y, "y")
    check_same_shape(x, y, ("x", "y"))
    return float(np.mean((x - y) ** 2))


def psnr(x, y, peak: float = 1.0) -> float:
    """Peak signal-to-noise ratio in dB; ``inf`` for identical images."""
    m = mse(x, y)
    if m == 0.0:
        return math.inf
    return 10.0 * math.log10(peak * peak / m)


def ssim_window(size: int = 11, sigma: float = 1.5) -> np.ndarray:
    """Separable factor of the SSIM Gaussian window (sums to 1)."""
    x = np.arange(size, dtype=np.float64) - (size - 1) / 2.0
    g = np.exp(-0.5 * (x / sigma) ** 2)
    return g / g.sum()


def _valid_filter(x, g):
    # correlate then keep only positions whose window lies inside the image
    half = (g.size - 1) // 2
    out = ndimage.correlate1d(ndimage.correlate1d(x, g, axis=0), g, axis=1)
    return out[half : x.shape[0] - half, half : x.shape[1] - half]


def ssim_map(x, y) -> np.ndarray:
    x, y = as_image(x, "x"), as_image(y, "y")
    check_same_shape(x, y, ("x", "y"))
    s = SSIM_SETTINGS
    size = s["window"]
    if min(x.shape) < size:
        raise ValueError(f"SSIM needs both sides >= {size}, got shape {x.shape}")
    g = ssim_window(size, s["sigma"])
    c1 = (s["k1"] * s["data_range"]) ** 2
    c2 = (s["k2"] * s["data_range"]) ** 2
    mx, my = _valid_filter(x, g), _valid_filter(y, g)
    vx = _valid_filter(x * x, g) - mx * mx
    vy = _valid_filter(y * y, g) - my * my
    cxy = _valid_filter(x * y, g) - mx * my
    num = (2 * mx * my + c1) * (2 * cxy + c2)
    den = (mx * mx + my * my + c1) * (vx + vy + c2)
    return num / den


def ssim(x, y) -> float:
    """Mean structural similarity over all interior 11x11 windows."""
    return float(np.mean(ssim_map(x, y)))


def evaluate(output, reference, peak: float = 1.0) -> MetricReport:
    return MetricReport(psnr(output, reference, peak), ssim(output, reference))
