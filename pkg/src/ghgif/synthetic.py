"""Deterministic synthetic test scenes with known structure."""

from __future__ import annotations

import numpy as np


def step_edge(shape=(64, 64), low=0.0, high=1.0, column=None) -> np.ndarray:
    """Vertical step: `low` left of `column`, `high` from `column` on."""
    h, w = shape
    column = w // 2 if column is None else column
    img = np.full(shape, float(low))
    img[:, column:] = high
    return img


def checkerboard(shape=(64, 64), period: int = 4, amplitude: float = 1.0) -> np.ndarray:
    """Zero-mean checkerboard with squares of side ``period / 2``."""
    h, w = shape
    half = max(1, period // 2)
    y, x = np.mgrid[0:h, 0:w]
    return amplitude * (((y // half) + (x // half)) % 2 - 0.5)


def ripple(shape=(64, 64), period: float = 6.0, amplitude: float = 1.0) -> np.ndarray:
    """Zero-mean vertical-stripe sinusoid."""
    h, w = shape
    x = np.arange(w)
    return np.broadcast_to(amplitude * np.sin(2 * np.pi * x / period), (h, w)).copy()


def step_plus_ripple(shape=(96, 96), step=0.5, ripple_amp=0.02, period=6.0, base=0.25):
    """Step of height `step` with a small ripple on both sides. Returns ``(image, step_only, ripple_only)``."""
    s = step_edge(shape, base, base + step)
    rp = ripple(shape, period, ripple_amp)
    return s + rp, s, rp


def texture_scene(shape=(96, 96), period=4, texture_amp=0.3, step=0.5, base=0.25):
    """Checkerboard texture over a large step. Returns ``(image, step_only, texture_only)``."""
    s = step_edge(shape, base, base + step)
    t = checkerboard(shape, period, texture_amp)
    return s + t, s, t


def two_plateau_hdr(shape=(64, 128), low=1.0, high=1000.0, ripple_frac=0.05, period=8.0):
    """Radiance with two plateaus and a multiplicative +/- `ripple_frac` ripple."""
    s = step_edge(shape, low, high)
    return s * (1.0 + ripple(shape, period, ripple_frac))


def haze_free_scene(shape=(64, 64), seed=0) -> np.ndarray:
    """Smooth random colours in which every pixel has one channel at exactly 0.

    The dark channel of such a scene is identically zero.
    """
    rng = np.random.default_rng(seed)
    h, w = shape
    y, x = np.mgrid[0:h, 0:w] / max(h, w)
    img = np.empty((h, w, 3))
    for k in range(3):
        f = rng.uniform(1, 3, 2)
        ph = rng.uniform(0, 2 * np.pi, 2)
        img[..., k] = 0.5 + 0.4 * np.sin(2 * np.pi * f[0] * x + ph[0]) * np.cos(2 * np.pi * f[1] * y + ph[1])
    zero = np.argmin(img, axis=2)
    np.put_along_axis(img, zero[..., None], 0.0, axis=2)
    return img


def transmission_ramp(shape=(64, 64), low=0.3, high=0.9) -> np.ndarray:
    """Transmission increasing smoothly from left to right."""
    h, w = shape
    return np.broadcast_to(np.linspace(low, high, w), (h, w)).copy()


def add_haze(J, t, A) -> np.ndarray:
    """Atmospheric scattering model ``I = J * t + A * (1 - t)``."""
    t = np.asarray(t, dtype=np.float64)[..., None]
    return np.asarray(J) * t + np.asarray(A, dtype=np.float64) * (1.0 - t)
