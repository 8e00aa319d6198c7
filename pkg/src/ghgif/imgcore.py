"""Image container conventions, border handling and the two linear workhorses.

Images are plain 2-D ``float64`` numpy arrays in row-major order, nominally
in [0, 1]. Highpass residuals and other intermediates may leave that range.
Every public filter in the package funnels its inputs through
:func:`as_image`, which is where the "finite values only" rule is enforced.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import ndimage


class ParameterError(ValueError):
    """A filter or pipeline parameter is outside its valid domain."""


class ConsistencyError(RuntimeError):
    """An internal algebraic identity did not hold within tolerance."""


class Border(str, Enum):
    """How samples outside the raster are synthesised.

    ``replicate`` repeats the edge pixel (``aaa|abcd|ddd``), ``reflect``
    mirrors about the edge including the edge pixel (``cba|abcd|dcb``).
    """

    REPLICATE = "replicate"
    REFLECT = "reflect"


# numpy.pad / scipy.ndimage names for each policy
_NP_PAD = {Border.REPLICATE: "edge", Border.REFLECT: "symmetric"}
_ND_MODE = {Border.REPLICATE: "nearest", Border.REFLECT: "reflect"}


def as_border(border) -> Border:
    try:
        return Border(border)
    except ValueError:
        raise ParameterError(
            f"unknown border policy {border!r}; expected one of "
            f"{[b.value for b in Border]}"
        ) from None


def as_image(x, name: str = "image") -> np.ndarray:
    """Validate and convert `x` to a finite 2-D float64 array.

    Raises
    ------
    ValueError
        If `x` is not 2-D, is empty, or contains NaN/Inf. The message names
        the first offending (row, col) index.
    """
    a = np.asarray(x, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {a.shape}")
    if a.shape[0] < 1 or a.shape[1] < 1:
        raise ValueError(f"{name} must be at least 1x1, got shape {a.shape}")
    finite = np.isfinite(a)
    if not finite.all():
        idx = np.unravel_index(np.argmin(finite), a.shape)
        raise ValueError(
            f"{name} contains a non-finite value {a[idx]!r} at index "
            f"{tuple(int(i) for i in idx)}"
        )
    return np.ascontiguousarray(a)


def check_same_shape(a: np.ndarray, b: np.ndarray, names=("input", "guidance")):
    if a.shape != b.shape:
        raise ValueError(
            f"{names[0]} and {names[1]} differ in shape: {a.shape} vs {b.shape}"
        )


def pad(src: np.ndarray, r: int, border=Border.REPLICATE) -> np.ndarray:
    """Pad both axes by `r` samples according to `border`."""
    return np.pad(src, r, mode=_NP_PAD[as_border(border)])


def _running_mean_1d(x: np.ndarray, r: int, axis: int, mode: str) -> np.ndarray:
    # one cumulative sum per line; each output is a difference of two entries
    width = [(0, 0), (0, 0)]
    width[axis] = (r + 1, r)
    padded = np.pad(x, width, mode=mode)
    # the extra leading sample is zeroed so that cs[i + 2r + 1] - cs[i]
    # is the sum over padded[i + 1 : i + 2r + 2]
    if axis == 0:
        padded[0, :] = 0.0
    else:
        padded[:, 0] = 0.0
    cs = np.cumsum(padded, axis=axis)
    n = x.shape[axis]
    k = 2 * r + 1
    if axis == 0:
        out = cs[k : k + n, :] - cs[:n, :]
    else:
        out = cs[:, k : k + n] - cs[:, :n]
    out /= k
    return out


def box_mean(src, r: int, border=Border.REPLICATE) -> np.ndarray:
    """Mean over the (2r+1) x (2r+1) window centred at every pixel.

    Two 1-D running-sum passes (rows, then columns), so the cost per pixel
    does not depend on `r`.

    Parameters
    ----------
    src : array_like
        2-D image.
    r : int
        Window radius, ``r >= 1``.
    border : Border or str
        Extension policy for windows that overhang the raster.

    Returns
    -------
    ndarray
        Windowed means, same shape as `src`.
    """
    x = as_image(src, "box_mean input")
    r = int(r)
    if r < 1:
        raise ParameterError(f"box radius must be >= 1, got {r}")
    mode = _NP_PAD[as_border(border)]
    return _running_mean_1d(_running_mean_1d(x, r, 1, mode), r, 0, mode)


@dataclass(frozen=True)
class GaussianSpec:
    """Sampled Gaussian lowpass: scale `sigma` (pixels), support ``truncation * sigma``."""

    sigma: float
    truncation: float = 3.0

    def __post_init__(self):
        if not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise ParameterError(f"Gaussian sigma must be > 0, got {self.sigma}")
        if not self.truncation > 0:
            raise ParameterError(
                f"Gaussian truncation must be > 0, got {self.truncation}"
            )

    @property
    def radius(self) -> int:
        return max(1, int(math.ceil(self.truncation * self.sigma)))

    def kernel(self) -> np.ndarray:
        """Normalised, symmetric 1-D kernel of length ``2 * radius + 1``."""
        x = np.arange(-self.radius, self.radius + 1, dtype=np.float64)
        k = np.exp(-0.5 * (x / self.sigma) ** 2)
        return k / k.sum()


def _as_spec(spec) -> GaussianSpec:
    if isinstance(spec, GaussianSpec):
        return spec
    return GaussianSpec(float(spec))


def gaussian_blur(src, spec, border=Border.REPLICATE) -> np.ndarray:
    """Separable Gaussian lowpass (horizontal pass, then vertical).

    `spec` may be a :class:`GaussianSpec` or a bare sigma.
    """
    spec = _as_spec(spec)
    x = as_image(src, "gaussian_blur input")
    k = spec.kernel()
    mode = _ND_MODE[as_border(border)]
    tmp = ndimage.correlate1d(x, k, axis=1, mode=mode)
    return ndimage.correlate1d(tmp, k, axis=0, mode=mode)


def highpass(src, spec, border=Border.REPLICATE) -> np.ndarray:
    """Gaussian highpass residual ``src - gaussian_blur(src)``."""
    x = as_image(src, "highpass input")
    return x - gaussian_blur(x, spec, border)


def luminance(rgb) -> np.ndarray:
    """Rec. 601 luma of an ``(H, W, 3)`` array."""
    a = np.asarray(rgb, dtype=np.float64)
    if a.ndim != 3 or a.shape[2] != 3:
        raise ValueError(f"expected an (H, W, 3) array, got shape {a.shape}")
    return 0.299 * a[..., 0] + 0.587 * a[..., 1] + 0.114 * a[..., 2]
