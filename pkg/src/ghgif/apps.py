"""Application pipelines built on the guided filters.

Each pipeline takes a :class:`~ghgif.filters.FilterSpec`, so any of the ten
filters can be dropped in. Colour images are handled per channel except
where noted (tone mapping and dehazing work from luminance).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .filters import FilterSpec
from .imgcore import ParameterError, gaussian_blur, luminance
from .io import per_channel

# defaults per application: radius and epsilon of the local-affine reference setting
ENHANCE_FILTER = FilterSpec("gh_gif", r=16, eps=0.01)
TONEMAP_FILTER = FilterSpec("gh_gif", r=16, eps=0.25)
DEHAZE_FILTER = FilterSpec("gh_gif", r=20, eps=1e-3)
RGF_FILTER = FilterSpec("gh_gif", r=8, eps=0.04)


def _filter_dict(spec: FilterSpec) -> dict:
    return {"filter": spec.describe()}


# --- detail enhancement ------------------------------------------------------


@dataclass(frozen=True)
class EnhanceParams:
    k: float = 5.0
    filter: FilterSpec = ENHANCE_FILTER

    def __post_init__(self):
        if not self.k > 0:
            raise ParameterError(f"amplification factor k must be > 0, got {self.k}")

    def describe(self) -> dict:
        return {"k": float(self.k), **_filter_dict(self.filter)}


def detail_enhance(I, params: EnhanceParams = EnhanceParams()) -> np.ndarray:
    """Boost the detail layer: ``base + k * (I - base)`` with ``base`` the self-guided filter output.

    The result is not clipped; clip when exporting.
    """

    def one(x):
        base = params.filter.apply(x)
        return base + params.k * (x - base)

    return per_channel(one, I)


# --- HDR tone mapping --------------------------------------------------------


@dataclass(frozen=True)
class ToneMapParams:
    """`c` compresses the base layer; `target_contrast` caps the output base range."""

    c: float = 0.5
    target_contrast: float = 100.0
    floor: float = 1e-6
    filter: FilterSpec = TONEMAP_FILTER

    def __post_init__(self):
        if not 0 < self.c < 1:
            raise ParameterError(f"compression factor c must lie in (0, 1), got {self.c}")
        if not self.target_contrast > 1:
            raise ParameterError(f"target contrast must be > 1, got {self.target_contrast}")
        if not self.floor > 0:
            raise ParameterError(f"radiance floor must be > 0, got {self.floor}")

    def describe(self) -> dict:
        return {
            "c": float(self.c),
            "target_contrast": float(self.target_contrast),
            "floor": float(self.floor),
            **_filter_dict(self.filter),
        }


@dataclass(frozen=True)
class ToneMapResult:
    image: np.ndarray
    c_effective: float
    log_base: np.ndarray
    log_detail: np.ndarray


def tone_map(hdr, params: ToneMapParams = ToneMapParams()) -> ToneMapResult:
    """Base/detail tone mapping in log10 luminance.

    The log luminance ``L`` is split into ``base = filter(L)`` and
    ``detail = L - base``; the output log luminance is
    ``c * base + detail`` with ``c`` lowered if needed so that the
    compressed base spans at most ``log10(target_contrast)`` decades. The
    result is exponentiated and scaled so that the brightest luminance is 1;
    colour channels keep their ratios to luminance.

    The filter runs on ``L`` rescaled to [0, 1], so the filter's epsilon has
    the same meaning as for display images.
    """
    a = np.asarray(hdr, dtype=np.float64)
    if not np.isfinite(a).all():
        raise ParameterError("HDR input contains non-finite values")
    if (a < 0).any():
        raise ParameterError("HDR radiance must be non-negative")
    colour = a.ndim == 3
    lum = luminance(a) if colour else a
    if lum.ndim != 2:
        raise ParameterError(f"expected (H, W) or (H, W, 3) radiance, got shape {a.shape}")
    lum = np.maximum(lum, params.floor)

    L = np.log10(lum)
    lo, span = L.min(), L.max() - L.min()
    if span > 0:
        base = params.filter.apply((L - lo) / span) * span + lo
    else:
        base = L.copy()
    detail = L - base

    base_range = float(base.max() - base.min())
    c = params.c
    if base_range > 0:
        c = min(c, math.log10(params.target_contrast) / base_range)
    out_log = c * base + detail
    out_lum = 10.0 ** (out_log - out_log.max())

    if colour:
        img = np.maximum(a, 0.0) / lum[..., None] * out_lum[..., None]
    else:
        img = out_lum
    return ToneMapResult(img, float(c), base, detail)


# --- dehazing ----------------------------------------------------------------


@dataclass(frozen=True)
class DehazeParams:
    """Dark-channel dehazing constants plus the transmission-refinement filter."""

    patch: int = 7
    omega: float = 0.95
    t0: float = 0.1
    airlight_quantile: float = 0.001
    filter: FilterSpec = DEHAZE_FILTER

    def __post_init__(self):
        if int(self.patch) != self.patch or self.patch < 0:
            raise ParameterError(f"patch radius must be a non-negative integer, got {self.patch}")
        if not 0 < self.omega <= 1:
            raise ParameterError(f"omega must lie in (0, 1], got {self.omega}")
        if not 0 < self.t0 < 1:
            raise ParameterError(f"t0 must lie in (0, 1), got {self.t0}")
        if not 0 < self.airlight_quantile <= 1:
            raise ParameterError(
                f"airlight quantile must lie in (0, 1], got {self.airlight_quantile}"
            )

    def describe(self) -> dict:
        return {
            "patch": int(self.patch),
            "omega": float(self.omega),
            "t0": float(self.t0),
            "airlight_quantile": float(self.airlight_quantile),
            **_filter_dict(self.filter),
        }


@dataclass(frozen=True)
class DehazeResult:
    image: np.ndarray
    transmission: np.ndarray
    raw_transmission: np.ndarray
    airlight: np.ndarray


def dark_channel(img, patch: int) -> np.ndarray:
    """Minimum over colour channels, then over the (2*patch+1)^2 neighbourhood."""
    m = np.asarray(img, dtype=np.float64).min(axis=2)
    if patch == 0:
        return m
    return ndimage.minimum_filter(m, size=2 * patch + 1, mode="nearest")


def estimate_airlight(img, dark, quantile: float) -> np.ndarray:
    """Mean colour of the pixels with the brightest dark channel."""
    flat = dark.ravel()
    n = max(1, int(round(quantile * flat.size)))
    idx = np.argpartition(flat, flat.size - n)[flat.size - n :]
    return img.reshape(-1, 3)[idx].mean(axis=0)


def _check_rgb(hazy):
    a = np.asarray(hazy, dtype=np.float64)
    if a.ndim != 3 or a.shape[2] != 3:
        raise ParameterError(f"dehazing needs an (H, W, 3) image, got shape {a.shape}")
    if not np.isfinite(a).all():
        raise ParameterError("hazy image contains non-finite values")
    return a


def dehaze(hazy, params: DehazeParams = DehazeParams(), airlight=None) -> DehazeResult:
    """Dark-channel-prior haze removal with guided transmission refinement.

    ``airlight`` may be passed to skip estimation. The recovered radiance is
    returned unclipped.
    """
    I = _check_rgb(hazy)
    A = estimate_airlight(I, dark_channel(I, params.patch), params.airlight_quantile) \
        if airlight is None else np.asarray(airlight, dtype=np.float64)
    if A.shape != (3,) or not (A > 0).all():
        raise ParameterError(f"degenerate atmospheric light {A}; every channel must be > 0")
    t_raw = 1.0 - params.omega * dark_channel(I / A, params.patch)
    t = params.filter.apply(t_raw, luminance(I))
    J = (I - A) / np.maximum(t, params.t0)[..., None] + A
    return DehazeResult(J, t, t_raw, A)


def rehaze(J, t, A) -> np.ndarray:
    """Forward scattering model ``J * t + A * (1 - t)``."""
    t = np.asarray(t, dtype=np.float64)[..., None]
    return np.asarray(J) * t + np.asarray(A) * (1.0 - t)


# --- rolling guidance texture removal ---------------------------------------


@dataclass(frozen=True)
class RgfParams:
    """`iterations` guided passes after the initial Gaussian (which is not counted)."""

    iterations: int = 5
    sigma_init: float = 3.0
    filter: FilterSpec = field(default=RGF_FILTER)

    def __post_init__(self):
        if int(self.iterations) != self.iterations or self.iterations < 1:
            raise ParameterError(f"iterations must be an integer >= 1, got {self.iterations}")
        if not self.sigma_init > 0:
            raise ParameterError(f"sigma_init must be > 0, got {self.sigma_init}")

    def describe(self) -> dict:
        return {
            "iterations": int(self.iterations),
            "sigma_init": float(self.sigma_init),
            **_filter_dict(self.filter),
        }


def _rgf_gray(I, params, history):
    J = gaussian_blur(I, params.sigma_init)
    steps = [J]
    for _ in range(int(params.iterations)):
        J = params.filter.apply(I, J)
        steps.append(J)
    return steps if history else J


def rgf_texture_removal(I, params: RgfParams = RgfParams(), history: bool = False):
    """Rolling guidance: blur away small structures, then re-filter `I` guided by the last result.

    With ``history=True`` a list ``[J0, J1, ..., Jn]`` is returned (grayscale
    input only), ``J0`` being the initial Gaussian blur.
    """
    a = np.asarray(I, dtype=np.float64)
    if history:
        if a.ndim != 2:
            raise ParameterError("history is only available for grayscale input")
        return _rgf_gray(a, params, True)
    return per_channel(_rgf_gray, a, params, False)
