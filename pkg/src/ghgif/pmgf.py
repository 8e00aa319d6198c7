"""Gaussian-highpass guided filters (GH-GIF family).

The per-window model is ``alpha * (G - Gbar) + Ibar`` where ``Gbar`` and
``Ibar`` are Gaussian lowpass outputs. Only one coefficient is fitted per
window, by ridge regression of the input highpass on the guidance highpass::

    alpha = mean_w(HG * HI) / (mean_w(HG**2) + lam * w)

and the output is ``alpha_bar * HG + Ibar`` with ``alpha_bar`` the local
average of ``alpha``. The variants mirror their local-affine counterparts
(see :mod:`ghgif.lam`): same regulariser weights, same sample weighting,
same averaging kernel.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import weights as wt
from .imgcore import (
    Border,
    ConsistencyError,
    GaussianSpec,
    ParameterError,
    as_border,
    as_image,
    box_mean,
    check_same_shape,
    gaussian_blur,
)
from .lam import normalize_variant

PMGF_VARIANTS = ("gh_gif", "gh_wgif", "gh_ggif", "gh_skwgif", "gh_rdwgif")

# below this the fitted weights blow up on flat patches and copy noise through
LAMBDA_FLOOR = 1e-4
DEFAULT_LAMBDA = 1e-3


def default_sigma(r: int) -> float:
    """Lowpass scale tied to the window radius: ``r / 2``."""
    return 0.5 * r


@dataclass(frozen=True)
class PmgfParams:
    """Parameters of the Gaussian-highpass filters.

    ``sigma=None`` selects :func:`default_sigma`. `tau`, `c` and `h` play
    the same roles as in :class:`ghgif.lam.LamParams`.
    """

    r: int = 4
    lam: float = DEFAULT_LAMBDA
    sigma: float | None = None
    variant: str = "gh_gif"
    truncation: float = 3.0
    tau: float = wt.DEFAULT_TAU
    c: int = wt.DEFAULT_C
    h: float | None = None
    border: Border = field(default=Border.REPLICATE)

    def __post_init__(self):
        v = normalize_variant(self.variant)
        if not v.startswith("gh_"):
            v = "gh_" + v
        object.__setattr__(self, "variant", v)
        object.__setattr__(self, "border", as_border(self.border))
        if v not in PMGF_VARIANTS:
            raise ParameterError(
                f"unknown PM-GF variant {self.variant!r}; expected one of {PMGF_VARIANTS}"
            )
        if int(self.r) != self.r or self.r < 1:
            raise ParameterError(f"window radius r must be an integer >= 1, got {self.r}")
        if not self.lam > 0:
            raise ParameterError(f"lambda must be > 0, got {self.lam}")
        if self.sigma is None:
            object.__setattr__(self, "sigma", default_sigma(self.r))
        # GaussianSpec validates sigma and truncation
        GaussianSpec(self.sigma, self.truncation)
        if self.lam < LAMBDA_FLOOR:
            warnings.warn(
                f"lambda={self.lam:g} is below {LAMBDA_FLOOR:g}; expect spurious "
                "detail in flat regions",
                stacklevel=3,
            )

    @property
    def gaussian(self) -> GaussianSpec:
        return GaussianSpec(self.sigma, self.truncation)


@dataclass(frozen=True)
class AlphaField:
    """Per-window highpass weight and its locally averaged version."""

    alpha: np.ndarray
    alpha_bar: np.ndarray


@dataclass(frozen=True)
class PmgfResult:
    """Everything Algorithm-style filtering produces along the way."""

    output: np.ndarray
    alpha: AlphaField
    I_low: np.ndarray
    G_low: np.ndarray

    @property
    def transferred(self) -> np.ndarray:
        """Guidance structure carried into the output, ``alpha_bar * (G - Gbar)``."""
        return self.output - self.I_low


def _inputs(I, G):
    self_guided = G is None or G is I
    I = as_image(I, "input")
    G = I if self_guided else as_image(G, "guidance")
    check_same_shape(I, G)
    return I, G, self_guided


def _lowpass(I, G, self_guided, params):
    spec, border = params.gaussian, params.border
    I_low = gaussian_blur(I, spec, border)
    G_low = I_low if self_guided else gaussian_blur(G, spec, border)
    return I_low, G_low


def _window_mean(params):
    r, border = int(params.r), params.border
    if params.variant == "gh_rdwgif":
        return lambda x: wt.mollifier_mean(x, r, border)
    return lambda x: box_mean(x, r, border)


def _alpha(HI, HG, G, self_guided, params) -> np.ndarray:
    r, border, lam = int(params.r), params.border, params.lam
    mean = _window_mean(params)
    energy = mean(HG * HG)
    cross = energy if self_guided else mean(HG * HI)

    v = params.variant
    if v in ("gh_gif", "gh_skwgif"):
        return cross / (energy + lam)
    if v == "gh_wgif":
        return cross / (energy + lam * wt.eaw_w1(G, params.tau, border).values)
    if v == "gh_ggif":
        reg = lam * wt.eaw_w2(G, r, params.tau, border).values
        gamma = wt.gamma_map(G, r, border).values
        return (cross + reg * gamma) / (energy + reg)
    # gh_rdwgif
    den = energy + lam * wt.eaw_w3(G, params.c, border).values
    return np.divide(cross, den, out=np.zeros_like(cross), where=den > 0)


def _average(alpha, G, params):
    if params.variant == "gh_skwgif":
        return wt.steering_mean(alpha, G, int(params.r), params.h, border=params.border)
    return _window_mean(params)(alpha)


def _run(I, G, self_guided, params) -> PmgfResult:
    I_low, G_low = _lowpass(I, G, self_guided, params)
    HG = G - G_low
    HI = HG if self_guided else I - I_low
    alpha = _alpha(HI, HG, G, self_guided, params)
    alpha_bar = _average(alpha, G, params)
    out = alpha_bar * HG + I_low
    return PmgfResult(out, AlphaField(alpha, alpha_bar), I_low, G_low)


def pmgf_alpha(I, G=None, params: PmgfParams = PmgfParams()) -> AlphaField:
    """Ridge-regression highpass weights ``alpha`` and their average ``alpha_bar``."""
    I, G, self_guided = _inputs(I, G)
    return _run(I, G, self_guided, params).alpha


def pmgf_filter_full(I, G=None, params: PmgfParams = PmgfParams()) -> PmgfResult:
    """Like :func:`pmgf_filter` but also returns the intermediate fields."""
    I, G, self_guided = _inputs(I, G)
    return _run(I, G, self_guided, params)


def pmgf_filter(I, G=None, params: PmgfParams = PmgfParams()) -> np.ndarray:
    """Gaussian-highpass guided filtering of `I` with guidance `G`.

    Steps: lowpass both images, fit ``alpha`` per window, average it to
    ``alpha_bar``, return ``alpha_bar * (G - Gbar) + Ibar``. `G=None` means
    self-guided.
    """
    I, G, self_guided = _inputs(I, G)
    return _run(I, G, self_guided, params).output


def pmgf_from_alpha(I, G, alpha, params: PmgfParams = PmgfParams()) -> np.ndarray:
    """Combine an externally supplied per-window `alpha` under the highpass model.

    Used to compare the two priors with identical coefficients, e.g. passing
    the local-affine ``a`` as `alpha`. Averaging follows `params.variant`.
    """
    I, G, self_guided = _inputs(I, G)
    alpha = as_image(alpha, "alpha")
    check_same_shape(I, alpha, ("input", "alpha"))
    I_low, G_low = _lowpass(I, G, self_guided, params)
    return _average(alpha, G, params) * (G - G_low) + I_low


def structure_transfer_decomposition(
    O, I, G=None, params: PmgfParams = PmgfParams(), atol: float = 1e-9
) -> np.ndarray:
    """Return the transferred-structure layer ``O - Ibar`` after checking it.

    The layer must equal ``alpha_bar * (G - Gbar)`` recomputed from
    ``(I, G, params)``; otherwise :class:`ConsistencyError` is raised.
    """
    I, G, self_guided = _inputs(I, G)
    O = as_image(O, "output")
    check_same_shape(I, O, ("input", "output"))
    res = _run(I, G, self_guided, params)
    layer = O - res.I_low
    expected = res.alpha.alpha_bar * (G - res.G_low)
    err = float(np.max(np.abs(layer - expected)))
    if not err <= atol:
        raise ConsistencyError(
            f"transferred layer deviates from alpha_bar * (G - Gbar) by {err:.3e} "
            f"(tolerance {atol:.1e})"
        )
    return layer
