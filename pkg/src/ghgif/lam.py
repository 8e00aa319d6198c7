"""Local-affine-model guided filters: GIF, WGIF, GGIF, SKWGIF and RDWGIF.

All five share one engine. In each window the output is modelled as
``a * G + b``; the variants differ only in

* the regulariser on ``a`` (constant, ``w1``, ``w2`` with a ``gamma`` target,
  or ``w3``),
* the weighting of window samples (box, or the mollifier for RDWGIF), and
* how the overlapping per-window coefficients are averaged (box mean,
  steering kernel, or mollifier).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import weights as wt
from .imgcore import Border, ParameterError, as_border, as_image, box_mean, check_same_shape

LAM_VARIANTS = ("gif", "wgif", "ggif", "skwgif", "rdwgif")


def normalize_variant(name: str) -> str:
    return str(name).strip().lower().replace("-", "_")


@dataclass(frozen=True)
class LamParams:
    """Parameters of the local-affine filters.

    `tau` feeds ``w1``/``w2``, `c` feeds ``w3`` and `h` (default ``r / 2``)
    is the steering-kernel scale of SKWGIF. Extras a variant does not use
    are ignored.
    """

    r: int = 4
    eps: float = 0.04
    variant: str = "gif"
    tau: float = wt.DEFAULT_TAU
    c: int = wt.DEFAULT_C
    h: float | None = None
    border: Border = field(default=Border.REPLICATE)

    def __post_init__(self):
        object.__setattr__(self, "variant", normalize_variant(self.variant))
        object.__setattr__(self, "border", as_border(self.border))
        if self.variant not in LAM_VARIANTS:
            raise ParameterError(
                f"unknown LAM variant {self.variant!r}; expected one of {LAM_VARIANTS}"
            )
        if int(self.r) != self.r or self.r < 1:
            raise ParameterError(f"window radius r must be an integer >= 1, got {self.r}")
        if not self.eps > 0:
            raise ParameterError(f"epsilon must be > 0, got {self.eps}")


@dataclass(frozen=True)
class CoeffFields:
    """Per-window affine coefficients, indexed by window centre."""

    a: np.ndarray
    b: np.ndarray


def _inputs(I, G):
    self_guided = G is None or G is I
    I = as_image(I, "input")
    G = I if self_guided else as_image(G, "guidance")
    check_same_shape(I, G)
    return I, G, self_guided


def _window_mean(params: LamParams):
    r, border = int(params.r), params.border
    if params.variant == "rdwgif":
        return lambda x: wt.mollifier_mean(x, r, border)
    return lambda x: box_mean(x, r, border)


def _coeffs(I, G, self_guided, params: LamParams) -> CoeffFields:
    r, border, eps = int(params.r), params.border, params.eps
    mean = _window_mean(params)
    mu_G = mean(G)
    var_G = np.maximum(mean(G * G) - mu_G * mu_G, 0.0)
    if self_guided:
        mu_I, cov = mu_G, var_G
    else:
        mu_I = mean(I)
        cov = mean(G * I) - mu_G * mu_I

    v = params.variant
    if v in ("gif", "skwgif"):
        a = cov / (var_G + eps)
    elif v == "wgif":
        a = cov / (var_G + eps * wt.eaw_w1(G, params.tau, border).values)
    elif v == "ggif":
        reg = eps * wt.eaw_w2(G, r, params.tau, border).values
        gamma = wt.gamma_map(G, r, border).values
        a = (cov + reg * gamma) / (var_G + reg)
    else:  # rdwgif
        den = var_G + eps * wt.eaw_w3(G, params.c, border).values
        # den == 0 only where w3 == 0 and G is flat under the kernel; then cov == 0 too
        a = np.divide(cov, den, out=np.zeros_like(cov), where=den > 0)
    b = mu_I - a * mu_G
    return CoeffFields(a, b)


def lam_coeffs(I, G=None, params: LamParams = LamParams()) -> CoeffFields:
    """Closed-form per-window coefficients ``a``, ``b`` of the chosen variant.

    ``G=None`` means self-guided (``G = I``).
    """
    I, G, self_guided = _inputs(I, G)
    return _coeffs(I, G, self_guided, params)


def average_coeffs(coeffs: CoeffFields, G, params: LamParams):
    """Average overlapping window coefficients with the variant's kernel."""
    r, border = int(params.r), params.border
    v = params.variant
    if v == "skwgif":
        return wt.steering_means([coeffs.a, coeffs.b], G, r, params.h, border=border)
    mean = _window_mean(params)
    return mean(coeffs.a), mean(coeffs.b)


def lam_filter(I, G=None, params: LamParams = LamParams()) -> np.ndarray:
    """Filter `I` guided by `G` (self-guided when `G` is None).

    Returns ``avg(a) * G + avg(b)``.
    """
    I, G, self_guided = _inputs(I, G)
    coeffs = _coeffs(I, G, self_guided, params)
    a_avg, b_avg = average_coeffs(coeffs, G, params)
    return a_avg * G + b_avg
