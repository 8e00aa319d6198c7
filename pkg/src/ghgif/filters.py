"""One entry point for all ten guided filters.

>>> spec = FilterSpec("gh-ggif", r=8, eps=0.04)   # lambda defaults to 0.1 * eps
>>> out = spec.apply(image)                        # doctest: +SKIP
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .imgcore import Border, ParameterError, as_border
from .lam import LAM_VARIANTS, LamParams, lam_filter, normalize_variant
from .pmgf import PMGF_VARIANTS, PmgfParams, default_sigma, pmgf_filter
from .weights import DEFAULT_C, DEFAULT_TAU

ALL_VARIANTS = LAM_VARIANTS + PMGF_VARIANTS

# lambda = LAMBDA_PER_EPS * eps when a PM-GF filter mirrors a local-affine setting
LAMBDA_PER_EPS = 0.1


def counterpart(variant: str) -> str:
    """``gif`` <-> ``gh_gif`` and so on."""
    v = normalize_variant(variant)
    return v[3:] if v.startswith("gh_") else "gh_" + v


@dataclass(frozen=True)
class FilterSpec:
    """Variant name plus every parameter either family may need.

    `eps` is the local-affine regulariser; PM-GF variants use `lam`, which
    defaults to ``0.1 * eps``. `sigma` (PM-GF lowpass scale) defaults to
    ``r / 2``.
    """

    variant: str = "gh_gif"
    r: int = 4
    eps: float = 0.04
    lam: float | None = None
    sigma: float | None = None
    tau: float = DEFAULT_TAU
    c: int = DEFAULT_C
    h: float | None = None
    border: Border = Border.REPLICATE

    def __post_init__(self):
        v = normalize_variant(self.variant)
        if v not in ALL_VARIANTS:
            raise ParameterError(
                f"unknown variant {self.variant!r}; expected one of "
                f"{[x.replace('_', '-') for x in ALL_VARIANTS]}"
            )
        object.__setattr__(self, "variant", v)
        object.__setattr__(self, "border", as_border(self.border))
        if not self.eps > 0:
            raise ParameterError(f"epsilon must be > 0, got {self.eps}")
        if self.lam is not None and not self.lam > 0:
            raise ParameterError(f"lambda must be > 0, got {self.lam}")
        # build once so that bad combinations fail at construction
        self.params()

    @property
    def family(self) -> str:
        return "PM-GF" if self.variant in PMGF_VARIANTS else "LAM"

    @property
    def effective_lambda(self) -> float:
        return LAMBDA_PER_EPS * self.eps if self.lam is None else self.lam

    @property
    def effective_sigma(self) -> float:
        return default_sigma(self.r) if self.sigma is None else self.sigma

    def params(self):
        if self.family == "LAM":
            return LamParams(
                r=self.r, eps=self.eps, variant=self.variant, tau=self.tau,
                c=self.c, h=self.h, border=self.border,
            )
        return PmgfParams(
            r=self.r, lam=self.effective_lambda, sigma=self.effective_sigma,
            variant=self.variant, tau=self.tau, c=self.c, h=self.h, border=self.border,
        )

    def apply(self, I, G=None) -> np.ndarray:
        p = self.params()
        if isinstance(p, LamParams):
            return lam_filter(I, G, p)
        return pmgf_filter(I, G, p)

    def counterpart(self) -> "FilterSpec":
        return FilterSpec(
            counterpart(self.variant), self.r, self.eps, self.lam, self.sigma,
            self.tau, self.c, self.h, self.border,
        )

    def describe(self) -> dict:
        """Effective parameters, with defaults resolved, for reports and sidecars."""
        d = {
            "variant": self.variant.replace("_", "-"),
            "family": self.family,
            "r": int(self.r),
            "eps": float(self.eps),
            "border": self.border.value,
        }
        if self.family == "PM-GF":
            d["lambda"] = float(self.effective_lambda)
            d["sigma"] = float(self.effective_sigma)
        base = counterpart(self.variant) if self.family == "PM-GF" else self.variant
        if base in ("wgif", "ggif"):
            d["tau"] = float(self.tau)
        if base == "rdwgif":
            d["c"] = int(self.c)
        if base == "skwgif":
            d["h"] = float(self.h if self.h is not None else max(0.5 * self.r, 1.0))
        return d


def guided_filter(I, G=None, variant: str = "gh_gif", **kwargs) -> np.ndarray:
    """Functional shorthand for ``FilterSpec(variant, **kwargs).apply(I, G)``."""
    return FilterSpec(variant, **kwargs).apply(I, G)
