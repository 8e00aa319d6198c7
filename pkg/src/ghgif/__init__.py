"""Guided image filtering with local-affine and Gaussian-highpass models."""

from .corpus import load_corpus
from .filters import ALL_VARIANTS, FilterSpec, counterpart, guided_filter
from .imgcore import (
    Border,
    ConsistencyError,
    GaussianSpec,
    ParameterError,
    box_mean,
    gaussian_blur,
    highpass,
    luminance,
)
from .lam import LAM_VARIANTS, LamParams, lam_coeffs, lam_filter
from .metrics import MetricReport, evaluate, psnr, ssim
from .pmgf import (
    PMGF_VARIANTS,
    PmgfParams,
    PmgfResult,
    pmgf_alpha,
    pmgf_filter,
    pmgf_filter_full,
    structure_transfer_decomposition,
)
from .weights import eaw_w1, eaw_w2, eaw_w3, gamma_map, mnd

__version__ = "0.1.0"

__all__ = [
    "ALL_VARIANTS", "LAM_VARIANTS", "PMGF_VARIANTS",
    "Border", "ConsistencyError", "FilterSpec", "GaussianSpec", "LamParams",
    "MetricReport", "ParameterError", "PmgfParams", "PmgfResult",
    "box_mean", "counterpart", "eaw_w1", "eaw_w2", "eaw_w3", "evaluate",
    "gamma_map", "gaussian_blur", "guided_filter", "highpass", "lam_coeffs", "load_corpus",
    "lam_filter", "luminance", "mnd", "pmgf_alpha", "pmgf_filter",
    "pmgf_filter_full", "psnr", "ssim", "structure_transfer_decomposition",
]
