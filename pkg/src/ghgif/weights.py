"""Edge-aware weight fields and the averaging kernels used by the weighted filters.

Weight maps (``w1``, ``w2``, ``w3``, ``gamma``) modulate the regulariser per
window centre: small on edges, large on flat patches. Kernel fields replace
the plain box mean in the averaging step (mollifier and steering kernels).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage
from scipy.special import expit

from .imgcore import Border, ParameterError, as_border, as_image, box_mean, pad, _ND_MODE

DEFAULT_TAU = 1e-4
DEFAULT_C = 3
DEFAULT_DELTA = 1e-4
MAD_SCALE = 1.4826


@dataclass(frozen=True)
class WeightMap:
    """Per-pixel weight field.

    `degenerate` is set when the field fell back to its constant-image
    convention (``gamma == 1/2`` or ``w3 == 1``).
    """

    values: np.ndarray
    kind: str = ""
    degenerate: bool = False

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)


@dataclass(frozen=True)
class KernelField:
    """Normalised averaging kernels over a (2r+1) x (2r+1) neighbourhood.

    `weights` has shape ``(k, k)`` for a spatially invariant kernel or
    ``(H, W, k, k)`` for one kernel per pixel, with ``k = 2r + 1``.
    Entry ``[..., r + dy, r + dx]`` weights the neighbour at offset (dy, dx).
    """

    weights: np.ndarray

    @property
    def radius(self) -> int:
        return (self.weights.shape[-1] - 1) // 2

    @property
    def invariant(self) -> bool:
        return self.weights.ndim == 2


def _check_tau(tau):
    if not tau > 0:
        raise ParameterError(f"tau must be > 0, got {tau}")


def local_variance(G, r: int, border=Border.REPLICATE) -> np.ndarray:
    """Variance of `G` over the (2r+1)^2 window, clamped at zero."""
    # shifting by one sample value makes flat regions exactly zero
    G = G - G.flat[0]
    mu = box_mean(G, r, border)
    var = box_mean(G * G, r, border) - mu * mu
    return np.maximum(var, 0.0)


def _harmonic_weight(field: np.ndarray, tau: float) -> np.ndarray:
    d = field + tau
    h = 1.0 / np.mean(1.0 / d)
    return h / d


def eaw_w1(G, tau: float = DEFAULT_TAU, border=Border.REPLICATE) -> WeightMap:
    """Single-scale edge-aware weight from the 3x3 variance of `G`.

    ``w1 = H / (var3 + tau)`` where ``H`` is the harmonic mean of
    ``var3 + tau`` over the whole image, so ``mean(w1) == 1``.
    """
    G = as_image(G, "guidance")
    _check_tau(tau)
    return WeightMap(_harmonic_weight(local_variance(G, 1, border), tau), "w1")


def chi_field(G, r: int, border=Border.REPLICATE) -> np.ndarray:
    """Product of the 3x3 and (2r+1)^2 local standard deviations."""
    G = as_image(G, "guidance")
    return np.sqrt(local_variance(G, 1, border)) * np.sqrt(local_variance(G, r, border))


def eaw_w2(G, r: int, tau: float = DEFAULT_TAU, border=Border.REPLICATE) -> WeightMap:
    """Multi-scale edge-aware weight ``H2 / (chi + tau)``."""
    _check_tau(tau)
    return WeightMap(_harmonic_weight(chi_field(G, r, border), tau), "w2")


def gamma_map(G, r: int, border=Border.REPLICATE) -> WeightMap:
    """Logistic edge indicator used as the target of ``a`` in the gradient-domain cost.

    ``gamma = 1 - 1 / (1 + exp(eta * (chi - mean(chi))))`` with
    ``eta = 4 / (mean(chi) - min(chi))``. A constant `chi` has no scale to
    normalise by; the limit value 1/2 is returned and the map is flagged.
    """
    chi = chi_field(G, r, border)
    mean = chi.mean()
    spread = mean - chi.min()
    if not spread > 0:
        return WeightMap(np.full_like(chi, 0.5), "gamma", degenerate=True)
    eta = 4.0 / spread
    return WeightMap(expit(eta * (chi - mean)), "gamma")


def mnd(G, border=Border.REPLICATE) -> np.ndarray:
    """Maximum absolute difference between each pixel and its 8 neighbours."""
    G = as_image(G, "guidance")
    h, w = G.shape
    P = pad(G, 1, border)
    out = np.zeros_like(G)
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            if dy == 0 and dx == 0:
                continue
            np.maximum(out, np.abs(P[1 + dy : 1 + dy + h, 1 + dx : 1 + dx + w] - G), out=out)
    return out


def lower_median(x) -> float:
    """Exact median; for an even count the lower of the two middle values."""
    v = np.asarray(x, dtype=np.float64).ravel()
    k = (v.size - 1) // 2
    return float(np.partition(v, k)[k])


def mad_scale(m) -> float:
    """Robust scale ``1.4826 * median(|m - median(m)|)``."""
    m = np.asarray(m, dtype=np.float64)
    return MAD_SCALE * lower_median(np.abs(m - lower_median(m)))


def eaw_w3(G, c: int = DEFAULT_C, border=Border.REPLICATE) -> WeightMap:
    """Robust edge-aware weight: Tukey biweight of MND against ``c * S(G)``.

    ``S(G)`` is the MAD-based scale of the MND field. Pixels with
    ``MND >= c * S(G)`` get weight exactly 0. When ``S(G) == 0`` there is no
    edge scale at all and every weight is 1 (flagged as degenerate).
    """
    if int(c) != c or c < 1:
        raise ParameterError(f"w3 scale c must be a positive integer, got {c}")
    m = mnd(G, border)
    s = mad_scale(m)
    if s == 0.0:
        return WeightMap(np.ones_like(m), "w3", degenerate=True)
    cut = c * s
    inside = np.abs(m) < cut
    w = np.zeros_like(m)
    u = m[inside] / cut
    w[inside] = (1.0 - u * u) ** 2
    return WeightMap(w, "w3")


def mollifier_kernels(r: int) -> KernelField:
    """Normalised bump kernel ``exp(-1 / (1 - |t|^2))``, ``t = offset / (r + 1)``."""
    r = int(r)
    if r < 1:
        raise ParameterError(f"kernel radius must be >= 1, got {r}")
    d = np.arange(-r, r + 1, dtype=np.float64) / (r + 1)
    t2 = d[:, None] ** 2 + d[None, :] ** 2
    inside = t2 < 1.0
    k = np.zeros_like(t2)
    k[inside] = np.exp(-1.0 / (1.0 - t2[inside]))
    return KernelField(k / k.sum())


def mollifier_mean(x, r: int, border=Border.REPLICATE) -> np.ndarray:
    """Weighted local mean of `x` under the radius-`r` mollifier."""
    k = mollifier_kernels(r).weights
    return ndimage.correlate(as_image(x), k, mode=_ND_MODE[as_border(border)])


def _steering_metric(G, r, delta, border):
    # Sobel scaled to a per-pixel derivative estimate
    mode = _ND_MODE[as_border(border)]
    gx = ndimage.sobel(G, axis=1, mode=mode) / 8.0
    gy = ndimage.sobel(G, axis=0, mode=mode) / 8.0
    cxx = box_mean(gx * gx, r, border) / delta + 1.0
    cxy = box_mean(gx * gy, r, border) / delta
    cyy = box_mean(gy * gy, r, border) / delta + 1.0
    sqrt_det = np.sqrt(cxx * cyy - cxy * cxy)
    return cxx, cxy, cyy, sqrt_det


def _steering_offsets(G, r, h, delta, border):
    """Yield ``(dy, dx, w)`` with `w` the unnormalised weight of offset (dy, dx) at every pixel."""
    G = as_image(G, "guidance")
    r = int(r)
    if r < 1:
        raise ParameterError(f"kernel radius must be >= 1, got {r}")
    if not h > 0:
        raise ParameterError(f"steering scale h must be > 0, got {h}")
    if not delta > 0:
        raise ParameterError(f"steering regulariser delta must be > 0, got {delta}")
    H, W = G.shape
    fields = [pad(f, r, border) for f in _steering_metric(G, r, delta, border)]
    scale = -0.5 / (h * h)
    for dy in range(-r, r + 1):
        for dx in range(-r, r + 1):
            sl = (slice(r + dy, r + dy + H), slice(r + dx, r + dx + W))
            cxx, cxy, cyy, sd = (f[sl] for f in fields)
            quad = cxx * (dx * dx) + 2.0 * cxy * (dx * dy) + cyy * (dy * dy)
            yield dy, dx, sd * np.exp(scale * quad)


def default_steering_h(r: int) -> float:
    return max(0.5 * r, 1.0)


def steering_kernels(
    G, r: int, h: float | None = None, delta: float = DEFAULT_DELTA, border=Border.REPLICATE
) -> KernelField:
    """Per-pixel steering kernels aligned with the local gradient structure of `G`.

    The metric at pixel q is ``C(q) = I + S(q) / delta`` where ``S`` is the
    (2r+1)^2 box mean of the outer product of Sobel gradients; on flat
    regions ``C = I`` and the kernel is the isotropic Gaussian of scale `h`.
    The weight given by pixel p to neighbour ``q = p + d`` is
    ``sqrt(det C(q)) * exp(-d' C(q) d / (2 h^2))``, normalised over the window.

    Memory is ``H * W * (2r+1)^2`` floats; use :func:`steering_mean` to apply
    the kernels without materialising them.
    """
    h = default_steering_h(r) if h is None else h
    G = as_image(G, "guidance")
    k = 2 * int(r) + 1
    out = np.empty(G.shape + (k, k))
    for dy, dx, w in _steering_offsets(G, r, h, delta, border):
        out[:, :, dy + r, dx + r] = w
    out /= out.sum(axis=(2, 3), keepdims=True)
    return KernelField(out)


def steering_mean(
    x, G, r: int, h: float | None = None, delta: float = DEFAULT_DELTA, border=Border.REPLICATE
) -> np.ndarray:
    """Steering-kernel weighted mean of `x`, kernels built from guidance `G`."""
    return steering_means([x], G, r, h, delta, border)[0]


def steering_means(xs, G, r, h=None, delta=DEFAULT_DELTA, border=Border.REPLICATE):
    """:func:`steering_mean` of several fields sharing one kernel pass."""
    h = default_steering_h(r) if h is None else h
    xs = [as_image(x) for x in xs]
    H, W = xs[0].shape
    Ps = [pad(x, r, border) for x in xs]
    accs = [np.zeros((H, W)) for _ in xs]
    norm = np.zeros((H, W))
    for dy, dx, w in _steering_offsets(G, r, h, delta, border):
        for acc, P in zip(accs, Ps):
            acc += w * P[r + dy : r + dy + H, r + dx : r + dx + W]
        norm += w
    return [acc / norm for acc in accs]
