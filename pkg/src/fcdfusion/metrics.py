"""Fusion quality metrics.

Color deviation (CD) measures how far fusion bends the direction of the RGB
color vector, in radians averaged over pixels; it is the headline metric for
color preservation and lower is better. The classical suite (CE, EN, MI, AG,
EI, SD, SF, PSNR, SSIM, RMSE) is computed on BT.601 grayscale. Metrics that
need a reference are evaluated against both the visible image (as grayscale)
and the infrared image: CE, PSNR, SSIM and RMSE report the average of the two
scores, MI reports the sum.

Histogram-based metrics use 256 bins. Entropies and mutual information are in
bits. PSNR of identical images is +infinity and is serialized as ``inf`` by
the report writers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
from scipy.signal import convolve2d

from .core import DimensionMismatchError, ImageBuffer, ImagePair, ImageTooSmallError, to_gray

__all__ = [
    "METRIC_NAMES",
    "METRIC_DIRECTIONS",
    "MetricReport",
    "color_deviation",
    "cross_entropy",
    "entropy",
    "mutual_information",
    "average_gradient",
    "edge_intensity",
    "std_deviation",
    "spatial_frequency",
    "psnr",
    "ssim",
    "rmse",
    "evaluate_all",
]

METRIC_NAMES = ("CD", "CE", "EN", "MI", "AG", "EI", "SD", "SF", "PSNR", "SSIM", "RMSE")

# "higher" means larger values indicate better fusion.
METRIC_DIRECTIONS: Mapping[str, str] = {
    "CD": "lower",
    "CE": "lower",
    "EN": "higher",
    "MI": "higher",
    "AG": "higher",
    "EI": "higher",
    "SD": "higher",
    "SF": "higher",
    "PSNR": "higher",
    "SSIM": "higher",
    "RMSE": "lower",
}

SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
SSIM_K1 = 0.01
SSIM_K2 = 0.03
SSIM_L = 255.0

_SOBEL_X = np.array([[-1.0, 0.0, 1.0], [-2.0, 0.0, 2.0], [-1.0, 0.0, 1.0]])
_SOBEL_Y = np.array([[-1.0, -2.0, -1.0], [0.0, 0.0, 0.0], [1.0, 2.0, 1.0]])


def _require_same_size(a: ImageBuffer, b: ImageBuffer, what: str) -> None:
    if a.size != b.size:
        raise DimensionMismatchError(a.size, b.size, what=what)


def _require_min_size(img: ImageBuffer, minimum: int, metric: str) -> None:
    if img.width < minimum or img.height < minimum:
        raise ImageTooSmallError(
            f"{metric} needs at least {minimum}x{minimum} pixels, got {img.width}x{img.height}"
        )


def _gray_f64(img: ImageBuffer) -> np.ndarray:
    return to_gray(img).pixels.astype(np.float64)


def _hist256(img: ImageBuffer) -> np.ndarray:
    return np.bincount(img.pixels.ravel(), minlength=256).astype(np.float64)


def color_deviation(visible: ImageBuffer, fused: ImageBuffer) -> float:
    """Mean angle in radians between visible and fused RGB color vectors.

    Pixels where either vector is zero contribute an angle of 0, and so do
    pixels whose two vectors are identical (the quotient dot/(|a||b|) can land
    one ulp below 1, which arccos would turn into a spurious ~1e-8 angle). The
    arccos argument is clamped to [-1, 1] to absorb floating-point drift.
    """
    if not (visible.is_rgb and fused.is_rgb):
        raise ValueError("color deviation needs two RGB buffers")
    _require_same_size(visible, fused, "color deviation inputs")
    v = visible.pixels.reshape(-1, 3).astype(np.float64)
    f = fused.pixels.reshape(-1, 3).astype(np.float64)
    dot = np.einsum("ij,ij->i", v, f)
    nv = np.linalg.norm(v, axis=1)
    nf = np.linalg.norm(f, axis=1)
    ok = (nv > 0.0) & (nf > 0.0) & ~np.all(v == f, axis=1)
    cosine = np.ones_like(dot)
    np.divide(dot, nv * nf, out=cosine, where=ok)
    angles = np.where(ok, np.arccos(np.clip(cosine, -1.0, 1.0)), 0.0)
    return float(angles.mean())


def entropy(img: ImageBuffer) -> float:
    """Shannon entropy of the 256-bin intensity histogram, in bits."""
    hist = _hist256(img)
    p = hist / hist.sum()
    nz = p > 0.0
    return float(-(p[nz] * np.log2(p[nz])).sum())


def cross_entropy(reference: ImageBuffer, fused: ImageBuffer) -> float:
    """Relative entropy sum(p * log2(p / q)) of the intensity histograms.

    p comes from the reference, q from the fused image. Empty fused bins are
    smoothed additively with eps = 1 / (2 * pixel count) so the sum stays
    finite; identical histograms give exactly 0.
    """
    _require_same_size(reference, fused, "cross entropy inputs")
    n = reference.width * reference.height
    p = _hist256(reference) / n
    q = _hist256(fused) / n
    eps = 1.0 / (2.0 * n)
    q = np.where(q > 0.0, q, eps)
    nz = p > 0.0
    return float((p[nz] * np.log2(p[nz] / q[nz])).sum())


def _mi2(a: ImageBuffer, b: ImageBuffer) -> float:
    joint = np.bincount(
        a.pixels.ravel().astype(np.int64) * 256 + b.pixels.ravel().astype(np.int64),
        minlength=256 * 256,
    ).astype(np.float64)
    pj = joint / joint.sum()
    nz = pj > 0.0
    h_joint = float(-(pj[nz] * np.log2(pj[nz])).sum())
    return entropy(a) + entropy(b) - h_joint


def mutual_information(pair: ImagePair, fused: ImageBuffer) -> float:
    """MI(visible-gray; fused-gray) + MI(infrared; fused-gray), in bits."""
    _require_same_size(pair.visible, fused, "mutual information inputs")
    fused_gray = to_gray(fused)
    return _mi2(to_gray(pair.visible), fused_gray) + _mi2(pair.infrared, fused_gray)


def average_gradient(img: ImageBuffer) -> float:
    """Mean of sqrt((dx^2 + dy^2) / 2) over forward differences."""
    _require_min_size(img, 2, "average gradient")
    a = _gray_f64(img)
    dx = a[:, 1:] - a[:, :-1]
    dy = a[1:, :] - a[:-1, :]
    grad = np.sqrt((dx[:-1, :] ** 2 + dy[:, :-1] ** 2) / 2.0)
    return float(grad.mean())


def edge_intensity(img: ImageBuffer) -> float:
    """Mean 3x3 Sobel gradient magnitude over the valid interior."""
    _require_min_size(img, 3, "edge intensity")
    a = _gray_f64(img)
    gx = convolve2d(a, _SOBEL_X, mode="valid")
    gy = convolve2d(a, _SOBEL_Y, mode="valid")
    return float(np.sqrt(gx**2 + gy**2).mean())


def std_deviation(img: ImageBuffer) -> float:
    """Population standard deviation of intensities."""
    return float(_gray_f64(img).std())


def spatial_frequency(img: ImageBuffer) -> float:
    """sqrt(RF^2 + CF^2) where RF/CF are RMS first differences along rows/columns."""
    _require_min_size(img, 2, "spatial frequency")
    a = _gray_f64(img)
    rf = math.sqrt(float(((a[:, 1:] - a[:, :-1]) ** 2).mean()))
    cf = math.sqrt(float(((a[1:, :] - a[:-1, :]) ** 2).mean()))
    return math.hypot(rf, cf)


def _mse2(a: np.ndarray, b: np.ndarray) -> float:
    return float(((a - b) ** 2).mean())


def _psnr_from_mse(mse: float) -> float:
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(255.0**2 / mse)


def psnr(pair: ImagePair, fused: ImageBuffer) -> float:
    """Mean PSNR of fused-gray against visible-gray and infrared, in dB.

    Identical inputs give +infinity.
    """
    _require_same_size(pair.visible, fused, "psnr inputs")
    f = _gray_f64(fused)
    p_vis = _psnr_from_mse(_mse2(_gray_f64(pair.visible), f))
    p_ir = _psnr_from_mse(_mse2(pair.infrared.pixels.astype(np.float64), f))
    return (p_vis + p_ir) / 2.0


def rmse(pair: ImagePair, fused: ImageBuffer) -> float:
    """Mean root-mean-square error against both references, scaled to [0, 1]."""
    _require_same_size(pair.visible, fused, "rmse inputs")
    f = _gray_f64(fused)
    r_vis = math.sqrt(_mse2(_gray_f64(pair.visible), f)) / 255.0
    r_ir = math.sqrt(_mse2(pair.infrared.pixels.astype(np.float64), f)) / 255.0
    return (r_vis + r_ir) / 2.0


def _gaussian_window() -> np.ndarray:
    half = (SSIM_WINDOW - 1) // 2
    x = np.arange(-half, half + 1, dtype=np.float64)
    g = np.exp(-(x**2) / (2.0 * SSIM_SIGMA**2))
    g /= g.sum()
    return np.outer(g, g)


_SSIM_KERNEL = _gaussian_window()


def _ssim2(a: np.ndarray, b: np.ndarray) -> float:
    c1 = (SSIM_K1 * SSIM_L) ** 2
    c2 = (SSIM_K2 * SSIM_L) ** 2
    k = _SSIM_KERNEL
    mu_a = convolve2d(a, k, mode="valid")
    mu_b = convolve2d(b, k, mode="valid")
    var_a = convolve2d(a * a, k, mode="valid") - mu_a**2
    var_b = convolve2d(b * b, k, mode="valid") - mu_b**2
    cov = convolve2d(a * b, k, mode="valid") - mu_a * mu_b
    num = (2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2)
    den = (mu_a**2 + mu_b**2 + c1) * (var_a + var_b + c2)
    return float((num / den).mean())


def ssim(pair: ImagePair, fused: ImageBuffer) -> float:
    """Mean structural similarity against both references.

    Gaussian-weighted 11x11 windows (sigma 1.5) fully inside the image,
    K1 = 0.01, K2 = 0.03, dynamic range 255.
    """
    _require_same_size(pair.visible, fused, "ssim inputs")
    _require_min_size(fused, SSIM_WINDOW, "ssim")
    f = _gray_f64(fused)
    s_vis = _ssim2(_gray_f64(pair.visible), f)
    s_ir = _ssim2(pair.infrared.pixels.astype(np.float64), f)
    return (s_vis + s_ir) / 2.0


@dataclass(frozen=True)
class MetricReport:
    """Metric values for one fused image, with per-metric failure notes."""

    pair_id: str
    method: str
    values: Mapping[str, float] = field(default_factory=dict)
    errors: Mapping[str, str] = field(default_factory=dict)


def evaluate_all(pair: ImagePair, fused: ImageBuffer, method: str = "") -> MetricReport:
    """Run the full metric suite; metrics that cannot run are recorded as errors.

    A failing metric (for example SSIM on an image smaller than its window)
    leaves its entry absent from ``values`` and notes the reason in ``errors``.
    """
    _require_same_size(pair.visible, fused, "evaluation inputs")
    values: dict[str, float] = {}
    errors: dict[str, str] = {}

    vis_gray = to_gray(pair.visible)
    fused_gray = to_gray(fused)

    def run(name, fn):
        try:
            values[name] = fn()
        except (ImageTooSmallError, DimensionMismatchError, ValueError) as exc:
            errors[name] = str(exc)

    run("CD", lambda: color_deviation(pair.visible, fused))
    run(
        "CE",
        lambda: (cross_entropy(vis_gray, fused_gray) + cross_entropy(pair.infrared, fused_gray))
        / 2.0,
    )
    run("EN", lambda: entropy(fused_gray))
    run("MI", lambda: mutual_information(pair, fused))
    run("AG", lambda: average_gradient(fused_gray))
    run("EI", lambda: edge_intensity(fused_gray))
    run("SD", lambda: std_deviation(fused_gray))
    run("SF", lambda: spatial_frequency(fused_gray))
    run("PSNR", lambda: psnr(pair, fused))
    run("SSIM", lambda: ssim(pair, fused))
    run("RMSE", lambda: rmse(pair, fused))

    return MetricReport(pair_id=pair.pair_id, method=method, values=values, errors=errors)
