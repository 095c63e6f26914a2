"""Channel-averaging fusion baselines and the method dispatch used by the CLI.

Three classic fast fusers are provided next to the vector-scaling kernel:

* RGB-AVG: per-channel midpoint of the visible color and the infrared value.
* YIQ-AVG: average only the NTSC luma channel, keep chroma i, q.
* HSV-AVG: average only the hexcone value channel, keep hue and saturation;
  an optional gamma is applied to the infrared intensity first.

Every fuser has a scalar per-pixel reference and a vectorized image path that
produces identical bytes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from . import colorspace
from .core import ImageBuffer, ImagePair, Rgb8Pixel, quantize_u8, quantize_u8_array
from .kernel import FcdParams, fuse_image

__all__ = [
    "FcdFusion",
    "RgbAvg",
    "YiqAvg",
    "HsvAvg",
    "FusionMethod",
    "METHOD_TOKENS",
    "method_name",
    "parse_method",
    "parse_methods",
    "fuse_rgb_avg",
    "fuse_yiq_avg",
    "fuse_hsv_avg",
    "fuse_image_with",
]


@dataclass(frozen=True)
class FcdFusion:
    """Vector-scaling kernel with its parameters."""

    params: FcdParams = FcdParams()


@dataclass(frozen=True)
class RgbAvg:
    """Per-channel averaging."""


@dataclass(frozen=True)
class YiqAvg:
    """Luma-only averaging in YIQ space."""


@dataclass(frozen=True)
class HsvAvg:
    """Value-only averaging in HSV space; gamma = 1 is the plain baseline."""

    gamma: float = 1.0

    def __post_init__(self) -> None:
        if not self.gamma > 0.0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")


FusionMethod = Union[FcdFusion, RgbAvg, YiqAvg, HsvAvg]

METHOD_TOKENS = ("fcd", "rgb", "yiq", "hsv")


def method_name(method: FusionMethod) -> str:
    """Canonical token for a method instance, as used in reports and paths."""
    if isinstance(method, FcdFusion):
        return "fcd"
    if isinstance(method, RgbAvg):
        return "rgb"
    if isinstance(method, YiqAvg):
        return "yiq"
    if isinstance(method, HsvAvg):
        return "hsv"
    raise TypeError(f"unknown fusion method: {method!r}")


def parse_method(token: str, gamma: float = 2.0, averaging: bool = True) -> FusionMethod:
    """Build a method from its token; gamma/averaging apply to ``fcd`` only."""
    t = token.strip().lower()
    if t == "fcd":
        return FcdFusion(FcdParams(gamma=gamma, averaging=averaging))
    if t == "rgb":
        return RgbAvg()
    if t == "yiq":
        return YiqAvg()
    if t == "hsv":
        return HsvAvg()
    raise ValueError(f"unknown method token {token!r}, expected one of {', '.join(METHOD_TOKENS)}")


def parse_methods(spec: str, gamma: float = 2.0, averaging: bool = True) -> tuple[FusionMethod, ...]:
    """Parse a comma-separated method list, rejecting duplicates."""
    tokens = [t.strip().lower() for t in spec.split(",") if t.strip()]
    if not tokens:
        raise ValueError("empty method list")
    if len(set(tokens)) != len(tokens):
        raise ValueError(f"duplicate method in {spec!r}")
    return tuple(parse_method(t, gamma=gamma, averaging=averaging) for t in tokens)


def fuse_rgb_avg(c_v: Rgb8Pixel, v_i: int) -> Rgb8Pixel:
    """Midpoint of color and infrared per channel, ties rounded up."""
    return Rgb8Pixel(
        (c_v.r + v_i + 1) >> 1,
        (c_v.g + v_i + 1) >> 1,
        (c_v.b + v_i + 1) >> 1,
    )


def fuse_yiq_avg(c_v: Rgb8Pixel, v_i: int) -> Rgb8Pixel:
    """Average luma with the infrared value, keep chroma, convert back."""
    y, i, q = colorspace.rgb_to_yiq(c_v)
    y_f = (y + v_i) / 2.0
    return colorspace.yiq_to_rgb(colorspace.YiqColor(y_f, i, q))


def fuse_hsv_avg(c_v: Rgb8Pixel, v_i: int, gamma: float = 1.0) -> Rgb8Pixel:
    """Average the value channel with the (gamma-corrected) infrared.

    Hue and saturation pass through untouched, so chromaticity is preserved
    up to 8-bit quantization.
    """
    h, s, v = colorspace.rgb_to_hsv(c_v)
    a = v_i / 255.0
    if gamma != 1.0:
        a = a**gamma
    v_f = (v + a) / 2.0
    return colorspace.hsv_to_rgb(colorspace.HsvColor(h, s, v_f))


def _fuse_image_rgb_avg(pair: ImagePair) -> ImageBuffer:
    rgb = pair.visible.pixels.astype(np.uint16)
    ir = pair.infrared.pixels.astype(np.uint16)
    out = (rgb + ir[..., None] + 1) >> 1
    return ImageBuffer(out.astype(np.uint8))


def _fuse_image_yiq_avg(pair: ImagePair) -> ImageBuffer:
    planes = pair.visible.pixels.astype(np.float64)
    ir = pair.infrared.pixels.astype(np.float64)
    y, i, q = colorspace.rgb_to_yiq_planes(planes[..., 0], planes[..., 1], planes[..., 2])
    y = (y + ir) / 2.0
    r, g, b = colorspace.yiq_to_rgb_planes(y, i, q)
    return ImageBuffer(quantize_u8_array(np.stack([r, g, b], axis=-1)))


def _fuse_image_hsv_avg(pair: ImagePair, gamma: float) -> ImageBuffer:
    planes = pair.visible.pixels.astype(np.float64)
    h, s, v = colorspace.rgb_to_hsv_planes(planes[..., 0], planes[..., 1], planes[..., 2])
    if gamma != 1.0:
        # Scalar pow table: bit-identical to the per-pixel reference.
        table = np.array([(x / 255.0) ** gamma for x in range(256)])
        a = table[pair.infrared.pixels]
    else:
        a = pair.infrared.pixels.astype(np.float64) / 255.0
    v = (v + a) / 2.0
    r, g, b = colorspace.hsv_to_rgb_planes(h, s, v)
    return ImageBuffer(quantize_u8_array(np.stack([r, g, b], axis=-1)))


def fuse_image_with(method: FusionMethod, pair: ImagePair) -> ImageBuffer:
    """Fuse a pair with any of the supported methods."""
    if isinstance(method, FcdFusion):
        return fuse_image(pair, method.params)
    if isinstance(method, RgbAvg):
        return _fuse_image_rgb_avg(pair)
    if isinstance(method, YiqAvg):
        return _fuse_image_yiq_avg(pair)
    if isinstance(method, HsvAvg):
        return _fuse_image_hsv_avg(pair, method.gamma)
    raise TypeError(f"unknown fusion method: {method!r}")
