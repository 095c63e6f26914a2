"""NTSC YIQ and hexcone HSV conversions for 8-bit RGB.

Scalar functions operate on single pixels and are the reference semantics;
the ``*_planes`` helpers are their vectorized twins used by the image-level
fusers and produce bit-identical values. YIQ keeps all three components in
the [0, 255] scale of the inputs (y in [0, 255], i and q signed). HSV uses
hue in degrees [0, 360), saturation and value in [0, 1].
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .core import Rgb8Pixel, quantize_u8

__all__ = [
    "YiqColor",
    "HsvColor",
    "YIQ_FORWARD",
    "YIQ_INVERSE",
    "rgb_to_yiq",
    "yiq_to_rgb",
    "rgb_to_hsv",
    "hsv_to_rgb",
    "rgb_to_yiq_planes",
    "yiq_to_rgb_planes",
    "rgb_to_hsv_planes",
    "hsv_to_rgb_planes",
]


class YiqColor(NamedTuple):
    """Luma y plus chroma i, q; same amplitude scale as the RGB inputs."""

    y: float
    i: float
    q: float


class HsvColor(NamedTuple):
    """Hue in degrees [0, 360), saturation and value in [0, 1]."""

    h: float
    s: float
    v: float


YIQ_FORWARD = np.array(
    [
        [0.299, 0.587, 0.114],
        [0.596, -0.274, -0.322],
        [0.211, -0.523, 0.312],
    ]
)

# Exact double-precision inverse of the forward matrix, so that an unrounded
# round trip reproduces the input to machine precision.
YIQ_INVERSE = np.linalg.inv(YIQ_FORWARD)

_FWD = tuple(tuple(float(x) for x in row) for row in YIQ_FORWARD)
_INV = tuple(tuple(float(x) for x in row) for row in YIQ_INVERSE)


def rgb_to_yiq(c: Rgb8Pixel) -> YiqColor:
    """Forward NTSC transform of an 8-bit color."""
    y, i, q = rgb_to_yiq_planes(float(c.r), float(c.g), float(c.b))
    return YiqColor(y, i, q)


def yiq_to_rgb(c: YiqColor) -> Rgb8Pixel:
    """Inverse NTSC transform, rounded and clamped to 8-bit RGB."""
    r, g, b = yiq_to_rgb_planes(c.y, c.i, c.q)
    return Rgb8Pixel(quantize_u8(r), quantize_u8(g), quantize_u8(b))


def rgb_to_yiq_planes(r, g, b):
    """Forward NTSC transform on scalars or same-shaped float arrays."""
    y = _FWD[0][0] * r + _FWD[0][1] * g + _FWD[0][2] * b
    i = _FWD[1][0] * r + _FWD[1][1] * g + _FWD[1][2] * b
    q = _FWD[2][0] * r + _FWD[2][1] * g + _FWD[2][2] * b
    return y, i, q


def yiq_to_rgb_planes(y, i, q):
    """Inverse NTSC transform on scalars or arrays; no rounding or clamping."""
    r = _INV[0][0] * y + _INV[0][1] * i + _INV[0][2] * q
    g = _INV[1][0] * y + _INV[1][1] * i + _INV[1][2] * q
    b = _INV[2][0] * y + _INV[2][1] * i + _INV[2][2] * q
    return r, g, b


def rgb_to_hsv(c: Rgb8Pixel) -> HsvColor:
    """Hexcone HSV of an 8-bit color; achromatic pixels get h = 0, s = 0."""
    r, g, b = c
    maxc = max(r, g, b)
    minc = min(r, g, b)
    v = maxc / 255.0
    if maxc == minc:
        return HsvColor(0.0, 0.0, v)
    delta = maxc - minc
    s = delta / maxc
    rc = (maxc - r) / delta
    gc = (maxc - g) / delta
    bc = (maxc - b) / delta
    if r == maxc:
        h6 = bc - gc
    elif g == maxc:
        h6 = 2.0 + rc - bc
    else:
        h6 = 4.0 + gc - rc
    return HsvColor(60.0 * (h6 % 6.0), s, v)


def hsv_to_rgb(c: HsvColor) -> Rgb8Pixel:
    """Sector reconstruction back to 8-bit RGB, rounded and clamped."""
    h, s, v = c
    value = 255.0 * v
    if s == 0.0:
        gray = quantize_u8(value)
        return Rgb8Pixel(gray, gray, gray)
    hh = (h % 360.0) / 60.0
    i_raw = int(hh)
    f = hh - i_raw
    sector = i_raw % 6
    p = value * (1.0 - s)
    q = value * (1.0 - s * f)
    t = value * (1.0 - s * (1.0 - f))
    r, g, b = (
        (value, t, p),
        (q, value, p),
        (p, value, t),
        (p, q, value),
        (t, p, value),
        (value, p, q),
    )[sector]
    return Rgb8Pixel(quantize_u8(r), quantize_u8(g), quantize_u8(b))


def rgb_to_hsv_planes(r: np.ndarray, g: np.ndarray, b: np.ndarray):
    """Vectorized :func:`rgb_to_hsv` on float planes holding 8-bit values."""
    maxc = np.maximum(np.maximum(r, g), b)
    minc = np.minimum(np.minimum(r, g), b)
    v = maxc / 255.0
    delta = maxc - minc
    chromatic = delta > 0.0
    # Guarded denominators keep the unselected branches finite.
    m_safe = np.where(maxc > 0.0, maxc, 1.0)
    d_safe = np.where(chromatic, delta, 1.0)
    s = delta / m_safe
    rc = (maxc - r) / d_safe
    gc = (maxc - g) / d_safe
    bc = (maxc - b) / d_safe
    h6 = np.select([r == maxc, g == maxc], [bc - gc, 2.0 + rc - bc], default=4.0 + gc - rc)
    h = np.where(chromatic, 60.0 * (h6 % 6.0), 0.0)
    return h, s, v


def hsv_to_rgb_planes(h: np.ndarray, s: np.ndarray, v: np.ndarray):
    """Vectorized :func:`hsv_to_rgb`; returns unrounded float planes."""
    value = 255.0 * v
    hh = (h % 360.0) / 60.0
    i_raw = np.floor(hh)
    f = hh - i_raw
    sector = i_raw.astype(np.int64) % 6
    p = value * (1.0 - s)
    q = value * (1.0 - s * f)
    t = value * (1.0 - s * (1.0 - f))
    r = np.choose(sector, [value, q, p, p, t, value])
    g = np.choose(sector, [t, value, value, q, p, p])
    b = np.choose(sector, [p, p, t, value, value, q])
    return r, g, b
