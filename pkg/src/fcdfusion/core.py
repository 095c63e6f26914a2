"""Pixel and raster data model shared by the fusion kernels and the metric suite.

Images are 8-bit rasters with the origin at the top-left corner, stored
row-major: grayscale as an (h, w) array, RGB as an (h, w, 3) array. All
float-to-8-bit conversions in the package go through :func:`quantize_u8` /
:func:`quantize_u8_array`, which round half away from zero and clamp.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

__all__ = [
    "Rgb8Pixel",
    "Gray8Pixel",
    "ColorVec3",
    "ImageBuffer",
    "ImagePair",
    "DimensionMismatchError",
    "ImageTooSmallError",
    "GRAY_WEIGHTS",
    "make_pair",
    "to_gray",
    "vec_of",
    "round_half_away",
    "quantize_u8",
    "quantize_u8_array",
]

# BT.601 luma weights, also used whenever a 3-channel infrared file has to be
# collapsed to a single plane.
GRAY_WEIGHTS = (0.299, 0.587, 0.114)


class Rgb8Pixel(NamedTuple):
    """8-bit RGB color, each channel an integer in [0, 255]."""

    r: int
    g: int
    b: int


class Gray8Pixel(NamedTuple):
    """8-bit monochrome intensity in [0, 255]."""

    v: int


class ColorVec3(NamedTuple):
    """An RGB color treated as a real 3-vector.

    The vector length carries brightness, the direction carries chromaticity;
    angles between such vectors are what the color-deviation metric measures.
    """

    r: float
    g: float
    b: float


def vec_of(p: Rgb8Pixel) -> ColorVec3:
    """Lift an 8-bit pixel to a real color vector, losslessly."""
    return ColorVec3(float(p.r), float(p.g), float(p.b))


def round_half_away(x: float) -> int:
    """Round to the nearest integer with ties away from zero."""
    if x >= 0.0:
        return int(math.floor(x + 0.5))
    return int(math.ceil(x - 0.5))


def quantize_u8(x: float) -> int:
    """Round half away from zero, then clamp to [0, 255]."""
    return min(255, max(0, round_half_away(x)))


def quantize_u8_array(x: np.ndarray) -> np.ndarray:
    """Vectorized :func:`quantize_u8`: float array in, uint8 array out."""
    rounded = np.where(x >= 0.0, np.floor(x + 0.5), np.ceil(x - 0.5))
    return np.clip(rounded, 0.0, 255.0).astype(np.uint8)


class DimensionMismatchError(ValueError):
    """Two rasters that must share a size do not.

    Carries both sizes as ``(width, height)`` tuples.
    """

    def __init__(self, size_a: tuple[int, int], size_b: tuple[int, int], what: str = "images"):
        self.size_a = size_a
        self.size_b = size_b
        super().__init__(
            f"{what} disagree in size: {size_a[0]}x{size_a[1]} vs {size_b[0]}x{size_b[1]}"
        )


class ImageTooSmallError(ValueError):
    """An operation needs a larger raster than it was given."""


@dataclass(frozen=True)
class ImageBuffer:
    """Immutable 8-bit raster, grayscale (h, w) or RGB (h, w, 3).

    The pixel array is copied on construction and marked read-only, so buffers
    can be shared freely across worker threads.
    """

    pixels: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.pixels)
        if arr.dtype != np.uint8:
            raise TypeError(f"pixel array must be uint8, got {arr.dtype}")
        if arr.ndim == 2:
            pass
        elif arr.ndim == 3 and arr.shape[2] == 3:
            pass
        else:
            raise ValueError(f"expected (h, w) or (h, w, 3) array, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"image must be at least 1x1, got shape {arr.shape}")
        arr = arr.copy(order="C")
        arr.flags.writeable = False
        object.__setattr__(self, "pixels", arr)

    @classmethod
    def rgb(cls, pixels: np.ndarray) -> "ImageBuffer":
        buf = cls(pixels)
        if not buf.is_rgb:
            raise ValueError("expected a 3-channel RGB array")
        return buf

    @classmethod
    def gray(cls, pixels: np.ndarray) -> "ImageBuffer":
        buf = cls(pixels)
        if not buf.is_gray:
            raise ValueError("expected a single-channel grayscale array")
        return buf

    @property
    def height(self) -> int:
        return int(self.pixels.shape[0])

    @property
    def width(self) -> int:
        return int(self.pixels.shape[1])

    @property
    def size(self) -> tuple[int, int]:
        """(width, height)."""
        return (self.width, self.height)

    @property
    def is_rgb(self) -> bool:
        return self.pixels.ndim == 3

    @property
    def is_gray(self) -> bool:
        return self.pixels.ndim == 2

    def pixel(self, x: int, y: int) -> Rgb8Pixel | Gray8Pixel:
        """Pixel at column x, row y."""
        if self.is_rgb:
            r, g, b = self.pixels[y, x]
            return Rgb8Pixel(int(r), int(g), int(b))
        return Gray8Pixel(int(self.pixels[y, x]))


@dataclass(frozen=True)
class ImagePair:
    """A registered visible (RGB) / infrared (grayscale) image pair."""

    pair_id: str
    visible: ImageBuffer
    infrared: ImageBuffer

    def __post_init__(self) -> None:
        if not self.visible.is_rgb:
            raise ValueError(f"pair {self.pair_id!r}: visible image must be RGB")
        if not self.infrared.is_gray:
            raise ValueError(f"pair {self.pair_id!r}: infrared image must be grayscale")
        if self.visible.size != self.infrared.size:
            raise DimensionMismatchError(
                self.visible.size, self.infrared.size, what=f"pair {self.pair_id!r} images"
            )

    @property
    def width(self) -> int:
        return self.visible.width

    @property
    def height(self) -> int:
        return self.visible.height


def make_pair(pair_id: str, visible: ImageBuffer, infrared: ImageBuffer) -> ImagePair:
    """Bundle a visible/infrared pair, rejecting mismatched sizes."""
    return ImagePair(pair_id, visible, infrared)


def to_gray(image: ImageBuffer) -> ImageBuffer:
    """BT.601 grayscale of an RGB buffer; grayscale input is returned as-is."""
    if image.is_gray:
        return image
    planes = image.pixels.astype(np.float64)
    wr, wg, wb = GRAY_WEIGHTS
    luma = wr * planes[..., 0] + wg * planes[..., 1] + wb * planes[..., 2]
    return ImageBuffer(quantize_u8_array(luma))
