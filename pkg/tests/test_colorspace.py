"""Tests for the RGB/YIQ and RGB/HSV conversions used by the baselines."""

import numpy as np
import pytest

from fcdfusion.colorspace import (
    HsvColor,
    YiqColor,
    hsv_to_rgb,
    hsv_to_rgb_planes,
    rgb_to_hsv,
    rgb_to_hsv_planes,
    rgb_to_yiq,
    rgb_to_yiq_planes,
    yiq_to_rgb,
    yiq_to_rgb_planes,
)
from fcdfusion.core import Rgb8Pixel, quantize_u8_array


def test_yiq_of_pure_red_frozen():
    y, i, q = rgb_to_yiq(Rgb8Pixel(255, 0, 0))
    assert y == 76.24499999999999
    assert i == 151.98
    assert q == 53.805


def test_yiq_luma_matches_bt601_weights(rng):
    for _ in range(300):
        r, g, b = (int(v) for v in rng.integers(0, 256, size=3))
        got = rgb_to_yiq(Rgb8Pixel(r, g, b))
        assert got.y == pytest.approx(0.299 * r + 0.587 * g + 0.114 * b, abs=1e-9)


def test_yiq_chroma_of_gray_is_zero(rng):
    for v in (0, 1, 77, 128, 254, 255):
        got = rgb_to_yiq(Rgb8Pixel(v, v, v))
        assert got.i == pytest.approx(0.0, abs=1e-10)
        assert got.q == pytest.approx(0.0, abs=1e-10)


def test_yiq_round_trip_is_exact(rng):
    for _ in range(5000):
        r, g, b = (int(v) for v in rng.integers(0, 256, size=3))
        back = yiq_to_rgb(rgb_to_yiq(Rgb8Pixel(r, g, b)))
        assert back == Rgb8Pixel(r, g, b)


def test_yiq_to_rgb_clamps_out_of_gamut():
    assert yiq_to_rgb(YiqColor(300.0, 0.0, 0.0)) == Rgb8Pixel(255, 255, 255)
    assert yiq_to_rgb(YiqColor(-10.0, 0.0, 0.0)) == Rgb8Pixel(0, 0, 0)


def test_hsv_frozen_values():
    assert rgb_to_hsv(Rgb8Pixel(100, 50, 25)) == HsvColor(
        20.000000000000004, 0.75, 0.39215686274509803
    )
    assert rgb_to_hsv(Rgb8Pixel(0, 0, 0)) == HsvColor(0.0, 0.0, 0.0)
    assert rgb_to_hsv(Rgb8Pixel(77, 77, 77)) == HsvColor(0.0, 0.0, 0.30196078431372547)
    assert rgb_to_hsv(Rgb8Pixel(255, 0, 0)) == HsvColor(0.0, 1.0, 1.0)
    assert rgb_to_hsv(Rgb8Pixel(0, 255, 0)) == HsvColor(120.0, 1.0, 1.0)
    assert rgb_to_hsv(Rgb8Pixel(0, 0, 255)) == HsvColor(240.0, 1.0, 1.0)


def test_hsv_to_rgb_frozen_values():
    assert hsv_to_rgb(HsvColor(0.0, 1.0, 1.0)) == Rgb8Pixel(255, 0, 0)
    assert hsv_to_rgb(HsvColor(120.0, 1.0, 1.0)) == Rgb8Pixel(0, 255, 0)
    assert hsv_to_rgb(HsvColor(240.0, 1.0, 0.5)) == Rgb8Pixel(0, 0, 128)
    assert hsv_to_rgb(HsvColor(300.0, 0.5, 1.0)) == Rgb8Pixel(255, 128, 255)


def test_hue_wraps_modulo_360():
    assert hsv_to_rgb(HsvColor(360.0, 1.0, 1.0)) == Rgb8Pixel(255, 0, 0)
    assert hsv_to_rgb(HsvColor(-60.0, 1.0, 1.0)) == Rgb8Pixel(255, 0, 255)
    assert hsv_to_rgb(HsvColor(420.0, 1.0, 1.0)) == hsv_to_rgb(HsvColor(60.0, 1.0, 1.0))


def test_zero_saturation_reconstructs_gray():
    for h in (0.0, 17.3, 120.0, 359.9):
        assert hsv_to_rgb(HsvColor(h, 0.0, 0.5)) == Rgb8Pixel(128, 128, 128)


def test_hsv_round_trip_is_exact(rng):
    for _ in range(5000):
        r, g, b = (int(v) for v in rng.integers(0, 256, size=3))
        back = hsv_to_rgb(rgb_to_hsv(Rgb8Pixel(r, g, b)))
        assert back == Rgb8Pixel(r, g, b)


def test_yiq_planes_match_scalar(rng):
    arr = rng.integers(0, 256, size=(11, 9, 3), dtype=np.uint8).astype(np.float64)
    y, i, q = rgb_to_yiq_planes(arr[..., 0], arr[..., 1], arr[..., 2])
    r2, g2, b2 = yiq_to_rgb_planes(y, i, q)
    for yy in range(11):
        for xx in range(9):
            pix = Rgb8Pixel(*(int(v) for v in arr[yy, xx]))
            want = rgb_to_yiq(pix)
            assert (y[yy, xx], i[yy, xx], q[yy, xx]) == tuple(want)
            # the inverse planes carry unquantized reals; compare pre-rounding
            assert r2[yy, xx] == pytest.approx(pix.r, abs=1e-9)
            assert g2[yy, xx] == pytest.approx(pix.g, abs=1e-9)
            assert b2[yy, xx] == pytest.approx(pix.b, abs=1e-9)


def test_hsv_planes_match_scalar(rng):
    arr = rng.integers(0, 256, size=(13, 7, 3), dtype=np.uint8).astype(np.float64)
    # force some achromatic and single-channel pixels into the sample
    arr[0, 0] = (0.0, 0.0, 0.0)
    arr[0, 1] = (200.0, 200.0, 200.0)
    arr[0, 2] = (0.0, 255.0, 0.0)
    h, s, v = rgb_to_hsv_planes(arr[..., 0], arr[..., 1], arr[..., 2])
    r2, g2, b2 = hsv_to_rgb_planes(h, s, v)
    q = [quantize_u8_array(p) for p in (r2, g2, b2)]
    for yy in range(13):
        for xx in range(7):
            pix = Rgb8Pixel(*(int(c) for c in arr[yy, xx]))
            want = rgb_to_hsv(pix)
            assert (h[yy, xx], s[yy, xx], v[yy, xx]) == tuple(want), (yy, xx)
            back = hsv_to_rgb(want)
            assert (q[0][yy, xx], q[1][yy, xx], q[2][yy, xx]) == tuple(back), (yy, xx)
