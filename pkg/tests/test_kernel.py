"""Tests for the per-pixel fusion kernel: scaling ratio, scale factor, fusion."""

import numpy as np
import pytest

from conftest import random_pair
from fcdfusion.core import ImageBuffer, Rgb8Pixel, make_pair, round_half_away
from fcdfusion.kernel import (
    FcdParams,
    fuse_image,
    fuse_pixel,
    max_component,
    scale_factor,
    scaling_ratio,
)


def test_params_validation():
    assert FcdParams() == FcdParams(gamma=2.0, averaging=True)
    with pytest.raises(ValueError):
        FcdParams(gamma=0.0)
    with pytest.raises(ValueError):
        FcdParams(gamma=-1.5)


def test_scaling_ratio_frozen_values():
    assert scaling_ratio(255, 2.0) == 1.0
    assert scaling_ratio(0, 2.0) == 0.0
    assert scaling_ratio(128, 2.0) == 0.2519646289888504
    assert scaling_ratio(128, 1.0) == 128 / 255


def test_squared_fast_path_matches_general_exponent():
    for v in range(256):
        a = v / 255.0
        assert scaling_ratio(v, 2.0) == pytest.approx(a**2.0, rel=1e-15, abs=0.0)


def test_max_component_floors_at_one():
    assert max_component(Rgb8Pixel(0, 0, 0)) == 1
    assert max_component(Rgb8Pixel(10, 200, 30)) == 200
    assert max_component(Rgb8Pixel(255, 255, 255)) == 255


def test_scale_factor_frozen_values():
    assert scale_factor(1.0, 255, averaging=True) == 1.5
    assert scale_factor(0.0, 1, averaging=True) == 0.5
    assert scale_factor(0.0, 255, averaging=True) == 0.5
    # (355 >> 1) = 177, so k = 177 * alpha / 100 + 0.5
    alpha = scaling_ratio(128, 2.0)
    assert scale_factor(alpha, 100, averaging=True) == 0.9459773933102653
    assert scale_factor(1.0, 255, averaging=False) == 2.0
    assert scale_factor(0.0, 100, averaging=False) == 0.0


def test_scale_factor_ranges(rng):
    for _ in range(500):
        alpha = float(rng.uniform(0.0, 1.0))
        v_m = int(rng.integers(1, 256))
        beta_m = (v_m + 255) / v_m
        k_avg = scale_factor(alpha, v_m, averaging=True)
        assert 0.5 <= k_avg <= (beta_m + 1.0) / 2.0
        k_raw = scale_factor(alpha, v_m, averaging=False)
        assert 0.0 <= k_raw <= beta_m


def test_fuse_pixel_frozen_values():
    assert fuse_pixel(Rgb8Pixel(0, 0, 0), 200) == Rgb8Pixel(0, 0, 0)
    assert fuse_pixel(Rgb8Pixel(100, 50, 25), 128) == Rgb8Pixel(95, 47, 24)
    assert fuse_pixel(Rgb8Pixel(255, 255, 255), 255) == Rgb8Pixel(255, 255, 255)
    assert fuse_pixel(Rgb8Pixel(100, 50, 25), 0) == Rgb8Pixel(50, 25, 13)
    no_avg = FcdParams(averaging=False)
    assert fuse_pixel(Rgb8Pixel(100, 50, 25), 128, no_avg) == Rgb8Pixel(89, 45, 22)
    assert fuse_pixel(Rgb8Pixel(100, 50, 25), 255, no_avg) == Rgb8Pixel(255, 178, 89)
    half = FcdParams(gamma=0.5)
    assert fuse_pixel(Rgb8Pixel(100, 50, 25), 128, half) == Rgb8Pixel(175, 88, 44)


def test_zero_infrared_with_averaging_halves_the_color(rng):
    # k is exactly 0.5 when v_i = 0, so each channel is round(c / 2)
    for _ in range(200):
        r, g, b = (int(v) for v in rng.integers(0, 256, size=3))
        got = fuse_pixel(Rgb8Pixel(r, g, b), 0)
        assert got == Rgb8Pixel(
            round_half_away(r / 2), round_half_away(g / 2), round_half_away(b / 2)
        )


def test_channel_order_is_preserved(rng):
    for _ in range(500):
        c = sorted(int(v) for v in rng.integers(0, 256, size=3))
        v_i = int(rng.integers(0, 256))
        out = fuse_pixel(Rgb8Pixel(c[2], c[1], c[0]), v_i)
        assert out.r >= out.g >= out.b


def test_each_channel_is_monotone_in_infrared(rng):
    for _ in range(20):
        r, g, b = (int(v) for v in rng.integers(0, 256, size=3))
        vis = ImageBuffer.rgb(np.tile(np.array([r, g, b], dtype=np.uint8), (1, 256, 1)))
        ir = ImageBuffer.gray(np.arange(256, dtype=np.uint8).reshape(1, 256))
        fused = fuse_image(make_pair("m", vis, ir)).pixels.astype(np.int16)
        assert np.all(np.diff(fused, axis=1) >= 0)


@pytest.mark.parametrize("gamma", [0.5, 1.0, 1.7, 2.0, 2.2, 3.0])
@pytest.mark.parametrize("averaging", [True, False])
def test_image_fusion_matches_pixel_fusion(rng, gamma, averaging):
    params = FcdParams(gamma=gamma, averaging=averaging)
    pair = random_pair(rng, height=13, width=11)
    fused = fuse_image(pair, params)
    assert fused.is_rgb and fused.size == pair.visible.size
    for y in range(pair.height):
        for x in range(pair.width):
            want = fuse_pixel(pair.visible.pixel(x, y), pair.infrared.pixel(x, y).v, params)
            assert fused.pixel(x, y) == want, (x, y, gamma, averaging)


def test_all_black_visible_stays_black(rng):
    vis = ImageBuffer.rgb(np.zeros((8, 8, 3), dtype=np.uint8))
    ir = ImageBuffer.gray(rng.integers(0, 256, size=(8, 8), dtype=np.uint8))
    fused = fuse_image(make_pair("black", vis, ir))
    assert not fused.pixels.any()


def test_single_pixel_image_matches_frozen_pixel():
    vis = ImageBuffer.rgb(np.array([[[100, 50, 25]]], dtype=np.uint8))
    ir = ImageBuffer.gray(np.array([[128]], dtype=np.uint8))
    fused = fuse_image(make_pair("one", vis, ir))
    assert fused.pixel(0, 0) == Rgb8Pixel(95, 47, 24)
