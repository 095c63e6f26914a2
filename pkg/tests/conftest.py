"""Shared fixtures and helpers for the fcdfusion test suite."""

import numpy as np
import pytest

from fcdfusion.core import ImageBuffer, ImagePair, make_pair
from fcdfusion.dataset import save_png

SEED = 20260815


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


def random_pair(rng, height=16, width=16, pair_id="pair"):
    """Uniform random visible RGB and infrared gray of the given size."""
    vis = rng.integers(0, 256, size=(height, width, 3), dtype=np.uint8)
    ir = rng.integers(0, 256, size=(height, width), dtype=np.uint8)
    return make_pair(pair_id, ImageBuffer.rgb(vis), ImageBuffer.gray(ir))


def gray_pair(value_vis, value_ir, height=16, width=16, pair_id="pair"):
    """Constant-valued pair: gray visible at value_vis, infrared at value_ir."""
    vis = np.full((height, width, 3), value_vis, dtype=np.uint8)
    ir = np.full((height, width), value_ir, dtype=np.uint8)
    return make_pair(pair_id, ImageBuffer.rgb(vis), ImageBuffer.gray(ir))


def write_dataset(root, pairs):
    """Write pairs to disk as <id>_vi.png / <id>_ir.png under root."""
    root.mkdir(parents=True, exist_ok=True)
    for pair in pairs:
        save_png(pair.visible, root / f"{pair.pair_id}_vi.png")
        save_png(pair.infrared, root / f"{pair.pair_id}_ir.png")
    return root


def make_pairs(rng, count, height=16, width=16, prefix="p"):
    return [
        random_pair(rng, height=height, width=width, pair_id=f"{prefix}{i:02d}")
        for i in range(count)
    ]
