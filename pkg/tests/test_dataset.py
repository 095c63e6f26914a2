"""Tests for dataset discovery, manifests, image IO, and PNG output."""

import logging

import numpy as np
import pytest
from PIL import Image

from conftest import make_pairs, random_pair, write_dataset
from fcdfusion.dataset import (
    DatasetError,
    NoPairsError,
    discover_pairs,
    load_gray,
    load_pair,
    load_rgb,
    read_manifest,
    save_png,
)


def test_save_and_reload_png_round_trips(rng, tmp_path):
    pair = random_pair(rng, height=5, width=7)
    path = tmp_path / "deep" / "nested" / "img.png"
    save_png(pair.visible, path)
    assert np.array_equal(load_rgb(path).pixels, pair.visible.pixels)
    gray_path = tmp_path / "g.png"
    save_png(pair.infrared, gray_path)
    assert np.array_equal(load_gray(gray_path).pixels, pair.infrared.pixels)


@pytest.mark.parametrize("ext", ["png", "ppm", "bmp"])
def test_supported_formats_load(rng, tmp_path, ext):
    arr = rng.integers(0, 256, size=(6, 6, 3), dtype=np.uint8)
    path = tmp_path / f"img.{ext}"
    Image.fromarray(arr, mode="RGB").save(path)
    assert np.array_equal(load_rgb(path).pixels, arr)


def test_load_rgb_replicates_gray_files(tmp_path):
    arr = np.arange(16, dtype=np.uint8).reshape(4, 4)
    path = tmp_path / "g.png"
    Image.fromarray(arr, mode="L").save(path)
    loaded = load_rgb(path)
    assert loaded.is_rgb
    for c in range(3):
        assert np.array_equal(loaded.pixels[..., c], arr)


def test_load_gray_accepts_equal_channel_rgb(tmp_path):
    arr = np.arange(16, dtype=np.uint8).reshape(4, 4)
    rgb = np.repeat(arr[:, :, None], 3, axis=2)
    path = tmp_path / "ir.png"
    Image.fromarray(rgb, mode="RGB").save(path)
    assert np.array_equal(load_gray(path).pixels, arr)


def test_load_gray_collapses_true_color_with_warning(tmp_path, caplog):
    arr = np.zeros((4, 4, 3), dtype=np.uint8)
    arr[..., 0] = 200
    path = tmp_path / "ir.png"
    Image.fromarray(arr, mode="RGB").save(path)
    with caplog.at_level(logging.WARNING):
        loaded = load_gray(path)
    assert loaded.is_gray
    # BT.601 collapse of pure red 200
    assert int(loaded.pixels[0, 0]) == 60
    assert any("ir.png" in r.getMessage() for r in caplog.records)


def test_discover_pairs_by_suffix(rng, tmp_path):
    pairs = make_pairs(rng, 3, prefix="scene")
    write_dataset(tmp_path, pairs)
    manifest = discover_pairs(tmp_path)
    assert [e.pair_id for e in manifest.entries] == ["scene00", "scene01", "scene02"]
    assert len(manifest) == 3
    loaded = load_pair(manifest.entries[1])
    assert np.array_equal(loaded.visible.pixels, pairs[1].visible.pixels)
    assert np.array_equal(loaded.infrared.pixels, pairs[1].infrared.pixels)


def test_discovery_skips_orphans_with_warning(rng, tmp_path, caplog):
    write_dataset(tmp_path, make_pairs(rng, 1, prefix="ok"))
    save_png(random_pair(rng).visible, tmp_path / "alone_vi.png")
    with caplog.at_level(logging.WARNING):
        manifest = discover_pairs(tmp_path)
    assert [e.pair_id for e in manifest.entries] == ["ok00"]
    assert any("alone" in r.getMessage() for r in caplog.records)


def test_discovery_ignores_unrelated_files(rng, tmp_path):
    write_dataset(tmp_path, make_pairs(rng, 1, prefix="a"))
    (tmp_path / "notes.txt").write_text("not an image\n")
    (tmp_path / "b_vi.jpeg").write_bytes(b"")
    manifest = discover_pairs(tmp_path)
    assert [e.pair_id for e in manifest.entries] == ["a00"]


def test_discovery_with_no_pairs_raises(tmp_path):
    tmp_path.mkdir(exist_ok=True)
    with pytest.raises(NoPairsError):
        discover_pairs(tmp_path)


def test_manifest_overrides_discovery_order(rng, tmp_path):
    pairs = make_pairs(rng, 3, prefix="m")
    write_dataset(tmp_path, pairs)
    listing = tmp_path / "manifest.tsv"
    listing.write_text(
        "# comment line\n"
        "m02\tm02_vi.png\tm02_ir.png\n"
        "\n"
        "m00\tm00_vi.png\tm00_ir.png\n"
    )
    manifest = discover_pairs(tmp_path)
    assert [e.pair_id for e in manifest.entries] == ["m02", "m00"]


def test_read_manifest_resolves_relative_paths(rng, tmp_path):
    sub = tmp_path / "data"
    write_dataset(sub, make_pairs(rng, 1, prefix="r"))
    listing = tmp_path / "files.tsv"
    listing.write_text("r00\tdata/r00_vi.png\tdata/r00_ir.png\n")
    manifest = read_manifest(listing)
    entry = manifest.entries[0]
    assert entry.visible.is_absolute() and entry.visible.exists()
    load_pair(entry)


def test_read_manifest_rejects_bad_rows(rng, tmp_path):
    write_dataset(tmp_path, make_pairs(rng, 1, prefix="x"))
    bad_fields = tmp_path / "two.tsv"
    bad_fields.write_text("x00\tx00_vi.png\n")
    with pytest.raises(DatasetError):
        read_manifest(bad_fields)

    missing = tmp_path / "missing.tsv"
    missing.write_text("x00\tx00_vi.png\tnope_ir.png\n")
    with pytest.raises(DatasetError):
        read_manifest(missing)

    dupes = tmp_path / "dupes.tsv"
    dupes.write_text(
        "x00\tx00_vi.png\tx00_ir.png\nx00\tx00_vi.png\tx00_ir.png\n"
    )
    with pytest.raises(DatasetError):
        read_manifest(dupes)

    empty = tmp_path / "empty.tsv"
    empty.write_text("# nothing\n")
    with pytest.raises(NoPairsError):
        read_manifest(empty)
