"""Dataset discovery and image file I/O for the batch tools.

A dataset directory holds registered pairs named ``<id>_vi.<ext>`` (visible)
and ``<id>_ir.<ext>`` (infrared) with ext one of png, ppm, bmp. A
``manifest.tsv`` file with lines ``id<TAB>visible<TAB>infrared`` overrides the
naming convention; relative paths resolve against the manifest's directory.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from .core import GRAY_WEIGHTS, ImageBuffer, ImagePair, make_pair, quantize_u8_array

__all__ = [
    "VALID_EXTENSIONS",
    "MANIFEST_NAME",
    "DatasetError",
    "NoPairsError",
    "PairEntry",
    "DatasetManifest",
    "discover_pairs",
    "read_manifest",
    "load_rgb",
    "load_gray",
    "load_pair",
    "save_png",
]

log = logging.getLogger(__name__)

VALID_EXTENSIONS = ("png", "ppm", "bmp")
MANIFEST_NAME = "manifest.tsv"


class DatasetError(Exception):
    """A dataset directory or manifest cannot be used."""


class NoPairsError(DatasetError):
    """Discovery found nothing to fuse."""


@dataclass(frozen=True)
class PairEntry:
    pair_id: str
    visible: Path
    infrared: Path


@dataclass(frozen=True)
class DatasetManifest:
    entries: tuple[PairEntry, ...]

    def __len__(self) -> int:
        return len(self.entries)


def read_manifest(path: Path) -> DatasetManifest:
    """Parse a tab-separated manifest, keeping file order.

    Ids must be unique and every referenced file must exist.
    """
    path = Path(path)
    if not path.is_file():
        raise DatasetError(f"manifest not found: {path}")
    base = path.parent
    entries: list[PairEntry] = []
    seen: set[str] = set()
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise DatasetError(f"{path}:{lineno}: expected 3 tab-separated fields, got {len(parts)}")
        pair_id, vis_s, ir_s = (p.strip() for p in parts)
        if not pair_id:
            raise DatasetError(f"{path}:{lineno}: empty pair id")
        if pair_id in seen:
            raise DatasetError(f"{path}:{lineno}: duplicate pair id {pair_id!r}")
        seen.add(pair_id)
        vis = (base / vis_s) if not Path(vis_s).is_absolute() else Path(vis_s)
        ir = (base / ir_s) if not Path(ir_s).is_absolute() else Path(ir_s)
        for p in (vis, ir):
            if not p.is_file():
                raise DatasetError(f"{path}:{lineno}: missing image file {p}")
        entries.append(PairEntry(pair_id, vis, ir))
    if not entries:
        raise NoPairsError(f"manifest {path} lists no pairs")
    return DatasetManifest(tuple(entries))


def discover_pairs(root: Path) -> DatasetManifest:
    """Find pairs in a directory.

    ``manifest.tsv`` takes precedence when present; otherwise the
    ``<id>_vi.<ext>`` / ``<id>_ir.<ext>`` convention is scanned and matched.
    Files with only one half of a pair are skipped with a warning. Discovery
    order is sorted by pair id.
    """
    root = Path(root)
    if not root.is_dir():
        raise DatasetError(f"dataset directory not found: {root}")
    manifest_path = root / MANIFEST_NAME
    if manifest_path.is_file():
        return read_manifest(manifest_path)

    visible: dict[str, Path] = {}
    infrared: dict[str, Path] = {}
    for path in sorted(root.iterdir()):
        if not path.is_file():
            continue
        ext = path.suffix.lower().lstrip(".")
        if ext not in VALID_EXTENSIONS:
            continue
        stem = path.stem
        if stem.endswith("_vi"):
            visible[stem[:-3]] = path
        elif stem.endswith("_ir"):
            infrared[stem[:-3]] = path

    entries = []
    for pair_id in sorted(visible.keys() | infrared.keys()):
        if pair_id in visible and pair_id in infrared:
            entries.append(PairEntry(pair_id, visible[pair_id], infrared[pair_id]))
        else:
            half = "visible" if pair_id in visible else "infrared"
            log.warning("pair %r has only a %s image, skipping", pair_id, half)
    if not entries:
        raise NoPairsError(f"no image pairs found under {root}")
    return DatasetManifest(tuple(entries))


def _decode(path: Path) -> np.ndarray:
    with Image.open(path) as im:
        if im.mode not in ("RGB", "L"):
            im = im.convert("RGB")
        return np.asarray(im, dtype=np.uint8)


def load_rgb(path: Path) -> ImageBuffer:
    """Read an image as RGB; single-channel files are replicated to 3 channels."""
    arr = _decode(Path(path))
    if arr.ndim == 2:
        arr = np.repeat(arr[..., None], 3, axis=2)
    return ImageBuffer.rgb(arr)


def load_gray(path: Path) -> ImageBuffer:
    """Read an image as grayscale.

    3-channel files are accepted as-is when all channels agree per pixel;
    otherwise they are collapsed with BT.601 weights and a warning is logged.
    """
    arr = _decode(Path(path))
    if arr.ndim == 2:
        return ImageBuffer.gray(arr)
    if (arr[..., 0] == arr[..., 1]).all() and (arr[..., 0] == arr[..., 2]).all():
        return ImageBuffer.gray(np.ascontiguousarray(arr[..., 0]))
    log.warning("infrared image %s has unequal channels, converting to grayscale", path)
    planes = arr.astype(np.float64)
    wr, wg, wb = GRAY_WEIGHTS
    luma = wr * planes[..., 0] + wg * planes[..., 1] + wb * planes[..., 2]
    return ImageBuffer.gray(quantize_u8_array(luma))


def load_pair(entry: PairEntry) -> ImagePair:
    """Load both halves of a pair and validate their sizes against each other."""
    return make_pair(entry.pair_id, load_rgb(entry.visible), load_gray(entry.infrared))


def save_png(image: ImageBuffer, path: Path) -> None:
    """Write a buffer as an 8-bit PNG without alpha, creating parent dirs."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    mode = "RGB" if image.is_rgb else "L"
    Image.fromarray(image.pixels, mode=mode).save(path, format="PNG")
