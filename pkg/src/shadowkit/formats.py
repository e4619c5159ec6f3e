"""File formats: the PHM height-map container, annotation JSON, a
minimal mesh text format, and PNG codecs for images and shadow maps.

PHM layout: magic ``PHM1``, then width and height as little-endian
u32, then row-major little-endian float32 heights where NaN marks
pixels outside the mask.
"""

from __future__ import annotations

import io
import json
import struct
from pathlib import Path
from typing import Union

import numpy as np
from PIL import Image

from .geometry import PixelCoord
from .heightmap import AnnotationSample, HeightMap, SparseAnnotation
from .mesh import Mesh
from .render import ShadowMap

PHM_MAGIC = b"PHM1"
PathLike = Union[str, Path]


class BadMagic(ValueError):
    """File does not start with the PHM1 magic."""


class TruncatedPayload(ValueError):
    """Payload length does not match width x height float32 values."""


class NonFiniteHeight(ValueError):
    """A non-NaN payload value is infinite."""


class SchemaError(ValueError):
    """Annotation JSON or mesh text deviates from the documented schema."""


class NegativeHeightSample(ValueError):
    """An annotated footpoint lies above its object point."""


class MaskNotFound(FileNotFoundError):
    """Annotation references a mask image that does not exist."""


def write_phm_bytes(m: HeightMap) -> bytes:
    payload = m.h.astype("<f4").copy()
    payload[~m.mask] = np.nan
    header = PHM_MAGIC + struct.pack("<II", m.width, m.height)
    return header + payload.tobytes()


def write_phm(m: HeightMap, path: PathLike) -> None:
    Path(path).write_bytes(write_phm_bytes(m))


def read_phm_bytes(data: bytes, mask: np.ndarray = None) -> HeightMap:
    """Decode a PHM buffer; an explicit ``mask`` overrides the NaN mask."""
    if len(data) < 12 or data[:4] != PHM_MAGIC:
        raise BadMagic(f"expected magic {PHM_MAGIC!r}, got {data[:4]!r}")
    width, height = struct.unpack("<II", data[4:12])
    expected = 12 + 4 * width * height
    if len(data) != expected:
        raise TruncatedPayload(
            f"payload is {len(data) - 12} bytes, expected {expected - 12}"
        )
    values = np.frombuffer(data[12:], dtype="<f4").reshape(height, width)
    finite = ~np.isnan(values)
    if np.isinf(values[finite]).any():
        raise NonFiniteHeight("infinite height value in payload")
    if mask is not None:
        mask = np.asarray(mask, dtype=bool) & finite
    else:
        mask = finite
    return HeightMap(np.where(mask, values, np.float32(0.0)), mask)


def read_phm(path: PathLike, mask_path: PathLike = None) -> HeightMap:
    mask = None
    if mask_path is not None:
        mask = np.array(Image.open(Path(mask_path)).convert("L")) > 0
    return read_phm_bytes(Path(path).read_bytes(), mask=mask)


def export_height_png(m: HeightMap, path: PathLike) -> None:
    """16-bit grayscale visualization normalized by the max height.

    Lossy by design; pixels outside the mask store 0, the max height
    stores 65535, and an all-zero map exports as all zeros.
    """
    top = m.max_height()
    arr = np.zeros(m.shape, dtype=np.uint16)
    if top > 0:
        scaled = np.round(m.h.astype(np.float64) * (65535.0 / top))
        arr[m.mask] = scaled[m.mask].astype(np.uint16)
    Image.fromarray(arr).save(Path(path), format="PNG")


def parse_annotation(text: str, base_dir: PathLike = ".") -> SparseAnnotation:
    """Annotation JSON to sparse samples plus the referenced mask.

    Schema: ``{"mask": <png path>, "points": [{"x", "y", "foot_x",
    "foot_y"}, ...]}``; the mask path resolves relative to base_dir and
    any nonzero mask pixel counts as inside.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"annotation is not valid JSON: {e}") from e
    if not isinstance(doc, dict) or "mask" not in doc or "points" not in doc:
        raise SchemaError('annotation must be an object with "mask" and "points"')
    mask_path = Path(base_dir) / doc["mask"]
    if not mask_path.exists():
        raise MaskNotFound(str(mask_path))
    mask = np.array(Image.open(mask_path).convert("L")) > 0

    samples = []
    for i, pt in enumerate(doc["points"]):
        if not isinstance(pt, dict) or not {"x", "y", "foot_x", "foot_y"} <= set(pt):
            raise SchemaError(f"point {i} must carry x, y, foot_x, foot_y")
        if pt["foot_y"] < pt["y"]:
            raise NegativeHeightSample(
                f"point {i}: footpoint y {pt['foot_y']} above point y {pt['y']}"
            )
        samples.append(
            AnnotationSample(
                point=PixelCoord(float(pt["x"]), float(pt["y"])),
                foot=PixelCoord(float(pt["foot_x"]), float(pt["foot_y"])),
            )
        )
    return SparseAnnotation(samples=samples, mask=mask)


def parse_annotation_file(path: PathLike) -> SparseAnnotation:
    p = Path(path)
    return parse_annotation(p.read_text(), base_dir=p.parent)


def parse_mesh_text(text: str) -> Mesh:
    """Triangle-list text: ``v x y z`` and ``f i j k`` lines, 1-indexed."""
    vertices, triangles = [], []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "v" and len(parts) == 4:
            try:
                vertices.append([float(p) for p in parts[1:]])
            except ValueError as e:
                raise SchemaError(f"line {ln}: bad vertex: {raw!r}") from e
        elif parts[0] == "f" and len(parts) == 4:
            try:
                idx = [int(p) for p in parts[1:]]
            except ValueError as e:
                raise SchemaError(f"line {ln}: bad face: {raw!r}") from e
            if any(i < 1 for i in idx):
                raise SchemaError(f"line {ln}: face indices are 1-based: {raw!r}")
            triangles.append([i - 1 for i in idx])
        else:
            raise SchemaError(f"line {ln}: unrecognized line: {raw!r}")
    return Mesh(np.array(vertices, dtype=np.float64).reshape(-1, 3),
                np.array(triangles, dtype=np.int64).reshape(-1, 3))


def read_mesh(path: PathLike) -> Mesh:
    return parse_mesh_text(Path(path).read_text())


def encode_png(arr: np.ndarray) -> bytes:
    """Deterministic PNG bytes for uint8 gray/RGB/RGBA or uint16 gray."""
    img = Image.fromarray(arr)
    buf = io.BytesIO()
    img.save(buf, format="PNG")
    return buf.getvalue()


def shadow_to_png_bytes(s: ShadowMap) -> bytes:
    """8-bit grayscale encoding: 255 is fully shadowed."""
    return encode_png(np.round(s.v * 255.0).astype(np.uint8))


def save_shadow_png(s: ShadowMap, path: PathLike) -> None:
    Path(path).write_bytes(shadow_to_png_bytes(s))


def load_shadow_png(path: PathLike) -> ShadowMap:
    arr = np.array(Image.open(Path(path)).convert("L"), dtype=np.float32)
    return ShadowMap(arr / 255.0)


def load_rgba(path: PathLike) -> np.ndarray:
    return np.array(Image.open(Path(path)).convert("RGBA"))


def load_rgb(path: PathLike) -> np.ndarray:
    return np.array(Image.open(Path(path)).convert("RGB"))


def save_rgb_png(arr: np.ndarray, path: PathLike) -> None:
    Path(path).write_bytes(encode_png(np.asarray(arr, dtype=np.uint8)))


def save_rgba_png(arr: np.ndarray, path: PathLike) -> None:
    Path(path).write_bytes(encode_png(np.asarray(arr, dtype=np.uint8)))
