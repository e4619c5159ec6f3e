"""Hard-shadow rendering on planar and elevated receivers, and ground
reflections, all in image space from per-pixel heights."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from . import _kernels
from .geometry import DEFAULT_EPS_DEN, PointLight
from .heightmap import HeightMap


class DimensionMismatch(ValueError):
    """Inputs that must share a pixel grid do not."""


class InvalidShadowMap(ValueError):
    """Shadow values outside [0, 1] or non-finite."""


class InvalidReceiverMap(ValueError):
    """Receiver heights negative or non-finite."""


@dataclass
class ShadowMap:
    """Per-pixel occlusion in [0, 1]; 1 means fully shadowed.

    Hard renders produce exactly {0, 1}; soft renders produce sample
    fractions.
    """

    v: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.v, dtype=np.float32)
        if v.ndim != 2:
            raise InvalidShadowMap(f"expected 2D values, got shape {v.shape}")
        if not np.all(np.isfinite(v)) or v.min(initial=0) < 0 or v.max(initial=0) > 1:
            raise InvalidShadowMap("values must be finite and within [0, 1]")
        self.v = v

    @property
    def width(self) -> int:
        return self.v.shape[1]

    @property
    def height(self) -> int:
        return self.v.shape[0]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.v.shape

    def is_binary(self) -> bool:
        return bool(np.all((self.v == 0) | (self.v == 1)))


@dataclass
class ReceiverMap:
    """Per-pixel height of the shadow receiver; 0 is the ground plane."""

    h_r: np.ndarray

    def __post_init__(self):
        h = np.asarray(self.h_r, dtype=np.float32)
        if h.ndim != 2:
            raise InvalidReceiverMap(f"expected 2D heights, got shape {h.shape}")
        if not np.all(np.isfinite(h)) or (h.size and h.min() < 0):
            raise InvalidReceiverMap("receiver heights must be finite and >= 0")
        self.h_r = h

    @classmethod
    def ground(cls, shape: Tuple[int, int]) -> "ReceiverMap":
        return cls(np.zeros(shape, dtype=np.float32))

    @property
    def shape(self) -> Tuple[int, int]:
        return self.h_r.shape


def render_hard_planar(
    obj: HeightMap, light: PointLight, eps_den: float = DEFAULT_EPS_DEN
) -> ShadowMap:
    """Binary ground-plane shadow by forward-splatting projected quads.

    Every 2x2 neighborhood of masked pixels is projected through the
    shadow closed form and the resulting quad filled, so connected
    regions splat without holes; adjacent pairs and lone pixels get
    segments and dots. Pixels whose ray is ground-parallel or never
    reaches the ground contribute nothing. Output is clipped to the
    image rectangle.
    """
    out = np.zeros(obj.shape, dtype=np.uint8)
    if obj.mask.any():
        _kernels.splat_hard_planar(
            obj.mask.astype(np.uint8),
            obj.h,  # float32; promoted exactly per element in the kernel
            float(light.pos.x),
            float(light.pos.y),
            float(light.H),
            float(eps_den),
            out,
        )
    return ShadowMap(out)


def _sheet_band(h: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Half the largest height gap to a masked 4-neighbor, per pixel.

    The occluder sheet is treated as spanning between adjacent pixel
    heights (the same linear model the planar quad splat uses), so a
    marched ray that crosses the sheet between two samples still hits.
    """
    band = np.zeros_like(h)

    def pair(a_sl, b_sl):
        both = mask[a_sl] & mask[b_sl]
        gap = np.where(both, 0.5 * np.abs(h[a_sl] - h[b_sl]), 0.0)
        np.maximum(band[a_sl], gap, out=band[a_sl])
        np.maximum(band[b_sl], gap, out=band[b_sl])

    pair(np.s_[:, 1:], np.s_[:, :-1])
    pair(np.s_[1:, :], np.s_[:-1, :])
    return band


def render_hard_generic(
    obj: HeightMap, receiver: ReceiverMap, light: PointLight
) -> ShadowMap:
    """Binary shadow on an arbitrary-height receiver.

    Each receiver pixel is lifted to (x, y + h_r, h_r) and the straight
    segment toward the light's lifted position is marched at half-pixel
    steps; the pixel is shadowed when the ray passes within the hit
    band of a masked object pixel's height. With a behind-camera light
    (H < 0) the march runs away from the light's projected position,
    where its virtual image lies.
    """
    if receiver.shape != obj.shape:
        raise DimensionMismatch(
            f"receiver shape {receiver.shape} != object shape {obj.shape}"
        )
    out = np.zeros(obj.shape, dtype=np.uint8)
    if obj.mask.any():
        ys, xs = np.nonzero(obj.mask)
        h64 = obj.h.astype(np.float64)
        band = _sheet_band(h64, obj.mask)
        m = obj.mask
        cell4 = np.zeros(obj.shape, dtype=np.uint8)
        cell4[:-1, :-1] = m[:-1, :-1] & m[:-1, 1:] & m[1:, :-1] & m[1:, 1:]
        corners = np.stack([h64[:-1, :-1], h64[:-1, 1:], h64[1:, :-1], h64[1:, 1:]])
        cmin = np.zeros(obj.shape, dtype=np.float32)
        cmax = np.zeros(obj.shape, dtype=np.float32)
        cmin[:-1, :-1] = corners.min(axis=0)
        cmax[:-1, :-1] = corners.max(axis=0)
        _kernels.march_hard_generic(
            obj.mask.astype(np.uint8),
            cell4,
            obj.h,  # float32; promoted exactly per element in the kernel
            band.astype(np.float32),
            cmin,
            cmax,
            receiver.h_r,
            float(light.pos.x),
            float(light.pos.y),
            float(light.H),
            float(obj.max_height()),
            float(band.max()),
            float(xs.min()) - 0.5,
            float(xs.max()) + 0.5,
            float(ys.min()) - 0.5,
            float(ys.max()) + 0.5,
            out,
        )
    return ShadowMap(out)


def render_reflection(obj: HeightMap, cutout: np.ndarray) -> np.ndarray:
    """Ground-mirror image of the cutout as an RGBA array.

    Every masked pixel's color splats to its mirror position below the
    footpoint; where several sources land on one pixel the lowest
    source wins (a ground mirror shows the nearest-to-ground surface).
    Alpha is copied from the source, marking covered pixels.
    """
    cutout = np.asarray(cutout)
    if cutout.shape[:2] != obj.shape or cutout.ndim != 3 or cutout.shape[2] != 4:
        raise DimensionMismatch(
            f"cutout shape {cutout.shape} does not match object {obj.shape} RGBA"
        )
    hh, ww = obj.shape
    out = np.zeros_like(cutout)
    ys, xs = np.nonzero(obj.mask)
    if ys.size == 0:
        return out
    h = obj.h[ys, xs].astype(np.float64)
    ty = np.floor(ys + 2.0 * h + 0.5).astype(np.int64)
    keep = (ty >= 0) & (ty < hh)
    ys, xs, h, ty = ys[keep], xs[keep], h[keep], ty[keep]
    if ys.size == 0:
        return out
    target = ty * ww + xs
    src = ys * ww + xs
    # lowest source per target; source scan order breaks exact ties
    order = np.lexsort((src, h, target))
    target, ys, xs = target[order], ys[order], xs[order]
    first = np.ones(target.size, dtype=bool)
    first[1:] = target[1:] != target[:-1]
    t_sel = target[first]
    out.reshape(-1, 4)[t_sel] = cutout[ys[first], xs[first]]
    return out
