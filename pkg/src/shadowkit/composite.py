"""Shadow/reflection compositing onto backgrounds, and the similarity
metrics used to compare shadow maps."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from .render import DimensionMismatch, ShadowMap

ArrayLike = Union[ShadowMap, np.ndarray]


class InvalidCompositeParams(ValueError):
    """Opacity or color outside [0, 1]."""


@dataclass(frozen=True)
class CompositeParams:
    shadow_opacity: float = 0.6
    shadow_color: Tuple[float, float, float] = (0.0, 0.0, 0.0)
    reflection_opacity: float = 0.3

    def __post_init__(self):
        ok = (
            0.0 <= self.shadow_opacity <= 1.0
            and 0.0 <= self.reflection_opacity <= 1.0
            and all(0.0 <= c <= 1.0 for c in self.shadow_color)
        )
        if not ok:
            raise InvalidCompositeParams(f"out-of-range composite params: {self!r}")


def _values(a: ArrayLike) -> np.ndarray:
    return a.v if isinstance(a, ShadowMap) else np.asarray(a)


def composite_shadow(
    bg: np.ndarray,
    shadow: ShadowMap,
    cutout: np.ndarray,
    p: CompositeParams = CompositeParams(),
) -> np.ndarray:
    """Darken the background under the shadow, then paste the cutout.

    The background is blended toward the shadow color by opacity times
    occlusion; the cutout is alpha-composited on top, so the object
    occludes its own shadow. All images must share dimensions. Returns
    uint8 RGB.
    """
    bg = np.asarray(bg)
    cutout = np.asarray(cutout)
    if bg.shape[:2] != shadow.shape or cutout.shape[:2] != shadow.shape:
        raise DimensionMismatch(
            f"bg {bg.shape}, cutout {cutout.shape}, shadow {shadow.shape}"
        )
    v = shadow.v[..., None].astype(np.float64)
    w = p.shadow_opacity * v
    out = (bg[..., :3] / 255.0) * (1.0 - w) + np.asarray(p.shadow_color) * w
    alpha = (cutout[..., 3:4] / 255.0).astype(np.float64)
    out = (cutout[..., :3] / 255.0) * alpha + out * (1.0 - alpha)
    return np.clip(np.round(out * 255.0), 0, 255).astype(np.uint8)


def composite_reflection(
    bg: np.ndarray,
    reflection: np.ndarray,
    cutout: np.ndarray,
    p: CompositeParams = CompositeParams(),
) -> np.ndarray:
    """Blend a rendered reflection over the background at the reflection
    opacity, then paste the cutout on top. Returns uint8 RGB."""
    bg = np.asarray(bg)
    reflection = np.asarray(reflection)
    cutout = np.asarray(cutout)
    if bg.shape[:2] != reflection.shape[:2] or cutout.shape[:2] != reflection.shape[:2]:
        raise DimensionMismatch(
            f"bg {bg.shape}, reflection {reflection.shape}, cutout {cutout.shape}"
        )
    w = (reflection[..., 3:4] / 255.0) * p.reflection_opacity
    out = (bg[..., :3] / 255.0) * (1.0 - w) + (reflection[..., :3] / 255.0) * w
    alpha = (cutout[..., 3:4] / 255.0).astype(np.float64)
    out = (cutout[..., :3] / 255.0) * alpha + out * (1.0 - alpha)
    return np.clip(np.round(out * 255.0), 0, 255).astype(np.uint8)


def _pair(a: ArrayLike, b: ArrayLike, mask: Optional[np.ndarray]):
    av = _values(a).astype(np.float64)
    bv = _values(b).astype(np.float64)
    if av.shape != bv.shape:
        raise DimensionMismatch(f"{av.shape} != {bv.shape}")
    if mask is not None:
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != av.shape:
            raise DimensionMismatch(f"mask {mask.shape} != maps {av.shape}")
        av, bv = av[mask], bv[mask]
    return av, bv


def metric_abs(a: ArrayLike, b: ArrayLike, mask: Optional[np.ndarray] = None) -> float:
    """Mean per-pixel absolute difference."""
    av, bv = _pair(a, b, mask)
    return float(np.mean(np.abs(av - bv)))


def metric_zncc(a: ArrayLike, b: ArrayLike, mask: Optional[np.ndarray] = None) -> float:
    """Zero-normalized cross-correlation in [-1, 1].

    Constant inputs have no correlation direction: two equal constants
    score 1, a constant against anything else scores 0.
    """
    av, bv = _pair(a, b, mask)
    mu_a, mu_b = av.mean(), bv.mean()
    da, db = av - mu_a, bv - mu_b
    sa = np.sqrt(np.mean(da * da))
    sb = np.sqrt(np.mean(db * db))
    if sa == 0.0 and sb == 0.0:
        return 1.0 if mu_a == mu_b else 0.0
    if sa == 0.0 or sb == 0.0:
        return 0.0
    return float(np.clip(np.mean(da * db) / (sa * sb), -1.0, 1.0))
