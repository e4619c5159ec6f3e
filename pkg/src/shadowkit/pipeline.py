"""One render entry point shared by the CLI and the HTTP service, so
identical parameters yield byte-identical PNG output on both paths."""

from __future__ import annotations

from typing import Optional

import numpy as np

from .composite import CompositeParams, composite_reflection, composite_shadow
from .formats import encode_png, shadow_to_png_bytes
from .geometry import HorizonSpec, PixelCoord, PointLight, light_from_horizon
from .heightmap import HeightMap
from .render import (
    ReceiverMap,
    render_hard_generic,
    render_hard_planar,
    render_reflection,
)
from .soft import SamplingConfig, SoftnessSpec, render_soft


class MissingBackground(ValueError):
    """Composite output requested without a background image."""


def build_light(
    x: float, y: float, H: Optional[float] = None, horizon: Optional[float] = None
) -> PointLight:
    """Point light from either an explicit height or a horizon row.

    Exactly one of H and horizon must be given.
    """
    if (H is None) == (horizon is None):
        raise ValueError("exactly one of light height and horizon must be set")
    pos = PixelCoord(float(x), float(y))
    if horizon is not None:
        return light_from_horizon(pos, HorizonSpec(float(horizon)))
    return PointLight(pos, float(H))


def run_render(
    cutout: np.ndarray,
    height: HeightMap,
    light: PointLight,
    mode: str = "hard",
    receiver: Optional[ReceiverMap] = None,
    background: Optional[np.ndarray] = None,
    softness: float = 0.0,
    samples: int = 64,
    seed: int = 0,
    stratified: bool = True,
    composite: bool = False,
    params: CompositeParams = CompositeParams(),
) -> bytes:
    """Render one frame and return PNG bytes.

    ``mode`` is hard, soft, or reflection; hard and soft fall on the
    receiver when one is given and on the ground plane otherwise.
    """
    if mode == "reflection":
        rgba = render_reflection(height, cutout)
        if composite:
            if background is None:
                raise MissingBackground("reflection composite needs a background")
            return encode_png(composite_reflection(background, rgba, cutout, params))
        return encode_png(rgba)

    if mode == "hard":
        if receiver is not None:
            shadow = render_hard_generic(height, receiver, light)
        else:
            shadow = render_hard_planar(height, light)
    elif mode == "soft":
        shadow = render_soft(
            height,
            light,
            SoftnessSpec(softness),
            SamplingConfig(n_samples=samples, seed=seed, stratified=stratified),
            receiver=receiver,
        )
    else:
        raise ValueError(f"unknown render mode {mode!r}")

    if composite:
        if background is None:
            raise MissingBackground("shadow composite needs a background")
        return encode_png(composite_shadow(background, shadow, cutout, params))
    return shadow_to_png_bytes(shadow)
