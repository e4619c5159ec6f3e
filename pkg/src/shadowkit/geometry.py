"""Closed-form shadow and reflection geometry for 2.5D image cutouts.

Coordinates are continuous image pixels: x grows rightward, y grows
downward, and the origin is the upper-left corner of the image. An
object point at (x, y) with height h pixels has its ground footpoint
at (x, y + h); a point light at (x, y) with signed height H has its
footpoint at (x, y + H). Negative H models a light behind the camera,
which casts shadows away from the camera.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

DEFAULT_EPS_DEN = 1e-9


class DegenerateRay(ValueError):
    """Light height equals point height: the ray is parallel to the ground."""


class DegenerateLight(ValueError):
    """Light placed exactly on the horizon line."""


class UndefinedRatio(ValueError):
    """A collinearity ratio has a zero denominator."""


@dataclass(frozen=True)
class PixelCoord:
    """Continuous image position; may lie outside the image rectangle."""

    x: float
    y: float

    def __iter__(self):
        yield self.x
        yield self.y


@dataclass(frozen=True)
class HeightPixel:
    """An object point together with its height above the ground, in pixels."""

    pos: PixelCoord
    h: float

    @property
    def footpoint(self) -> PixelCoord:
        return PixelCoord(self.pos.x, self.pos.y + self.h)


@dataclass(frozen=True)
class PointLight:
    """Image-space point light with signed pixel height H (H != 0)."""

    pos: PixelCoord
    H: float

    @property
    def footpoint(self) -> PixelCoord:
        return PixelCoord(self.pos.x, self.pos.y + self.H)


@dataclass(frozen=True)
class HorizonSpec:
    """Horizon line, given as its image row."""

    Z: float


def project_shadow_point(
    a: HeightPixel, light: PointLight, eps_den: float = DEFAULT_EPS_DEN
) -> Optional[PixelCoord]:
    """Ground position of the shadow cast by an elevated point.

    Returns None when the point is higher than a light in front of the
    camera (h > H > 0): the ray from the light through the point never
    reaches the ground, so the point casts no shadow. In that regime
    the closed form below would yield the ground intersection in the
    opposite direction, which must not be splatted.

    Raises DegenerateRay when |H - h| < eps_den.
    """
    den = light.H - a.h
    if abs(den) < eps_den:
        raise DegenerateRay(
            f"light height {light.H!r} within {eps_den!r} of point height {a.h!r}"
        )
    if a.h > light.H > 0:
        return None
    if a.h == 0.0:  # algebraic fixpoint, kept exact in floats
        return a.pos
    return PixelCoord(
        (light.H * a.pos.x - a.h * light.pos.x) / den,
        (light.H * a.pos.y - a.h * light.pos.y) / den,
    )


def collinearity_ratio(
    a: HeightPixel, light: PointLight, c: PixelCoord
) -> Tuple[float, float]:
    """Per-axis similarity ratios of a candidate shadow point.

    Returns (rx, ry) with rx = (c.x - a.x) / (c.x - light.x) and the
    analogous ry. Both equal h / H exactly when c is the true shadow
    point of a under the light; a mismatch means c is off the shadow
    ray or at the wrong depth along it.

    Raises UndefinedRatio when c shares an x or y coordinate with the
    light, which zeroes the corresponding denominator.
    """
    dx = c.x - light.pos.x
    dy = c.y - light.pos.y
    if dx == 0.0 or dy == 0.0:
        axes = "".join(ax for ax, d in (("x", dx), ("y", dy)) if d == 0.0)
        raise UndefinedRatio(f"zero denominator on axis {axes!r} for c={c!r}")
    return (c.x - a.pos.x) / dx, (c.y - a.pos.y) / dy


def light_from_horizon(pos: PixelCoord, horizon: HorizonSpec) -> PointLight:
    """Light at infinity whose footpoint lies on the horizon row.

    The light's height becomes Z - y, so a position below the horizon
    gets a negative height (behind-camera light).

    Raises DegenerateLight when the position sits exactly on the horizon.
    """
    H = horizon.Z - pos.y
    if H == 0.0:
        raise DegenerateLight(f"light at y={pos.y!r} lies on horizon Z={horizon.Z!r}")
    return PointLight(pos, H)


def reflect_point(a: HeightPixel) -> PixelCoord:
    """Mirror image of a point across its ground footpoint: (x, y + 2h)."""
    return PixelCoord(a.pos.x, a.pos.y + 2.0 * a.h)


def image_distance(p: PixelCoord, q: PixelCoord) -> float:
    """Euclidean distance between two image positions."""
    return math.hypot(p.x - q.x, p.y - q.y)
