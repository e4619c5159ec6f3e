"""Dense per-pixel height maps over object masks, and their acquisition
from sparse point/footpoint annotations."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from .geometry import PixelCoord

FOOT_ALIGNMENT_WARN_PX = 2.0


class InvalidHeightMap(ValueError):
    """Height map violates its invariants (shape, finiteness, sign)."""


class EmptyAnnotation(ValueError):
    """Annotation carries zero samples."""


class NegativeHeightResult(ValueError):
    """An offset would push some height below zero."""


@dataclass
class HeightMap:
    """Per-pixel heights (in pixels) defined where ``mask`` is true.

    ``h`` is float32, zeroed outside the mask so equal maps compare
    equal; heights on the mask must be finite and non-negative.
    """

    h: np.ndarray
    mask: np.ndarray

    def __post_init__(self):
        h = np.asarray(self.h, dtype=np.float32)
        mask = np.asarray(self.mask, dtype=bool)
        if h.ndim != 2 or mask.shape != h.shape:
            raise InvalidHeightMap(
                f"h shape {h.shape} and mask shape {mask.shape} must be equal 2D"
            )
        on = h[mask]
        if on.size and not np.all(np.isfinite(on)):
            raise InvalidHeightMap("non-finite height inside mask")
        if on.size and np.any(on < 0):
            raise InvalidHeightMap("negative height inside mask")
        h = np.where(mask, h, np.float32(0.0))
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "mask", mask)

    @property
    def width(self) -> int:
        return self.h.shape[1]

    @property
    def height(self) -> int:
        return self.h.shape[0]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.h.shape

    def max_height(self) -> float:
        """Largest height on the mask; 0.0 for an empty mask."""
        return float(self.h[self.mask].max()) if self.mask.any() else 0.0

    def copy(self) -> "HeightMap":
        return HeightMap(self.h.copy(), self.mask.copy())


@dataclass
class AnnotationSample:
    """One labeled object point and its annotated ground footpoint."""

    point: PixelCoord
    foot: PixelCoord

    @property
    def height(self) -> float:
        return self.foot.y - self.point.y


@dataclass
class SparseAnnotation:
    """Sparse point/footpoint labels over an object mask.

    Sample heights must be non-negative. Footpoints are expected to sit
    vertically under their points; horizontal misalignment beyond
    ~2 px is tolerated with a warning (annotators approximate
    verticality by eye).
    """

    samples: List[AnnotationSample] = field(default_factory=list)
    mask: np.ndarray = None

    def __post_init__(self):
        for s in self.samples:
            if s.height < 0:
                raise InvalidHeightMap(
                    f"sample at {s.point!r} has footpoint above the point"
                )
            if abs(s.foot.x - s.point.x) > FOOT_ALIGNMENT_WARN_PX:
                warnings.warn(
                    f"footpoint of sample at ({s.point.x}, {s.point.y}) is "
                    f"{abs(s.foot.x - s.point.x):.1f} px off vertical",
                    stacklevel=2,
                )
        self.mask = np.asarray(self.mask, dtype=bool)


def _dedupe_samples(pts: np.ndarray, heights: np.ndarray):
    """Average heights of samples that share an exact pixel position."""
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    pts, heights = pts[order], heights[order]
    uniq, inverse = np.unique(pts, axis=0, return_inverse=True)
    if uniq.shape[0] == pts.shape[0]:
        return pts, heights
    summed = np.zeros(uniq.shape[0])
    counts = np.zeros(uniq.shape[0])
    np.add.at(summed, inverse, heights)
    np.add.at(counts, inverse, 1.0)
    return uniq, summed / counts


def _interp_along_line(pts, heights, qx, qy):
    """1D linear interpolation along the principal direction of collinear
    samples, with clamping (nearest sample) beyond the ends."""
    center = pts.mean(axis=0)
    d = pts - center
    # principal direction via the larger singular vector
    _, _, vt = np.linalg.svd(d, full_matrices=False)
    u = vt[0]
    t = d @ u
    order = np.argsort(t, kind="stable")
    t, heights = t[order], heights[order]
    tq = (qx - center[0]) * u[0] + (qy - center[1]) * u[1]
    return np.interp(tq, t, heights)


def interpolate_sparse(ann: SparseAnnotation) -> HeightMap:
    """Dense height map from sparse samples over the annotation mask.

    Piecewise-linear interpolation over a triangulation of the sample
    points, exact at every sample; mask pixels outside the convex hull
    take the nearest sample's value. Degenerate layouts fall back to
    simpler rules: one sample gives a constant map, collinear samples
    interpolate linearly along their common line. Heights are clamped
    to zero from below.
    """
    if not ann.samples:
        raise EmptyAnnotation("no samples to interpolate")
    mask = ann.mask
    pts = np.array([[s.point.x, s.point.y] for s in ann.samples], dtype=float)
    heights = np.array([s.height for s in ann.samples], dtype=float)
    pts, heights = _dedupe_samples(pts, heights)

    ys, xs = np.nonzero(mask)
    h = np.zeros(mask.shape, dtype=np.float32)
    if xs.size == 0:
        return HeightMap(h, mask)
    qx = xs.astype(float)
    qy = ys.astype(float)

    if pts.shape[0] == 1:
        vals = np.full(qx.shape, heights[0])
    elif _is_collinear(pts):
        vals = _interp_along_line(pts, heights, qx, qy)
    else:
        from scipy.interpolate import LinearNDInterpolator, NearestNDInterpolator

        linear = LinearNDInterpolator(pts, heights)
        vals = linear(qx, qy)
        outside = ~np.isfinite(vals)
        if outside.any():
            nearest = NearestNDInterpolator(pts, heights)
            vals[outside] = nearest(qx[outside], qy[outside])

    h[ys, xs] = np.maximum(vals, 0.0)
    return HeightMap(h, mask)


def _is_collinear(pts: np.ndarray, rel_tol: float = 1e-9) -> bool:
    if pts.shape[0] == 2:
        return True
    d = pts - pts.mean(axis=0)
    s = np.linalg.svd(d, compute_uv=False)
    return s[1] <= rel_tol * max(s[0], 1.0)


def offset_height(m: HeightMap, delta: float) -> HeightMap:
    """Shift all masked heights by ``delta`` pixels (floating-object lift).

    Raises NegativeHeightResult when the shift would make any height
    negative.
    """
    if m.mask.any():
        lowest = float(m.h[m.mask].min())
        if delta < -lowest:
            raise NegativeHeightResult(
                f"delta {delta} drops minimum height {lowest} below zero"
            )
    h = m.h.copy()
    h[m.mask] += np.float32(delta)
    # guard against float32 rounding at the exact boundary
    np.maximum(h, 0.0, out=h)
    return HeightMap(h, m.mask.copy())
