"""Height-map extraction from triangle meshes through an upright pinhole
camera.

World space is Y-up with the ground plane at Y = 0. The camera's right
vector is constrained to be horizontal, so vertical world lines stay
(near-)vertical in the image and every surface point's ground footpoint
projects into the same image column.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .heightmap import HeightMap

GROUND_EPS = 1e-6
NEAR_PLANE = 1e-3


class InvalidMesh(ValueError):
    """Mesh violates its invariants (indices, emptiness, below-ground)."""


class InvalidCamera(ValueError):
    """Camera violates its invariants (height, focal, degenerate forward)."""


class NothingVisible(ValueError):
    """No mesh fragment covers any image pixel."""


@dataclass
class Mesh:
    """Triangle list: ``vertices`` (N, 3) world points, ``triangles`` (M, 3)
    vertex index triples."""

    vertices: np.ndarray
    triangles: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=np.float64)
        t = np.asarray(self.triangles, dtype=np.int64)
        if v.ndim != 2 or v.shape[1] != 3:
            raise InvalidMesh(f"vertices must be (N, 3), got {v.shape}")
        if t.ndim != 2 or t.shape[1] != 3 or t.shape[0] < 1:
            raise InvalidMesh(f"need at least one triangle, got shape {t.shape}")
        if t.min(initial=0) < 0 or t.max(initial=-1) >= v.shape[0]:
            raise InvalidMesh("triangle index out of range")
        if v.shape[0] and v[:, 1].min() < -GROUND_EPS:
            raise InvalidMesh("vertex below the ground plane")
        self.vertices = v
        self.triangles = t


@dataclass
class Camera:
    """Upright pinhole camera.

    ``forward`` is normalized; the right vector is built horizontal
    (zero world-Y), which is what keeps vertical lines parallel in the
    image. Image rows grow downward.
    """

    position: Tuple[float, float, float]
    forward: Tuple[float, float, float]
    focal: float
    principal_point: Tuple[float, float]
    image_size: Tuple[int, int]  # (width, height)

    def __post_init__(self):
        pos = np.asarray(self.position, dtype=np.float64)
        fwd = np.asarray(self.forward, dtype=np.float64)
        if pos[1] <= 0:
            raise InvalidCamera("camera must sit above the ground plane")
        if self.focal <= 0:
            raise InvalidCamera("focal length must be positive")
        n = np.linalg.norm(fwd)
        if n == 0:
            raise InvalidCamera("zero forward vector")
        fwd = fwd / n
        up = np.array([0.0, 1.0, 0.0])
        right = np.cross(up, fwd)
        rn = np.linalg.norm(right)
        if rn < 1e-12:
            raise InvalidCamera("forward parallel to world up; no upright frame")
        right /= rn
        down = np.cross(right, fwd)  # unit, points toward +image-y
        self.position = pos
        self.forward = fwd
        self._right = right
        self._down = down

    def basis(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(right, down, forward) unit vectors of the camera frame."""
        return self._right, self._down, self.forward

    def camera_coords(self, points: np.ndarray) -> np.ndarray:
        """World points (N, 3) to camera coords (x right, y down, z forward)."""
        d = np.atleast_2d(points) - self.position
        return np.stack(
            [d @ self._right, d @ self._down, d @ self.forward], axis=-1
        )

    def project(self, points: np.ndarray) -> np.ndarray:
        """World points (N, 3) to image positions (N, 2) as (u, v) = (col, row).

        Points at or behind the camera plane project to NaN.
        """
        c = self.camera_coords(points)
        z = c[:, 2]
        with np.errstate(divide="ignore", invalid="ignore"):
            u = self.focal * c[:, 0] / z + self.principal_point[0]
            v = self.focal * c[:, 1] / z + self.principal_point[1]
        bad = z <= 0
        u[bad] = np.nan
        v[bad] = np.nan
        return np.stack([u, v], axis=-1)


def _clip_near(cam_pts: np.ndarray, world_pts: np.ndarray, near: float):
    """Sutherland-Hodgman clip of one triangle against z >= near.

    Returns lists of camera-space and world-space polygon vertices
    (0, 3 or 4 points).
    """
    out_cam, out_world = [], []
    n = cam_pts.shape[0]
    for i in range(n):
        a_c, b_c = cam_pts[i], cam_pts[(i + 1) % n]
        a_w, b_w = world_pts[i], world_pts[(i + 1) % n]
        a_in, b_in = a_c[2] >= near, b_c[2] >= near
        if a_in:
            out_cam.append(a_c)
            out_world.append(a_w)
        if a_in != b_in:
            t = (near - a_c[2]) / (b_c[2] - a_c[2])
            out_cam.append(a_c + t * (b_c - a_c))
            out_world.append(a_w + t * (b_w - a_w))
    return out_cam, out_world


def rasterize_world(mesh: Mesh, cam: Camera):
    """Z-buffered rasterization returning per-pixel nearest world points.

    No face culling, top-left fill rule, perspective-correct
    interpolation; fragments behind the near plane are clipped away.
    Returns ``(world, covered)`` with world shaped (rows, cols, 3).
    """
    width, height = cam.image_size
    depth = np.full((height, width), np.inf)
    world = np.zeros((height, width, 3))
    covered = np.zeros((height, width), dtype=bool)

    for tri in mesh.triangles:
        w_pts = mesh.vertices[tri]
        c_pts = cam.camera_coords(w_pts)
        if np.all(c_pts[:, 2] < NEAR_PLANE):
            continue
        poly_c, poly_w = _clip_near(c_pts, w_pts, NEAR_PLANE)
        # fan-triangulate the clipped polygon (3 or 4 vertices)
        for k in range(1, len(poly_c) - 1):
            _raster_triangle(
                [poly_c[0], poly_c[k], poly_c[k + 1]],
                [poly_w[0], poly_w[k], poly_w[k + 1]],
                cam,
                depth,
                world,
                covered,
            )
    return world, covered


def height_from_mesh(mesh: Mesh, cam: Camera) -> HeightMap:
    """Rasterize the mesh and measure, per covered pixel, how far the
    surface point's image sits above its ground footpoint's image.

    Raises NothingVisible when no pixel is covered.
    """
    width, height = cam.image_size
    world, covered = rasterize_world(mesh, cam)
    if not covered.any():
        raise NothingVisible("no mesh fragment covers any pixel")

    h = np.zeros((height, width), dtype=np.float32)
    ys, xs = np.nonzero(covered)
    w_pix = world[ys, xs]
    feet = w_pix.copy()
    feet[:, 1] = 0.0
    v_point = cam.project(w_pix)[:, 1]
    v_foot = cam.project(feet)[:, 1]
    h[ys, xs] = np.maximum(v_foot - v_point, 0.0)
    return HeightMap(h, covered)


def _raster_triangle(cam_pts, world_pts, cam: Camera, depth, world, covered):
    width, height = cam.image_size
    c = np.asarray(cam_pts)
    w = np.asarray(world_pts)
    z = c[:, 2]
    u = cam.focal * c[:, 0] / z + cam.principal_point[0]
    v = cam.focal * c[:, 1] / z + cam.principal_point[1]

    x_min = max(int(np.ceil(u.min())), 0)
    x_max = min(int(np.floor(u.max())), width - 1)
    y_min = max(int(np.ceil(v.min())), 0)
    y_max = min(int(np.floor(v.max())), height - 1)
    if x_min > x_max or y_min > y_max:
        return

    area = (u[1] - u[0]) * (v[2] - v[0]) - (v[1] - v[0]) * (u[2] - u[0])
    if area == 0.0:
        return
    if area < 0:  # orient counter-clockwise in (x right, y down) pixels
        u = u[[0, 2, 1]]
        v = v[[0, 2, 1]]
        z = z[[0, 2, 1]]
        w = w[[0, 2, 1]]
        area = -area

    gx, gy = np.meshgrid(
        np.arange(x_min, x_max + 1, dtype=float),
        np.arange(y_min, y_max + 1, dtype=float),
    )
    e = []
    inside = np.ones(gx.shape, dtype=bool)
    for i in range(3):
        j = (i + 1) % 3
        ex = u[j] - u[i]
        ey = v[j] - v[i]
        val = ex * (gy - v[i]) - ey * (gx - u[i])
        # top-left rule: boundary pixels belong to top or left edges only
        # (with area > 0 in y-down pixels: top edges run +x, left edges run -y)
        top_left = (ey == 0 and ex > 0) or ey < 0
        inside &= (val > 0) | ((val == 0) & top_left)
        e.append(val)
    if not inside.any():
        return

    l0 = e[1][inside] / area  # weight of vertex 0 is the opposite edge
    l1 = e[2][inside] / area
    l2 = e[0][inside] / area
    inv_z = l0 / z[0] + l1 / z[1] + l2 / z[2]
    z_pix = 1.0 / inv_z
    w_pix = (
        l0[:, None] * w[0] / z[0]
        + l1[:, None] * w[1] / z[1]
        + l2[:, None] * w[2] / z[2]
    ) * z_pix[:, None]

    yy = gy[inside].astype(int)
    xx = gx[inside].astype(int)
    closer = z_pix < depth[yy, xx]
    yy, xx = yy[closer], xx[closer]
    depth[yy, xx] = z_pix[closer]
    world[yy, xx] = w_pix[closer]
    covered[yy, xx] = True
