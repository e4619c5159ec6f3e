"""Numba kernels behind the hard-shadow rasterizers.

The planar path forward-splats projected 2x2 pixel quads; the generic
path marches the image segment from each receiver pixel toward the
light in the lifted (x, y + h, h) frame. Both write binary uint8
occlusion buffers.
"""

import math

import numpy as np
from numba import njit, prange


@njit(cache=True)
def _plot(out, xf, yf):
    xi = int(math.floor(xf + 0.5))
    yi = int(math.floor(yf + 0.5))
    if 0 <= xi < out.shape[1] and 0 <= yi < out.shape[0]:
        out[yi, xi] = 1


@njit(cache=True)
def _segment(out, x0, y0, x1, y1):
    """Sample a segment twice per pixel of span, at power-of-two
    parameters so well-conditioned endpoints stay exact."""
    span = max(abs(x1 - x0), abs(y1 - y0))
    if span > 4.0e6:  # both endpoints far outside any image
        return
    n = 1
    while n < 2.0 * span:
        n *= 2
    dx = x1 - x0
    dy = y1 - y0
    for i in range(n + 1):
        t = i / n
        _plot(out, x0 + t * dx, y0 + t * dy)


@njit(cache=True)
def _triangle(out, x0, y0, x1, y1, x2, y2):
    """Fill every integer lattice point inside or on the triangle."""
    area = (x1 - x0) * (y2 - y0) - (y1 - y0) * (x2 - x0)
    if area == 0.0:
        _segment(out, x0, y0, x1, y1)
        _segment(out, x1, y1, x2, y2)
        return
    if area < 0.0:
        x1, x2 = x2, x1
        y1, y2 = y2, y1
    hh, ww = out.shape
    xmin = max(int(math.ceil(min(x0, x1, x2))), 0)
    xmax = min(int(math.floor(max(x0, x1, x2))), ww - 1)
    ymin = max(int(math.ceil(min(y0, y1, y2))), 0)
    ymax = min(int(math.floor(max(y0, y1, y2))), hh - 1)
    for py in range(ymin, ymax + 1):
        for px in range(xmin, xmax + 1):
            if (x1 - x0) * (py - y0) - (y1 - y0) * (px - x0) < 0.0:
                continue
            if (x2 - x1) * (py - y1) - (y2 - y1) * (px - x1) < 0.0:
                continue
            if (x0 - x2) * (py - y2) - (y0 - y2) * (px - x2) < 0.0:
                continue
            out[py, px] = 1


@njit(cache=True, parallel=True)
def splat_hard_planar(mask, hmap, xp, yp, H, eps_den, out):
    """Races between parallel rows only ever write the constant 1, so
    the output is deterministic regardless of scheduling."""
    hh, ww = mask.shape
    cx = np.empty((hh, ww))
    cy = np.empty((hh, ww))
    valid = np.zeros((hh, ww), dtype=np.uint8)
    for y in prange(hh):
        for x in range(ww):
            if not mask[y, x]:
                continue
            h = hmap[y, x]
            den = H - h
            if abs(den) < eps_den:
                continue
            if H > 0.0 and h > H:  # ray never reaches the ground
                continue
            valid[y, x] = 1
            if h == 0.0:  # exact fixpoint: a ground pixel is its own shadow
                cx[y, x] = x
                cy[y, x] = y
            else:
                cx[y, x] = (H * x - h * xp) / den
                cy[y, x] = (H * y - h * yp) / den

    quad = np.zeros((hh, ww), dtype=np.uint8)
    for y in prange(hh - 1):
        for x in range(ww - 1):
            if valid[y, x] and valid[y, x + 1] and valid[y + 1, x] \
                    and valid[y + 1, x + 1]:
                quad[y, x] = 1

    for y in prange(hh):
        for x in range(ww):
            if valid[y, x]:
                _plot(out, cx[y, x], cy[y, x])

    # pair segments cover thin structures; quads already cover their edges
    for y in prange(hh):
        for x in range(ww - 1):
            if valid[y, x] and valid[y, x + 1]:
                covered = (y < hh - 1 and quad[y, x]) or (y > 0 and quad[y - 1, x])
                if not covered:
                    _segment(out, cx[y, x], cy[y, x], cx[y, x + 1], cy[y, x + 1])
    for y in prange(hh - 1):
        for x in range(ww):
            if valid[y, x] and valid[y + 1, x]:
                covered = (x < ww - 1 and quad[y, x]) or (x > 0 and quad[y, x - 1])
                if not covered:
                    _segment(out, cx[y, x], cy[y, x], cx[y + 1, x], cy[y + 1, x])

    for y in prange(hh - 1):
        for x in range(ww - 1):
            v00 = valid[y, x]
            v10 = valid[y, x + 1]
            v01 = valid[y + 1, x]
            v11 = valid[y + 1, x + 1]
            n = int(v00) + int(v10) + int(v01) + int(v11)
            if n == 4:
                _triangle(out, cx[y, x], cy[y, x], cx[y, x + 1], cy[y, x + 1],
                          cx[y + 1, x + 1], cy[y + 1, x + 1])
                _triangle(out, cx[y, x], cy[y, x], cx[y + 1, x + 1],
                          cy[y + 1, x + 1], cx[y + 1, x], cy[y + 1, x])
            elif n == 3:
                if not v00:
                    _triangle(out, cx[y, x + 1], cy[y, x + 1],
                              cx[y + 1, x + 1], cy[y + 1, x + 1],
                              cx[y + 1, x], cy[y + 1, x])
                elif not v10:
                    _triangle(out, cx[y, x], cy[y, x],
                              cx[y + 1, x + 1], cy[y + 1, x + 1],
                              cx[y + 1, x], cy[y + 1, x])
                elif not v11:
                    _triangle(out, cx[y, x], cy[y, x], cx[y, x + 1],
                              cy[y, x + 1], cx[y + 1, x], cy[y + 1, x])
                else:
                    _triangle(out, cx[y, x], cy[y, x], cx[y, x + 1],
                              cy[y, x + 1], cx[y + 1, x + 1], cy[y + 1, x + 1])


@njit(cache=True)
def _march_one(mask, cell4, objh, band, cmin, cmax, hr, x, y, xp, yp,
               H, maxh, maxband, bx0, bx1, by0, by1):
    """March from one receiver pixel toward the light in the lifted
    frame; 1 if some object pixel blocks the ray.

    The segment parameter t is 0 at the receiver and 1 at the light's
    lifted position; behind-camera lights (H < 0) are reached along
    t < 0, where the virtual image of the light lies opposite its
    projected position. The hit band per visited pixel is the ray's
    height motion per step plus the sheet's local height gap, both of
    which scale with the scene, keeping renders height-scale invariant.
    """
    hh, ww = mask.shape
    dx = xp - x
    dy = yp - y
    dh = H - hr

    if H > 0.0:
        t_lo, t_hi = 0.0, 1.0
    else:
        t_lo, t_hi = -1.0e30, 0.0

    # clip to the object bounding box (only masked pixels can block)
    if dx > 0.0:
        t_hi = min(t_hi, (bx1 - x) / dx)
        t_lo = max(t_lo, (bx0 - x) / dx)
    elif dx < 0.0:
        t_hi = min(t_hi, (bx0 - x) / dx)
        t_lo = max(t_lo, (bx1 - x) / dx)
    elif x < bx0 or x > bx1:
        return np.uint8(0)
    if dy > 0.0:
        t_hi = min(t_hi, (by1 - y) / dy)
        t_lo = max(t_lo, (by0 - y) / dy)
    elif dy < 0.0:
        t_hi = min(t_hi, (by0 - y) / dy)
        t_lo = max(t_lo, (by1 - y) / dy)
    elif y < by0 or y > by1:
        return np.uint8(0)
    if t_lo > t_hi:
        return np.uint8(0)

    span = max(abs(dx), abs(dy)) * (t_hi - t_lo)
    n = max(int(math.ceil(span / 0.5)), 1)
    step_dh = abs(dh) * (t_hi - t_lo) / n

    # walk outward from the receiver so the rising-ray exit is valid
    if H > 0.0:
        t_start, t_end = t_lo, t_hi
        if t_start < 0.0:
            t_start = 0.0
    else:
        t_start, t_end = t_hi, t_lo
        if t_start > 0.0:
            t_start = 0.0
    rising = dh * (t_end - t_start) > 0.0
    prev_valid = False
    prev_diff = 0.0
    for i in range(n + 1):
        t = t_start + (t_end - t_start) * i / n
        ht = hr + t * dh
        xf = x + t * dx
        yf = y + t * dy
        x0 = int(math.floor(xf))
        y0 = int(math.floor(yf))
        # interior of the sheet: sample it bilinearly (the continuous
        # surface the planar splat fills between pixel centers)
        if 0 <= x0 < ww - 1 and 0 <= y0 < hh - 1 and cell4[y0, x0]:
            # cell height bounds settle most steps without interpolating
            if ht > cmax[y0, x0] + step_dh:
                diff = -1.0
            elif ht < cmin[y0, x0] - step_dh:
                diff = 1.0
            else:
                fx = xf - x0
                fy = yf - y0
                hs = (objh[y0, x0] * (1.0 - fx) * (1.0 - fy)
                      + objh[y0, x0 + 1] * fx * (1.0 - fy)
                      + objh[y0 + 1, x0] * (1.0 - fx) * fy
                      + objh[y0 + 1, x0 + 1] * fx * fy)
                diff = hs - ht
                if abs(diff) <= step_dh:
                    return np.uint8(1)
            if prev_valid and ((diff > 0.0) != (prev_diff > 0.0)):
                return np.uint8(1)  # ray pierced the sheet between samples
            prev_valid = True
            prev_diff = diff
        else:
            # sheet rim: nearest masked pixel with its local height band
            prev_valid = False
            px = int(math.floor(xf + 0.5))
            py = int(math.floor(yf + 0.5))
            if 0 <= px < ww and 0 <= py < hh and mask[py, px]:
                if abs(objh[py, px] - ht) <= step_dh + band[py, px]:
                    return np.uint8(1)
        if rising and ht > maxh + step_dh + maxband:
            break
    return np.uint8(0)


@njit(cache=True, parallel=True)
def march_hard_generic(mask, cell4, objh, band, cmin, cmax, recvh, xp, yp,
                       H, maxh, maxband, bx0, bx1, by0, by1, out):
    hh, ww = mask.shape
    for y in prange(hh):
        for x in range(ww):
            out[y, x] = _march_one(mask, cell4, objh, band, cmin, cmax,
                                   recvh[y, x], float(x), float(y), xp, yp,
                                   H, maxh, maxband, bx0, bx1, by0, by1)
