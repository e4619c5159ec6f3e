"""Shared scene builders for renderer tests."""

import numpy as np
import pytest

from shadowkit import HeightMap, PixelCoord, PointLight


def pytest_runtest_logreport(report):
    """One visible pass/fail line per acceptance criterion."""
    if report.when == "call" and "test_acceptance" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        verdict = "PASS" if report.passed else "FAIL"
        print(f"\n[acceptance] {verdict}: {name}")


def make_blob_scene(size=96, seed=0, n_bumps=3, max_h=None):
    """Random smooth height blob with float heights."""
    rng = np.random.default_rng(seed)
    yy, xx = np.mgrid[0:size, 0:size].astype(np.float64)
    h = np.zeros((size, size))
    top = max_h if max_h is not None else size * 0.4
    for _ in range(n_bumps):
        cx = rng.uniform(size * 0.3, size * 0.7)
        cy = rng.uniform(size * 0.35, size * 0.75)
        r = rng.uniform(size * 0.08, size * 0.18)
        amp = rng.uniform(top * 0.4, top)
        h += amp * np.exp(-((xx - cx) ** 2 + (yy - cy) ** 2) / (2 * r * r))
    floor = top * 0.08
    mask = h > floor
    h = np.where(mask, h - floor, 0.0)
    return HeightMap(h.astype(np.float32), mask)


def make_pow2_scene(size=64, seed=0):
    """Blob quantized to heights 0 and 256 under an H=512 light, so the
    shadow denominators are powers of two and every projected position
    is an exact dyadic rational (bit-exact invariance checks)."""
    blob = make_blob_scene(size=size, seed=seed, max_h=30.0)
    h = np.where(blob.h > 12.0, 256.0, 0.0).astype(np.float32)
    h[~blob.mask] = 0.0
    return HeightMap(h, blob.mask), PointLight(PixelCoord(20.0, 6.0), 512.0)


def shadow_iou(a, b):
    """Intersection over union of two binary shadow maps; 1.0 if both empty."""
    pa = a.v > 0.5
    pb = b.v > 0.5
    union = np.logical_or(pa, pb).sum()
    if union == 0:
        return 1.0
    return float(np.logical_and(pa, pb).sum() / union)


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Compile the numba kernels once so timed tests measure steady state."""
    from shadowkit import ReceiverMap, render_hard_generic, render_hard_planar

    obj = make_blob_scene(size=16, seed=1)
    light = PointLight(PixelCoord(2.0, -3.0), 40.0)
    render_hard_planar(obj, light)
    render_hard_generic(obj, ReceiverMap.ground(obj.shape), light)
