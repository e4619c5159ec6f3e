"""Bundled renderer benchmark: a reproducible synthetic scene and
median-of-N timings for the hard and soft paths."""

from __future__ import annotations

import time
from typing import Dict, Tuple

import numpy as np

from .geometry import PixelCoord, PointLight
from .heightmap import HeightMap
from .render import ReceiverMap, render_hard_generic, render_hard_planar
from .soft import SamplingConfig, SoftnessSpec, render_soft


def standard_scene(size: int = 512, seed: int = 0) -> Tuple[HeightMap, PointLight]:
    """Smooth multi-bump height blob plus a light that casts mid-length
    shadows across the canvas."""
    rng = np.random.default_rng(seed)
    yy, xx = np.mgrid[0:size, 0:size].astype(np.float64)
    h = np.zeros((size, size))
    for _ in range(4):
        cx = rng.uniform(size * 0.30, size * 0.70)
        cy = rng.uniform(size * 0.35, size * 0.75)
        r = rng.uniform(size * 0.06, size * 0.16)
        amp = rng.uniform(size * 0.08, size * 0.20)
        h += amp * np.exp(-((xx - cx) ** 2 + (yy - cy) ** 2) / (2.0 * r * r))
    floor = size * 0.02
    mask = h > floor
    h = np.where(mask, h - floor, 0.0)
    light = PointLight(PixelCoord(size * 0.15, -size * 0.30), H=size * 0.90)
    return HeightMap(h.astype(np.float32), mask), light


def run_benchmark(
    size: int = 512, runs: int = 3, samples: int = 64, seed: int = 0
) -> Dict[str, float]:
    """Median wall-clock seconds per renderer over ``runs`` repetitions.

    One warmup render per path happens before timing so JIT compilation
    is excluded.
    """
    obj, light = standard_scene(size, seed)
    recv = ReceiverMap.ground(obj.shape)
    soft_cfg = SamplingConfig(n_samples=samples, seed=seed)
    softness = SoftnessSpec(0.2)

    cases = {
        "planar_hard": lambda: render_hard_planar(obj, light),
        "generic_hard": lambda: render_hard_generic(obj, recv, light),
        f"soft_n{samples}": lambda: render_soft(obj, light, softness, soft_cfg),
    }
    results: Dict[str, float] = {}
    for name, fn in cases.items():
        fn()  # warmup
        times = []
        for _ in range(runs):
            t0 = time.perf_counter()
            fn()
            times.append(time.perf_counter() - t0)
        results[name] = float(np.median(times))
    return results
