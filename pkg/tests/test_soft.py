import numpy as np
import pytest

from shadowkit import (
    EmptyMask,
    HeightMap,
    PixelCoord,
    PointLight,
    ReceiverMap,
    SamplingConfig,
    SoftnessSpec,
    render_hard_planar,
    render_soft,
    sample_light_positions,
    softness_to_sigma,
)
from shadowkit.soft import InvalidSamplingConfig, InvalidSoftness

from conftest import make_blob_scene


@pytest.fixture(scope="module")
def scene():
    obj = make_blob_scene(size=96, seed=3)
    light = PointLight(PixelCoord(15.0, -10.0), 130.0)
    return obj, light


def centroid_scene(dist=500.0):
    mask = np.zeros((600, 600), bool)
    mask[300, 200] = True
    obj = HeightMap(np.zeros((600, 600), np.float32), mask)
    light = PointLight(PixelCoord(200.0 + dist * 0.6, 300.0 + dist * 0.8), 100.0)
    return obj, light


class TestSigma:
    def test_zero_softness_is_point_light(self, scene):
        obj, light = scene
        assert softness_to_sigma(SoftnessSpec(0.0), light, obj) == 0.0

    def test_sigma_scales_with_light_distance(self):
        obj, light = centroid_scene(dist=500.0)
        assert softness_to_sigma(SoftnessSpec(0.4), light, obj) == pytest.approx(200.0)
        assert softness_to_sigma(SoftnessSpec(0.05), light, obj) == pytest.approx(25.0)

    def test_empty_mask_raises(self):
        obj = HeightMap(np.zeros((8, 8), np.float32), np.zeros((8, 8), bool))
        with pytest.raises(EmptyMask):
            softness_to_sigma(SoftnessSpec(0.2), PointLight(PixelCoord(0, 0), 10.0), obj)

    def test_softness_range_validated(self):
        with pytest.raises(InvalidSoftness):
            SoftnessSpec(-0.1)
        with pytest.raises(InvalidSoftness):
            SoftnessSpec(1.1)


class TestSampling:
    def test_sample_count_validated(self):
        with pytest.raises(InvalidSamplingConfig):
            SamplingConfig(n_samples=0)

    def test_zero_sigma_collapses_to_center(self):
        light = PointLight(PixelCoord(40.0, 50.0), 70.0)
        pos = sample_light_positions(light, 0.0, SamplingConfig(n_samples=5))
        assert np.array_equal(pos, np.tile([40.0, 50.0], (5, 1)))

    def test_deterministic_for_seed(self):
        light = PointLight(PixelCoord(40.0, 50.0), 70.0)
        a = sample_light_positions(light, 20.0, SamplingConfig(n_samples=16, seed=9))
        b = sample_light_positions(light, 20.0, SamplingConfig(n_samples=16, seed=9))
        assert np.array_equal(a, b)
        c = sample_light_positions(light, 20.0, SamplingConfig(n_samples=16, seed=10))
        assert not np.array_equal(a, c)

    def test_stratified_spreads_samples(self):
        """Stratified samples hit every quantile quadrant; i.i.d. may not."""
        light = PointLight(PixelCoord(0.0, 0.0), 70.0)
        pos = sample_light_positions(light, 30.0,
                                     SamplingConfig(n_samples=64, seed=0))
        quadrants = {(x > 0, y > 0) for x, y in pos}
        assert len(quadrants) == 4

    def test_iid_mode(self):
        light = PointLight(PixelCoord(0.0, 0.0), 70.0)
        pos = sample_light_positions(
            light, 30.0, SamplingConfig(n_samples=64, seed=0, stratified=False))
        assert pos.shape == (64, 2)
        assert np.std(pos[:, 0]) == pytest.approx(30.0, rel=0.5)


class TestRenderSoft:
    def test_zero_softness_bit_equals_hard(self, scene):
        obj, light = scene
        hard = render_hard_planar(obj, light)
        soft = render_soft(obj, light, SoftnessSpec(0.0))
        assert np.array_equal(hard.v, soft.v)

    def test_single_sample_is_binary(self, scene):
        obj, light = scene
        s = render_soft(obj, light, SoftnessSpec(0.3), SamplingConfig(n_samples=1, seed=5))
        assert s.is_binary()

    def test_value_is_fraction_of_shadowing_samples(self, scene):
        """Brute force at n=8: per-pixel value == shadowed-sample count / 8."""
        obj, light = scene
        cfg = SamplingConfig(n_samples=8, seed=21)
        soft = render_soft(obj, light, SoftnessSpec(0.25), cfg)
        sigma = softness_to_sigma(SoftnessSpec(0.25), light, obj)
        acc = np.zeros(obj.shape, np.float64)
        for px, py in sample_light_positions(light, sigma, cfg):
            acc += render_hard_planar(obj, PointLight(PixelCoord(px, py), light.H)).v
        assert np.array_equal(soft.v, (acc / 8.0).astype(np.float32))

    def test_deterministic(self, scene):
        obj, light = scene
        cfg = SamplingConfig(n_samples=32, seed=7)
        a = render_soft(obj, light, SoftnessSpec(0.2), cfg)
        b = render_soft(obj, light, SoftnessSpec(0.2), cfg)
        assert np.array_equal(a.v, b.v)

    def test_range_and_receiver_path(self, scene):
        obj, light = scene
        cfg = SamplingConfig(n_samples=8, seed=2)
        s = render_soft(obj, light, SoftnessSpec(0.3), cfg,
                        receiver=ReceiverMap.ground(obj.shape))
        assert float(s.v.min()) >= 0.0 and float(s.v.max()) <= 1.0

    def test_penumbra_monotone_in_softness(self, scene):
        obj, light = scene
        areas = []
        for s in (0.0, 0.05, 0.1, 0.2, 0.4):
            out = render_soft(obj, light, SoftnessSpec(s),
                              SamplingConfig(n_samples=256, seed=0))
            areas.append(int(((out.v > 0.01) & (out.v < 0.99)).sum()))
        assert all(a <= b for a, b in zip(areas, areas[1:])), areas
        assert areas[-1] > areas[0]

    def test_umbra_shrinks_with_softness(self, scene):
        """Fully-shadowed pixels at higher softness form a subset of the
        lower-softness umbra, up to 0.5% slack for sampling noise."""
        obj, light = scene
        cfg = SamplingConfig(n_samples=256, seed=0)
        prev = None
        for s in (0.05, 0.1, 0.2, 0.4):
            umbra = render_soft(obj, light, SoftnessSpec(s), cfg).v == 1.0
            if prev is not None:
                leaked = np.logical_and(umbra, ~prev).sum()
                assert leaked <= 0.005 * max(prev.sum(), 1)
            prev = umbra
