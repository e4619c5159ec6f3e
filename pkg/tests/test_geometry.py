import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from shadowkit.geometry import (
    DegenerateLight,
    DegenerateRay,
    HeightPixel,
    HorizonSpec,
    PixelCoord,
    PointLight,
    UndefinedRatio,
    collinearity_ratio,
    light_from_horizon,
    project_shadow_point,
    reflect_point,
)

A = HeightPixel(PixelCoord(300.0, 200.0), 100.0)
L = PointLight(PixelCoord(100.0, 50.0), 200.0)


def test_shadow_point_worked_example():
    c = project_shadow_point(A, L)
    assert (c.x, c.y) == (500.0, 350.0)


def test_zero_height_point_is_its_own_shadow():
    a = HeightPixel(PixelCoord(300.0, 200.0), 0.0)
    c = project_shadow_point(a, L)
    assert (c.x, c.y) == (300.0, 200.0)
    # exact for awkward light values too
    c = project_shadow_point(a, PointLight(PixelCoord(0.1, 0.7), 0.3))
    assert (c.x, c.y) == (300.0, 200.0)


def test_behind_camera_light_casts_away_from_camera():
    light = PointLight(PixelCoord(100.0, 300.0), -200.0)
    c = project_shadow_point(A, light)
    assert c.x == pytest.approx(233.333333, abs=1e-5)
    assert c.y == pytest.approx(233.333333, abs=1e-5)
    assert c.y < A.footpoint.y  # shadow ends up above the footpoint row


def test_point_above_low_light_casts_no_shadow():
    a = HeightPixel(PixelCoord(300.0, 200.0), 150.0)
    assert project_shadow_point(a, PointLight(PixelCoord(100.0, 50.0), 100.0)) is None


def test_parallel_ray_raises():
    a = HeightPixel(PixelCoord(300.0, 200.0), 100.0)
    with pytest.raises(DegenerateRay):
        project_shadow_point(a, PointLight(PixelCoord(100.0, 50.0), 100.0))
    with pytest.raises(DegenerateRay):
        project_shadow_point(a, PointLight(PixelCoord(100.0, 50.0), 100.0 + 1e-12))


def test_collinearity_ratio_at_true_shadow_point():
    assert collinearity_ratio(A, L, PixelCoord(500.0, 350.0)) == (0.5, 0.5)


def test_collinearity_ratio_zero_height():
    a = HeightPixel(PixelCoord(300.0, 200.0), 0.0)
    assert collinearity_ratio(a, L, PixelCoord(300.0, 200.0)) == (0.0, 0.0)


def test_collinearity_ratio_detects_perturbation():
    rx, ry = collinearity_ratio(A, L, PixelCoord(400.0, 350.0))
    assert rx == pytest.approx(1.0 / 3.0)
    assert ry == 0.5
    assert rx != ry


def test_collinearity_ratio_undefined_axis():
    with pytest.raises(UndefinedRatio):
        collinearity_ratio(A, L, PixelCoord(100.0, 350.0))
    with pytest.raises(UndefinedRatio):
        collinearity_ratio(A, L, PixelCoord(500.0, 50.0))


def test_light_from_horizon():
    lt = light_from_horizon(PixelCoord(250.0, 40.0), HorizonSpec(100.0))
    assert lt.H == 60.0 and (lt.pos.x, lt.pos.y) == (250.0, 40.0)
    lt = light_from_horizon(PixelCoord(250.0, 160.0), HorizonSpec(100.0))
    assert lt.H == -60.0
    with pytest.raises(DegenerateLight):
        light_from_horizon(PixelCoord(250.0, 100.0), HorizonSpec(100.0))


def test_reflect_point_examples():
    assert tuple(reflect_point(A)) == (300.0, 400.0)
    assert tuple(reflect_point(HeightPixel(PixelCoord(300.0, 200.0), 0.0))) == (300.0, 200.0)
    assert tuple(reflect_point(HeightPixel(PixelCoord(10.0, 5.0), 3.0))) == (10.0, 11.0)


coords = st.floats(-2000.0, 2000.0)
heights = st.floats(0.0, 400.0)
light_heights = st.one_of(st.floats(50.0, 2000.0), st.floats(-2000.0, -50.0))


@given(ax=coords, ay=coords, h=heights, px=coords, py=coords, H=light_heights)
@settings(max_examples=200)
def test_ratio_consistency(ax, ay, h, px, py, H):
    """Both collinearity ratios of the projected point equal h / H."""
    assume(abs(H - h) > 1e-3)
    a = HeightPixel(PixelCoord(ax, ay), h)
    light = PointLight(PixelCoord(px, py), H)
    c = project_shadow_point(a, light)
    if c is None:
        assert h > H > 0
        return
    # the ratio is undefined when c shares a coordinate with the light;
    # near-coincidence is numerically the same degeneracy
    assume(abs(c.x - px) > 1e-3 * (1.0 + abs(c.x)))
    assume(abs(c.y - py) > 1e-3 * (1.0 + abs(c.y)))
    rx, ry = collinearity_ratio(a, light, c)
    assert rx == pytest.approx(h / H, abs=1e-9)
    assert ry == pytest.approx(h / H, abs=1e-9)


@given(ax=coords, ay=coords, h=heights, px=coords, py=coords, H=light_heights,
       k=st.sampled_from([0.5, 2.0, 10.0]))
@settings(max_examples=200)
def test_height_scale_invariance(ax, ay, h, px, py, H, k):
    assume(abs(H - h) > 1e-3)
    a = HeightPixel(PixelCoord(ax, ay), h)
    light = PointLight(PixelCoord(px, py), H)
    c = project_shadow_point(a, light)
    ck = project_shadow_point(
        HeightPixel(PixelCoord(ax, ay), k * h), PointLight(PixelCoord(px, py), k * H)
    )
    if c is None or ck is None:
        assert c is None and ck is None
        return
    assert ck.x == pytest.approx(c.x, rel=1e-12, abs=1e-9)
    assert ck.y == pytest.approx(c.y, rel=1e-12, abs=1e-9)


@given(ax=coords, ay=coords, h=heights, px=coords, py=coords, H=light_heights,
       dx=st.floats(-500.0, 500.0), dy=st.floats(-500.0, 500.0))
@settings(max_examples=200)
def test_translation_equivariance(ax, ay, h, px, py, H, dx, dy):
    assume(abs(H - h) > 1e-3)
    c = project_shadow_point(HeightPixel(PixelCoord(ax, ay), h),
                             PointLight(PixelCoord(px, py), H))
    ct = project_shadow_point(HeightPixel(PixelCoord(ax + dx, ay + dy), h),
                              PointLight(PixelCoord(px + dx, py + dy), H))
    if c is None or ct is None:
        assert c is None and ct is None
        return
    assert ct.x == pytest.approx(c.x + dx, rel=1e-9, abs=1e-6)
    assert ct.y == pytest.approx(c.y + dy, rel=1e-9, abs=1e-6)


@given(ax=coords, ay=coords, px=coords, py=coords, H=light_heights)
@settings(max_examples=100)
def test_footpoint_fixpoint_exact(ax, ay, px, py, H):
    c = project_shadow_point(HeightPixel(PixelCoord(ax, ay), 0.0),
                             PointLight(PixelCoord(px, py), H))
    assert (c.x, c.y) == (ax, ay)


@given(ax=coords, ay=coords, h=heights)
@settings(max_examples=100)
def test_reflection_mirrors_across_footpoint(ax, ay, h):
    a = HeightPixel(PixelCoord(ax, ay), h)
    r = reflect_point(a)
    assert r.x == a.pos.x
    mid_y = 0.5 * (a.pos.y + r.y)
    assert mid_y == pytest.approx(a.footpoint.y, rel=1e-12, abs=1e-9)
