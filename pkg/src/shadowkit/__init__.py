"""2.5D shadow and reflection synthesis for image cutouts.

Objects are described by a per-pixel height map over their mask;
shadows follow from a closed-form projection of each elevated pixel
toward a point light, soft shadows from averaging hard shadows over a
Gaussian area light.
"""

from .composite import (
    CompositeParams,
    composite_reflection,
    composite_shadow,
    metric_abs,
    metric_zncc,
)
from .geometry import (
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
from .heightmap import (
    AnnotationSample,
    EmptyAnnotation,
    HeightMap,
    NegativeHeightResult,
    SparseAnnotation,
    interpolate_sparse,
    offset_height,
)
from .mesh import Camera, Mesh, NothingVisible, height_from_mesh
from .render import (
    DimensionMismatch,
    ReceiverMap,
    ShadowMap,
    render_hard_generic,
    render_hard_planar,
    render_reflection,
)
from .soft import (
    EmptyMask,
    SamplingConfig,
    SoftnessSpec,
    render_soft,
    sample_light_positions,
    softness_to_sigma,
)

__version__ = "0.1.0"

__all__ = [
    "AnnotationSample",
    "Camera",
    "CompositeParams",
    "DegenerateLight",
    "DegenerateRay",
    "DimensionMismatch",
    "EmptyAnnotation",
    "EmptyMask",
    "HeightMap",
    "HeightPixel",
    "HorizonSpec",
    "Mesh",
    "NegativeHeightResult",
    "NothingVisible",
    "PixelCoord",
    "PointLight",
    "ReceiverMap",
    "SamplingConfig",
    "ShadowMap",
    "SoftnessSpec",
    "SparseAnnotation",
    "UndefinedRatio",
    "collinearity_ratio",
    "composite_reflection",
    "composite_shadow",
    "height_from_mesh",
    "interpolate_sparse",
    "light_from_horizon",
    "metric_abs",
    "metric_zncc",
    "offset_height",
    "project_shadow_point",
    "reflect_point",
    "render_hard_generic",
    "render_hard_planar",
    "render_reflection",
    "render_soft",
    "sample_light_positions",
    "softness_to_sigma",
]
