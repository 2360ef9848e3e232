"""lapval: exact Laplace transforms of convex polytopes and step functions,
plus a verification harness for the valuation and covariance identities
the transform satisfies."""

from .geom import (
    Hyperplane,
    LinearMap,
    Polytope,
    PolyUnion,
    Simplex,
    box_polytope,
    clip,
    convex_hull,
    cube,
    hausdorff,
    std_simplex,
    surface_area,
    transform_body,
    triangulate,
    volume,
)
from .laplace import (
    TransformValue,
    exp_dd,
    laplace_box,
    laplace_grid,
    laplace_polytope,
    laplace_simplex,
    laplace_union,
)

__all__ = [
    "Hyperplane",
    "LinearMap",
    "Polytope",
    "PolyUnion",
    "Simplex",
    "TransformValue",
    "box_polytope",
    "clip",
    "convex_hull",
    "cube",
    "exp_dd",
    "hausdorff",
    "laplace_box",
    "laplace_grid",
    "laplace_polytope",
    "laplace_simplex",
    "laplace_union",
    "std_simplex",
    "surface_area",
    "transform_body",
    "triangulate",
    "volume",
]

__version__ = "0.1.0"
