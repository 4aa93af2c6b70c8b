"""Convex regions in half-space form, LP, erosion and hit-and-run sampling."""

from .hsi import (
    HSI,
    chebyshev_center,
    clip_line,
    contains,
    contains_many,
    erode,
    intersect,
    lp_solve,
)
from .lp import LPResult, LPStatus, linprog
from .regions import (
    All,
    ConvexPolygon3D,
    ConvexPolyhedron,
    Cuboid,
    EmbeddedHSI,
    Empty,
    Halfspace,
    PlaneFrame,
    Rect3D,
    Region,
    halfspace_hsi,
    oriented_box_hsi,
    region_to_hsi,
    workspace_hsi,
)
from .sampling import default_mix_iterations, hit_and_run, sample_uniform

__all__ = [
    "HSI", "chebyshev_center", "clip_line", "contains", "contains_many", "erode",
    "intersect", "lp_solve", "LPResult", "LPStatus", "linprog", "All",
    "ConvexPolygon3D", "ConvexPolyhedron", "Cuboid", "EmbeddedHSI", "Empty",
    "Halfspace", "PlaneFrame", "Rect3D", "Region", "halfspace_hsi",
    "oriented_box_hsi", "region_to_hsi", "workspace_hsi",
    "default_mix_iterations", "hit_and_run", "sample_uniform",
]
