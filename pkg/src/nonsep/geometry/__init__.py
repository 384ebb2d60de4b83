"""Planar convex geometry kernel with minimal 3D support-function machinery."""
from .bodies import (
    EPS_G,
    EPS_NORM,
    Ball,
    Body,
    ConvexPolygon,
    Polytope3,
    angle_direction,
    contains,
    convex_hull,
    convex_hull_points,
    direction,
    realize_homothet,
    regular_hexagon,
    regular_polygon,
    regular_tetrahedron,
    support,
    unit_square,
    unit_triangle,
    width,
)
from .disks import disk_hull_area, disk_hull_support, disk_union_area
from .gjk import disk_set_support, gjk_distance, point_set_support
from .polygon_ops import (
    Erosion,
    HullRelation,
    Relation,
    central_symmetrization,
    clip_halfplane,
    erosion,
    hull_of,
    hull_relation,
    largest_inscribed_triangle,
    minkowski_sum,
    polygon_distance,
    polygon_intersection,
    union_area,
)

__all__ = [name for name in dir() if not name.startswith("_")]
