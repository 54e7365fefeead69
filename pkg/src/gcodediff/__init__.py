"""Static comparison of linear-motion G-code programs.

Pipeline: parse G-code, lift extruding moves to cuboids, sample the
cuboids into point clouds, segment two clouds over a shared unit-box grid,
and compute per-box augmented Hausdorff distances for localized diffing.
"""

from .gcode import MotionCommand, ParseOptions, Program, parse_file, parse_program
from .grid import BoundingBox, BoxedPointSets, UnitBoxSpec, bounding_box, segment
from .hausdorff import Distance, DistanceField, box_distance, compare, one_way_hd
from .postprocess import (ColorField, Histogram, combine_fields, histogram,
                          spatial_average, threshold_colorize)
from .sampling import PointCloud, SamplingParams, build_point_cloud, sample_cuboid
from .semantics import (Cuboid, MachineState, SlicingParams, cuboid_from_move,
                        run, step)
from .transforms import RotationVector, align_min_corner, rotate_point_cloud

__version__ = "0.1.0"

__all__ = [
    "MotionCommand", "ParseOptions", "Program", "parse_file", "parse_program",
    "BoundingBox", "BoxedPointSets", "UnitBoxSpec", "bounding_box", "segment",
    "Distance", "DistanceField", "box_distance", "compare", "one_way_hd",
    "ColorField", "Histogram", "combine_fields", "histogram",
    "spatial_average", "threshold_colorize",
    "PointCloud", "SamplingParams", "build_point_cloud", "sample_cuboid",
    "Cuboid", "MachineState", "SlicingParams", "cuboid_from_move", "run", "step",
    "RotationVector", "align_min_corner", "rotate_point_cloud",
]
