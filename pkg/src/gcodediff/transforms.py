"""Rigid transforms and coarse alignment of point clouds."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptyInput
from .sampling import PointCloud


@dataclass(frozen=True)
class RotationVector:
    rx: float   # degrees
    ry: float
    rz: float

    @classmethod
    def parse(cls, text: str) -> "RotationVector":
        parts = [float(p) for p in text.split(",")]
        if len(parts) != 3:
            raise ValueError("rotation vector must be rx,ry,rz in degrees")
        return cls(*parts)

    def is_zero(self) -> bool:
        return self.rx == 0 and self.ry == 0 and self.rz == 0


def _axis_matrix(angle_deg: float, axis: int) -> np.ndarray:
    a = math.radians(angle_deg)
    c, s = math.cos(a), math.sin(a)
    m = np.eye(3)
    i, j = [(1, 2), (2, 0), (0, 1)][axis]
    m[i, i] = c
    m[j, j] = c
    m[j, i] = s
    m[i, j] = -s
    return m


def rotation_matrix(v: RotationVector) -> np.ndarray:
    """Composition Rz @ Ry @ Rx about the global origin."""
    return _axis_matrix(v.rz, 2) @ _axis_matrix(v.ry, 1) @ _axis_matrix(v.rx, 0)


def inverse_rotation_matrix(v: RotationVector) -> np.ndarray:
    """Exact inverse of rotation_matrix(v) (orthogonal transpose)."""
    return rotation_matrix(v).T


def apply_matrix(pc: PointCloud, m: np.ndarray) -> PointCloud:
    return PointCloud.from_points(pc.points @ m.T)


def rotate_point_cloud(pc: PointCloud, v: RotationVector) -> PointCloud:
    """Rotate every point about the origin; bounding box is recomputed."""
    return apply_matrix(pc, rotation_matrix(v))


def translate_point_cloud(pc: PointCloud, offset) -> PointCloud:
    return PointCloud.from_points(pc.points + np.asarray(offset, dtype=np.float64))


def align_min_corner(reference: PointCloud, moving: PointCloud) -> PointCloud:
    """Translate moving so both bounding-box minimum corners coincide."""
    if reference.bbox_min is None or moving.bbox_min is None:
        raise EmptyInput("cannot align an empty point cloud")
    return translate_point_cloud(moving, reference.bbox_min - moving.bbox_min)
