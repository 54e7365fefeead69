"""Proportional point sampling of cuboid sets.

Each cuboid is discretized as an inclusive regular lattice in its local
frame; the sampling gap g is an upper bound on the lattice pitch, so larger
cuboids receive proportionally more points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .semantics import Cuboid


@dataclass(frozen=True)
class SamplingParams:
    g: float    # sampling gap, mm

    def __post_init__(self):
        if self.g <= 0:
            raise ValueError("sampling gap must be positive")


@dataclass(frozen=True, eq=False)
class PointCloud:
    points: np.ndarray          # (N, 3) float64
    bbox_min: np.ndarray | None
    bbox_max: np.ndarray | None

    @classmethod
    def from_points(cls, points: np.ndarray) -> "PointCloud":
        points = np.asarray(points, dtype=np.float64).reshape(-1, 3)
        if len(points) == 0:
            return cls(points=points, bbox_min=None, bbox_max=None)
        return cls(points=points, bbox_min=points.min(axis=0), bbox_max=points.max(axis=0))

    def __len__(self) -> int:
        return len(self.points)


def sample_counts(cuboid: Cuboid, g: float) -> tuple[int, int, int]:
    """Lattice resolution per local axis: ceil(span / g) + 1 points each."""
    # the 1e-9 slack keeps spans that are exact multiples of g (up to fp
    # rounding of the division) from gaining a spurious extra point
    n_len = math.ceil(cuboid.length / g - 1e-9) + 1
    n_wid = math.ceil(cuboid.breadth / g - 1e-9) + 1
    n_hgt = math.ceil(cuboid.height / g - 1e-9) + 1
    return n_len, n_wid, n_hgt


def sample_cuboid(cuboid: Cuboid, g: float) -> np.ndarray:
    """Sample an inclusive lattice spanning the cuboid; returns (N, 3)."""
    n_len, n_wid, n_hgt = sample_counts(cuboid, g)
    b = cuboid.bottom
    along = b[1] - b[0]
    across = b[3] - b[0]
    up = np.array([0.0, 0.0, cuboid.height])
    s = np.linspace(0.0, 1.0, n_len)
    t = np.linspace(0.0, 1.0, n_wid)
    w = np.linspace(0.0, 1.0, n_hgt)
    pts = (b[0]
           + w[:, None, None, None] * up
           + t[None, :, None, None] * across
           + s[None, None, :, None] * along)
    return pts.reshape(-1, 3)


def build_point_cloud(cuboids, g: float) -> PointCloud:
    """Concatenate per-cuboid lattices, preserving cuboid order."""
    if g <= 0:
        raise ValueError("sampling gap must be positive")
    chunks = [sample_cuboid(c, g) for c in cuboids]
    if not chunks:
        return PointCloud.from_points(np.empty((0, 3)))
    return PointCloud.from_points(np.vstack(chunks))
