"""Uniform unit-box segmentation of two point clouds over a shared grid."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyInput, OutOfBounds
from .sampling import PointCloud

_SLACK = 1e-9


@dataclass(frozen=True, eq=False)
class BoundingBox:
    min: np.ndarray     # (3,)
    max: np.ndarray     # (3,)

    @property
    def extent(self) -> np.ndarray:
        return self.max - self.min


@dataclass(frozen=True)
class UnitBoxSpec:
    dx: float
    dy: float
    dz: float

    def __post_init__(self):
        if min(self.dx, self.dy, self.dz) <= 0:
            raise ValueError("unit box dimensions must be positive")

    @property
    def dims(self) -> np.ndarray:
        return np.array([self.dx, self.dy, self.dz])


def bounding_box(pc1: PointCloud, pc2: PointCloud) -> BoundingBox:
    """Componentwise min/max over the union of both clouds."""
    mins = [pc.bbox_min for pc in (pc1, pc2) if pc.bbox_min is not None]
    maxs = [pc.bbox_max for pc in (pc1, pc2) if pc.bbox_max is not None]
    if not mins:
        raise EmptyInput("both point clouds are empty")
    return BoundingBox(min=np.min(mins, axis=0), max=np.max(maxs, axis=0))


def count_unit_boxes(ubox: UnitBoxSpec, bbox: BoundingBox) -> tuple[int, int, int, int]:
    """Boxes per axis (boundary boxes may be partial) and their product."""
    counts = np.maximum(1, np.ceil(bbox.extent / ubox.dims).astype(int))
    nx, ny, nz = (int(c) for c in counts)
    return nx, ny, nz, nx * ny * nz


def find_box_index(p, ubox: UnitBoxSpec, bbox: BoundingBox) -> tuple[int, int, int]:
    """Floor-convention cell index of a point, clamped at the max boundary."""
    p = np.asarray(p, dtype=np.float64)
    if np.any(p < bbox.min - _SLACK) or np.any(p > bbox.max + _SLACK):
        raise OutOfBounds(f"point {p.tolist()} outside bounding box")
    nx, ny, nz, _ = count_unit_boxes(ubox, bbox)
    idx = np.floor((p - bbox.min) / ubox.dims).astype(int)
    idx = np.clip(idx, 0, np.array([nx, ny, nz]) - 1)
    return int(idx[0]), int(idx[1]), int(idx[2])


def neighborhood(idx, dims) -> list[tuple[int, int, int]]:
    """All grid cells within one step per axis of idx, idx included."""
    ix, iy, iz = idx
    nx, ny, nz = dims
    out = []
    for jz in range(max(0, iz - 1), min(nz, iz + 2)):
        for jy in range(max(0, iy - 1), min(ny, iy + 2)):
            for jx in range(max(0, ix - 1), min(nx, ix + 2)):
                out.append((jx, jy, jz))
    return out


class _Side:
    """Points of one cloud sorted by cell; lookup by binary search.

    Memory stays proportional to the point count, so pathologically fine
    grids (billions of mostly-empty cells) cost nothing extra.
    """

    def __init__(self, points: np.ndarray, linear: np.ndarray):
        order = np.argsort(linear, kind="stable")
        self.points = points[order]
        self.linear = linear[order]

    def cell(self, lin: int) -> np.ndarray:
        lo = np.searchsorted(self.linear, lin, side="left")
        hi = np.searchsorted(self.linear, lin, side="right")
        return self.points[lo:hi]

    def occupied(self) -> np.ndarray:
        return np.unique(self.linear)


@dataclass(eq=False)
class BoxedPointSets:
    bbox: BoundingBox
    ubox: UnitBoxSpec
    dims: tuple[int, int, int]
    sides: tuple[_Side, _Side]

    @property
    def n_cells(self) -> int:
        nx, ny, nz = self.dims
        return nx * ny * nz

    def linear_index(self, idx) -> int:
        ix, iy, iz = idx
        nx, ny, _ = self.dims
        return ix + nx * (iy + ny * iz)

    def unravel(self, lin: int) -> tuple[int, int, int]:
        nx, ny, _ = self.dims
        ix = lin % nx
        iy = (lin // nx) % ny
        iz = lin // (nx * ny)
        return ix, iy, iz

    def cell_points(self, side: int, idx) -> np.ndarray:
        return self.sides[side].cell(self.linear_index(idx))

    def neighborhood_points(self, side: int, idx) -> np.ndarray:
        s = self.sides[side]
        chunks = [s.cell(self.linear_index(j)) for j in neighborhood(idx, self.dims)]
        return np.vstack(chunks) if chunks else np.empty((0, 3))

    def occupied_cells(self) -> np.ndarray:
        """Linear indices of cells holding points on either side, ascending."""
        a, b = self.sides
        return np.union1d(a.occupied(), b.occupied())


def _linearize(points: np.ndarray, bbox: BoundingBox, ubox: UnitBoxSpec, dims) -> np.ndarray:
    nx, ny, nz = dims
    if len(points) == 0:
        return np.empty(0, dtype=np.int64)
    if (np.any(points < bbox.min - _SLACK) or np.any(points > bbox.max + _SLACK)):
        raise OutOfBounds("point cloud extends outside the shared bounding box")
    idx = np.floor((points - bbox.min) / ubox.dims).astype(np.int64)
    np.clip(idx, 0, np.array([nx, ny, nz]) - 1, out=idx)
    return idx[:, 0] + nx * (idx[:, 1] + ny * idx[:, 2])


def segment(pc1: PointCloud, pc2: PointCloud, ubox: UnitBoxSpec,
            bbox: BoundingBox | None = None) -> BoxedPointSets:
    """Bucket both clouds into a shared uniform grid of unit boxes.

    A caller may pass a precomputed bbox so that several comparisons share
    one grid; by default the union bbox of the two clouds is used.
    """
    if bbox is None:
        bbox = bounding_box(pc1, pc2)
    nx, ny, nz, _ = count_unit_boxes(ubox, bbox)
    dims = (nx, ny, nz)
    sides = tuple(
        _Side(pc.points, _linearize(pc.points, bbox, ubox, dims))
        for pc in (pc1, pc2)
    )
    return BoxedPointSets(bbox=bbox, ubox=ubox, dims=dims, sides=sides)
