"""Field-level post-processing: averaging, combining, colorizing, histograms."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import GridMismatch, NoNumericCells
from .grid import neighborhood
from .hausdorff import DistanceField


@dataclass(eq=False)
class ColorField:
    """Per-cell ramp position in [0, 1]; NaN marks cells with no color."""

    values: np.ndarray
    dims: tuple[int, int, int]

    def max_ramp(self) -> float:
        finite = self.values[~np.isnan(self.values)]
        return float(finite.max()) if len(finite) else 0.0


@dataclass(frozen=True)
class Histogram:
    bins: tuple[tuple[float, float, int], ...]
    inf_count: int
    min: float
    max: float
    mean: float
    median: float
    skewness: float


def spatial_average(field: DistanceField) -> DistanceField:
    """Replace each numeric cell by the mean over its numeric neighbors.

    None and infinity cells pass through untouched; the mean is taken only
    over neighborhood cells (self included) that carry a numeric value.
    """
    nx, ny, nz = field.dims
    old = field.values
    new = old.copy()
    numeric = np.isfinite(old)
    for lin in np.nonzero(numeric)[0]:
        ix = lin % nx
        iy = (lin // nx) % ny
        iz = lin // (nx * ny)
        total = 0.0
        count = 0
        for jx, jy, jz in neighborhood((ix, iy, iz), field.dims):
            j = jx + nx * (jy + ny * jz)
            if numeric[j]:
                total += old[j]
                count += 1
        new[lin] = total / count
    return replace(field, values=new)


def combine_fields(fields: list[DistanceField]) -> DistanceField:
    """Per-cell average across runs: any infinity dominates, none is skipped."""
    if not fields:
        raise GridMismatch("no fields to combine")
    first = fields[0]
    for f in fields[1:]:
        if not first.same_grid(f):
            raise GridMismatch("fields were built over different grids")
    stack = np.vstack([f.values for f in fields])
    finite = np.isfinite(stack)
    counts = finite.sum(axis=0)
    sums = np.where(finite, stack, 0.0).sum(axis=0)
    out = np.full(stack.shape[1], np.nan)
    has_num = counts > 0
    out[has_num] = sums[has_num] / counts[has_num]
    out[np.isposinf(stack).any(axis=0)] = np.inf
    return replace(first, values=out)


def nearest_rank_percentile(values: np.ndarray, percentile: float) -> float:
    """Nearest-rank percentile: value at rank ceil(p/100 * N), 1-based."""
    if len(values) == 0:
        raise NoNumericCells("percentile of an empty value set")
    ordered = np.sort(values)
    rank = int(np.ceil(percentile / 100.0 * len(ordered)))
    rank = min(max(rank, 1), len(ordered))
    return float(ordered[rank - 1])


def threshold_colorize(field: DistanceField, percentile: float) -> ColorField:
    """Map distances to ramp positions, treating sub-threshold cells as clean.

    Numeric cells below the nearest-rank percentile threshold get 0; cells
    at or above it are normalized linearly over [threshold, max]; infinity
    cells always get the darkest position 1.
    """
    if not 0 < percentile < 100:
        raise ValueError("percentile must lie in (0, 100)")
    nums = field.num_values()
    if len(nums) == 0 and not np.isposinf(field.values).any():
        raise NoNumericCells("field has no numeric or infinite cells to colorize")
    colors = np.full(len(field.values), np.nan)
    if len(nums):
        t = nearest_rank_percentile(nums, percentile)
        v_max = float(nums.max())
        numeric = np.isfinite(field.values)
        vals = field.values[numeric]
        if v_max > t:
            ramp = np.where(vals < t, 0.0, (vals - t) / (v_max - t))
        else:
            # every value ties the threshold: nothing exceeds it
            ramp = np.zeros(len(vals))
        colors[numeric] = ramp
    colors[np.isposinf(field.values)] = 1.0
    return ColorField(values=colors, dims=field.dims)


def skewness(values: np.ndarray) -> float:
    """Standardized third moment; 0 for degenerate (constant) samples."""
    if len(values) == 0:
        return 0.0
    centered = values - values.mean()
    m2 = np.mean(centered ** 2)
    if m2 == 0.0:
        return 0.0
    return float(np.mean(centered ** 3) / m2 ** 1.5)


def histogram(field: DistanceField, bin_count: int) -> Histogram:
    """Uniform-bin histogram over numeric cells; infinities tallied apart."""
    if bin_count < 1:
        raise ValueError("bin_count must be >= 1")
    nums = field.num_values()
    if len(nums) == 0:
        raise NoNumericCells("field has no numeric cells")
    lo, hi = float(nums.min()), float(nums.max())
    edges = np.linspace(lo, hi, bin_count + 1)
    if np.any(edges[:-1] >= edges[1:]):
        # degenerate range (constant up to fp): collapse to a single bin
        counts, edges = np.array([len(nums)]), np.array([lo, hi])
    else:
        counts, edges = np.histogram(nums, bins=edges)
    bins = tuple(
        (float(edges[i]), float(edges[i + 1]), int(counts[i]))
        for i in range(len(counts))
    )
    return Histogram(
        bins=bins,
        inf_count=int(np.isposinf(field.values).sum()),
        min=lo,
        max=hi,
        mean=float(nums.mean()),
        median=float(np.median(nums)),
        skewness=skewness(nums),
    )
