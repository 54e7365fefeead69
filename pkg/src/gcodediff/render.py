"""Writers for comparison artifacts: PLY heatmaps, CSV tables, JSON reports."""

from __future__ import annotations

import json

import numpy as np

from .errors import IoFailure
from .grid import BoxedPointSets
from .hausdorff import DistanceField
from .postprocess import ColorField, Histogram
from .sampling import PointCloud

RAMP_LIGHT = (255, 245, 240)
RAMP_DARK = (103, 0, 13)


def ramp_rgb(position: float) -> tuple[int, int, int]:
    """Light-to-dark single-hue ramp; position in [0, 1]."""
    p = min(max(position, 0.0), 1.0)
    return tuple(
        int(round(lo + p * (hi - lo)))
        for lo, hi in zip(RAMP_LIGHT, RAMP_DARK)
    )


def _write_text(path, text: str) -> None:
    try:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def export_xyz(pc: PointCloud, path) -> None:
    """ASCII XYZ, one 'x y z' per line at 9 significant digits."""
    rows = ["%.9g %.9g %.9g" % tuple(p) for p in pc.points]
    _write_text(path, "\n".join(rows) + ("\n" if rows else ""))


def import_xyz(path) -> PointCloud:
    try:
        pts = np.loadtxt(path, dtype=np.float64, ndmin=2)
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    if pts.size == 0:
        pts = np.empty((0, 3))
    return PointCloud.from_points(pts)


def export_heatmap(sets: BoxedPointSets, colors: ColorField, path) -> None:
    """ASCII PLY of every point in a colored cell, tinted with its cell color.

    Cells without a color (neither cloud present) contribute no points.
    Order is deterministic: ascending cell index, side a before side b.
    """
    if colors.dims != sets.dims:
        raise ValueError("color field does not match the segmentation grid")
    chunks = []
    count = 0
    for lin in sets.occupied_cells():
        c = colors.values[lin]
        if np.isnan(c):
            continue
        r, g, b = ramp_rgb(float(c))
        idx = sets.unravel(int(lin))
        for side in (0, 1):
            for p in sets.cell_points(side, idx):
                chunks.append("%.9g %.9g %.9g %d %d %d" % (p[0], p[1], p[2], r, g, b))
                count += 1
    header = "\n".join([
        "ply",
        "format ascii 1.0",
        f"element vertex {count}",
        "property float x",
        "property float y",
        "property float z",
        "property uchar red",
        "property uchar green",
        "property uchar blue",
        "end_header",
    ])
    body = "\n".join(chunks)
    _write_text(path, header + "\n" + (body + "\n" if body else ""))


def export_histogram(h: Histogram, path) -> None:
    rows = ["bin_lower,bin_upper,count"]
    rows += ["%.9g,%.9g,%d" % b for b in h.bins]
    rows.append("inf,%d" % h.inf_count)
    _write_text(path, "\n".join(rows) + "\n")


def _format_distance(v: float) -> str:
    if np.isnan(v):
        return "none"
    if np.isposinf(v):
        return "inf"
    return "%.12g" % v


def export_field(field: DistanceField, path) -> None:
    """CSV dump of the distance field with grid metadata in the header."""
    nx, ny, nz = field.dims
    gap = "%.9g" % field.sampling_gap if field.sampling_gap is not None else "unknown"
    rows = [
        "# grid=%d,%d,%d ubox=%.9g,%.9g,%.9g bbox_min=%.9g,%.9g,%.9g "
        "bbox_max=%.9g,%.9g,%.9g g=%s" % (
            nx, ny, nz,
            field.ubox.dx, field.ubox.dy, field.ubox.dz,
            *field.bbox.min, *field.bbox.max, gap),
        "ix,iy,iz,distance",
    ]
    for lin, v in enumerate(field.values):
        ix = lin % nx
        iy = (lin // nx) % ny
        iz = lin // (nx * ny)
        rows.append("%d,%d,%d,%s" % (ix, iy, iz, _format_distance(v)))
    _write_text(path, "\n".join(rows) + "\n")


def write_report(report: dict, path) -> None:
    try:
        with open(path, "w", newline="\n") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def export_png(sets: BoxedPointSets, colors: ColorField, path) -> None:
    """Orthographic top view: darkest color over z per XY grid column."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    nx, ny, nz = sets.dims
    vol = colors.values.reshape(nz, ny, nx)
    filled = np.where(np.isnan(vol), -np.inf, vol)
    img = filled.max(axis=0)
    img[np.isneginf(img)] = np.nan
    fig, ax = plt.subplots(figsize=(6, 6 * ny / max(nx, 1)))
    ax.imshow(img, origin="lower", cmap="Reds", vmin=0.0, vmax=1.0)
    ax.set_xlabel("x cell")
    ax.set_ylabel("y cell")
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
