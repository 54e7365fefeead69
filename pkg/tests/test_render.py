import math

import numpy as np
import pytest

from gcodediff.grid import BoundingBox, UnitBoxSpec, segment
from gcodediff.hausdorff import DistanceField, compare
from gcodediff.postprocess import (ColorField, Histogram, histogram,
                                   threshold_colorize)
from gcodediff.render import (export_field, export_heatmap, export_histogram,
                              export_xyz, import_xyz, ramp_rgb, write_report)
from gcodediff.sampling import PointCloud


def cloud(*pts):
    return PointCloud.from_points(np.array(pts, dtype=float))


@pytest.fixture
def sets_and_field():
    rng = np.random.default_rng(42)
    a = PointCloud.from_points(rng.uniform(0, 3, (60, 3)))
    b = PointCloud.from_points(rng.uniform(0, 3, (50, 3)))
    sets = segment(a, b, UnitBoxSpec(1, 1, 1))
    return sets, compare(sets)


def test_ramp_endpoints():
    assert ramp_rgb(0.0) == (255, 245, 240)
    assert ramp_rgb(1.0) == (103, 0, 13)


def test_xyz_round_trip(tmp_path):
    pc = cloud((1.123456789, -2, 3e-4), (0, 0, 0))
    path = tmp_path / "cloud.xyz"
    export_xyz(pc, path)
    back = import_xyz(path)
    np.testing.assert_allclose(back.points, pc.points, rtol=1e-8)


def test_heatmap_counts_points_in_colored_cells(tmp_path, sets_and_field):
    sets, field = sets_and_field
    colors = threshold_colorize(field, 90.0)
    path = tmp_path / "heatmap.ply"
    export_heatmap(sets, colors, path)
    lines = path.read_text().splitlines()
    declared = int(next(l for l in lines if l.startswith("element vertex")).split()[-1])
    body = len(lines) - lines.index("end_header") - 1
    assert declared == body
    expected = sum(
        len(sets.cell_points(s, sets.unravel(int(lin))))
        for lin in sets.occupied_cells()
        if not np.isnan(colors.values[lin])
        for s in (0, 1))
    assert declared == expected


def test_heatmap_all_zero_colors_lightest(tmp_path, sets_and_field):
    sets, field = sets_and_field
    colors = ColorField(values=np.where(np.isnan(field.values), np.nan, 0.0),
                        dims=field.dims)
    path = tmp_path / "h.ply"
    export_heatmap(sets, colors, path)
    body = path.read_text().splitlines()
    data = [l for l in body[body.index("end_header") + 1:] if l]
    assert all(l.endswith("255 245 240") for l in data)


def test_heatmap_empty_field(tmp_path):
    a = cloud((0.5, 0.5, 0.5))
    sets = segment(a, a, UnitBoxSpec(1, 1, 1))
    colors = ColorField(values=np.array([np.nan]), dims=sets.dims)
    path = tmp_path / "empty.ply"
    export_heatmap(sets, colors, path)
    text = path.read_text()
    assert "element vertex 0" in text


def test_histogram_csv_format(tmp_path):
    h = Histogram(bins=((0.0, 0.5, 3), (0.5, 1.0, 1)), inf_count=3,
                  min=0.0, max=1.0, mean=0.3, median=0.2, skewness=0.1)
    path = tmp_path / "hist.csv"
    export_histogram(h, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "bin_lower,bin_upper,count"
    assert lines[-1] == "inf,3"


def test_histogram_deterministic(tmp_path, sets_and_field):
    _, field = sets_and_field
    h = histogram(field, 10)
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    export_histogram(h, p1)
    export_histogram(h, p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_field_csv_sentinels(tmp_path):
    values = np.array([0.25, math.nan, math.inf])
    field = DistanceField(values=values, dims=(3, 1, 1), ubox=UnitBoxSpec(1, 1, 1),
                          bbox=BoundingBox(np.zeros(3), np.array([3.0, 1, 1])),
                          sampling_gap=0.2)
    path = tmp_path / "field.csv"
    export_field(field, path)
    lines = path.read_text().splitlines()
    assert lines[1] == "ix,iy,iz,distance"
    assert lines[2] == "0,0,0,0.25"
    assert lines[3] == "1,0,0,none"
    assert lines[4] == "2,0,0,inf"


def test_report_deterministic(tmp_path):
    report = {"b": 1, "a": [1, 2], "params": {"z": 0.1}}
    p1, p2 = tmp_path / "r1.json", tmp_path / "r2.json"
    write_report(report, p1)
    write_report(report, p2)
    assert p1.read_bytes() == p2.read_bytes()
