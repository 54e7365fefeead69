import numpy as np
import pytest

from gcodediff import gcode, semantics
from gcodediff.errors import InvalidDims
from gcodediff.fixtures import FixtureSpec, generate_fixture

PARAMS = semantics.SlicingParams(d=0.4, h=0.2)


def run_fixture(spec):
    text = generate_fixture(spec, d=0.4, h=0.2)
    return semantics.run(gcode.parse_program(text), PARAMS)


def test_slab_layer_count():
    spec = FixtureSpec(kind="slab", size_x=10, size_y=10, size_z=1, spacing=0.8)
    text = generate_fixture(spec, d=0.4, h=0.2)
    zs = {c.bottom[0][2] for c in run_fixture(spec).cuboids}
    assert len(zs) == 5  # ceil(1 / 0.2) layers
    assert text == generate_fixture(spec, d=0.4, h=0.2)  # deterministic


def test_fill_line_count_per_layer():
    spec = FixtureSpec(kind="slab", size_x=10, size_y=10, size_z=0.2, spacing=0.4)
    state = run_fixture(spec)
    ys = {round(c.bottom[:, 1].min(), 6) for c in state.cuboids}
    assert len(ys) == 26  # floor(10 / 0.4) + 1 serpentine lines
    # each line is emitted as ceil(10 / 0.4) = 25 spacing-length chunks
    assert len(state.cuboids) == 26 * 25


def test_hole_removes_moves():
    plain = FixtureSpec(kind="slab", size_x=10, size_y=10, size_z=1, spacing=0.8)
    holed = FixtureSpec(kind="slab_with_hole", size_x=10, size_y=10, size_z=1,
                        spacing=0.8, hole_min=(3, 3, 0), hole_max=(7, 7, 2))
    assert len(run_fixture(holed).cuboids) < len(run_fixture(plain).cuboids)


def test_hole_region_has_no_material():
    spec = FixtureSpec(kind="slab_with_hole", size_x=10, size_y=10, size_z=1,
                       spacing=0.8, hole_min=(3, 3, 0), hole_max=(7, 7, 2))
    for c in run_fixture(spec).cuboids:
        xs = c.bottom[:, 0]
        ys = c.bottom[:, 1]
        inside_y = 3 <= ys.min() and ys.max() <= 7
        if inside_y:
            # fill segments crossing the hole band must stop at its x-extent
            assert xs.max() <= 3 + 0.2 + 1e-9 or xs.min() >= 7 - 0.2 - 1e-9


def test_fill_axis_y_runs_along_y():
    spec = FixtureSpec(kind="prism", size_x=4, size_y=8, size_z=0.2,
                       spacing=0.8, fill_axis="y")
    state = run_fixture(spec)
    c = state.cuboids[0]
    spans = c.bottom.max(axis=0) - c.bottom.min(axis=0)
    assert spans[1] > spans[0]


def test_origin_offsets_geometry():
    base = FixtureSpec(kind="slab", size_x=4, size_y=4, size_z=0.2, spacing=0.8)
    moved = FixtureSpec(kind="slab", size_x=4, size_y=4, size_z=0.2, spacing=0.8,
                        origin=(10.0, 5.0))
    b = run_fixture(base).cuboids[0].bottom
    m = run_fixture(moved).cuboids[0].bottom
    np.testing.assert_allclose((m - b)[:, :2], [[10.0, 5.0]] * 4, atol=1e-9)


def test_spacing_below_nozzle_rejected():
    spec = FixtureSpec(kind="slab", size_x=4, size_y=4, size_z=0.2, spacing=0.2)
    with pytest.raises(InvalidDims):
        generate_fixture(spec, d=0.4, h=0.2)


def test_bad_kind_and_dims_rejected():
    with pytest.raises(InvalidDims):
        FixtureSpec(kind="sphere", size_x=1, size_y=1, size_z=1, spacing=0.8)
    with pytest.raises(InvalidDims):
        FixtureSpec(kind="slab", size_x=-1, size_y=1, size_z=1, spacing=0.8)
    with pytest.raises(InvalidDims):
        FixtureSpec(kind="slab_with_hole", size_x=1, size_y=1, size_z=1,
                    spacing=0.8)
