import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gcodediff import gcode
from gcodediff.errors import DegenerateMove, NonPlanarMove
from gcodediff.semantics import (MachineState, SlicingParams, cuboid_from_move,
                                 run, step)

PARAMS = SlicingParams(d=0.4, h=0.2)


def test_axis_aligned_cuboid_vertices():
    c = cuboid_from_move((0, 0, 0.2), (10, 0, 0.2), PARAMS)
    np.testing.assert_allclose(c.bottom, [
        [-0.2, 0.2, 0.0],
        [10.2, 0.2, 0.0],
        [10.2, -0.2, 0.0],
        [-0.2, -0.2, 0.0],
    ], atol=1e-12)
    np.testing.assert_allclose(c.top[:, 2], 0.2, atol=1e-12)


def test_diagonal_cuboid_vertices():
    # move at 45 degrees: corner offsets collapse onto the axes
    k = math.sqrt(2) * 0.2
    c = cuboid_from_move((0, 0, 0.2), (1, 1, 0.2), PARAMS)
    np.testing.assert_allclose(c.bottom, [
        [-k, 0.0, 0.0],
        [1.0, 1.0 + k, 0.0],
        [1.0 + k, 1.0, 0.0],
        [0.0, -k, 0.0],
    ], atol=1e-12)


@given(
    x0=st.floats(-50, 50), y0=st.floats(-50, 50),
    x1=st.floats(-50, 50), y1=st.floats(-50, 50),
)
@settings(max_examples=100)
def test_cuboid_is_a_rectangle_of_forced_dimensions(x0, y0, x1, y1):
    if math.hypot(x1 - x0, y1 - y0) < 1e-6:
        return
    c = cuboid_from_move((x0, y0, 0.2), (x1, y1, 0.2), PARAMS)
    b = c.bottom
    long_side = np.linalg.norm(b[1] - b[0])
    short_side = np.linalg.norm(b[3] - b[0])
    assert long_side == pytest.approx(math.hypot(x1 - x0, y1 - y0) + 0.4, abs=1e-9)
    assert short_side == pytest.approx(0.4, abs=1e-9)
    assert abs(np.dot(b[1] - b[0], b[3] - b[0])) < 1e-9
    # opposite corners agree, so it is a parallelogram, hence a rectangle
    np.testing.assert_allclose(b[0] + (b[1] - b[0]) + (b[3] - b[0]), b[2], atol=1e-9)


def test_top_face_is_bottom_raised_by_h():
    c = cuboid_from_move((3, 4, 1.0), (7, 9, 1.0), PARAMS)
    np.testing.assert_allclose(c.top - c.bottom,
                               np.tile([0.0, 0.0, 0.2], (4, 1)), atol=1e-12)


def test_degenerate_move_rejected():
    with pytest.raises(DegenerateMove):
        cuboid_from_move((1, 1, 0.2), (1, 1, 0.2), PARAMS)


def test_non_planar_extrusion_rejected():
    with pytest.raises(NonPlanarMove):
        cuboid_from_move((0, 0, 0.2), (1, 0, 0.4), PARAMS)


def test_rotation_equivariance_of_cuboid_construction():
    phi = math.radians(37.0)
    rot = np.array([[math.cos(phi), -math.sin(phi), 0],
                    [math.sin(phi), math.cos(phi), 0],
                    [0, 0, 1]])
    p_e, p = np.array([1.0, 2.0, 0.2]), np.array([5.0, -1.0, 0.2])
    direct = cuboid_from_move(rot @ p_e, rot @ p, PARAMS).bottom
    rotated = cuboid_from_move(p_e, p, PARAMS).bottom @ rot.T
    np.testing.assert_allclose(direct, rotated, atol=1e-9)


def mk_cmd(extruding, target, line_no=1):
    return gcode.MotionCommand(extruding=extruding, target=target,
                               extrusion_amount=0.1 if extruding else 0.0,
                               feed_rate=1800, line_no=line_no)


def test_travel_move_only_updates_position():
    state = MachineState(position=(0, 0, 0), cuboids=())
    after = step(state, mk_cmd(False, (5, 5, 0.2)), PARAMS)
    assert after.position == (5, 5, 0.2)
    assert after.cuboids == ()


def test_extruding_move_adds_one_cuboid():
    state = MachineState(position=(0, 0, 0.2), cuboids=())
    after = step(state, mk_cmd(True, (10, 0, 0.2)), PARAMS)
    assert after.position == (10, 0, 0.2)
    assert len(after.cuboids) == 1


def test_travel_may_change_z_freely():
    state = MachineState(position=(0, 0, 0.2), cuboids=())
    after = step(state, mk_cmd(False, (0, 0, 5.0)), PARAMS)
    assert after.position == (0, 0, 5.0)


def test_run_empty_program():
    state = run(gcode.Program(commands=()), PARAMS)
    assert state.position == (0, 0, 0)
    assert state.cuboids == ()


def test_run_travel_only_program():
    prog = gcode.parse_program("G0 X5 Y5 Z0.2\nG0 X9 Y1\n")
    state = run(prog, PARAMS)
    assert state.position == (9, 1, 0.2)
    assert state.cuboids == ()


def test_run_counts_extruding_moves():
    prog = gcode.parse_program(
        "G0 X0 Y0 Z0.2\n"
        "G1 X10 E1\nG0 Y1\nG1 X0 E2\nG1 F900 E1.5\nG1 Y2 E2.5\n")
    state = run(prog, PARAMS)
    extruding = sum(1 for c in prog.commands if c.extruding)
    assert len(state.cuboids) == extruding == 3


def test_run_prefix_monotonicity():
    prog = gcode.parse_program(
        "G0 X0 Y0 Z0.2\nG1 X10 E1\nG0 Y1\nG1 X0 E2\nG1 Y2 E3\n")
    full = run(prog, PARAMS)
    for cut in range(len(prog.commands)):
        prefix = run(gcode.Program(commands=prog.commands[:cut]), PARAMS)
        for got, expect in zip(prefix.cuboids, full.cuboids):
            np.testing.assert_array_equal(got.bottom, expect.bottom)


def test_zero_length_extruding_move_skipped_with_warning(caplog):
    state = MachineState(position=(1, 1, 0.2), cuboids=())
    with caplog.at_level("WARNING"):
        after = step(state, mk_cmd(True, (1, 1, 0.2)), PARAMS)
    assert after.cuboids == ()
    assert "zero-length" in caplog.text
