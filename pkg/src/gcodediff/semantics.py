"""Motion semantics: fold a Program into the cuboid set it deposits.

Every extruding move denotes one rectangular cuboid of width equal to the
nozzle diameter and height equal to the layer height, aligned with the move
direction. Travel moves only reposition the nozzle.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateMove, NonPlanarMove
from .gcode import MotionCommand, Program

log = logging.getLogger(__name__)

_PLANAR_TOL = 1e-9


@dataclass(frozen=True)
class SlicingParams:
    d: float    # nozzle diameter, mm
    h: float    # layer height, mm

    def __post_init__(self):
        if self.d <= 0 or self.h <= 0:
            raise ValueError("nozzle diameter and layer height must be positive")


@dataclass(frozen=True, eq=False)
class Cuboid:
    """One extruded line segment, stored as its bottom quad plus height.

    Bottom vertices are ordered rear-left, front-left, front-right,
    rear-right relative to the move direction, so ``bottom[1] - bottom[0]``
    spans the length axis and ``bottom[3] - bottom[0]`` the width axis.
    """

    bottom: np.ndarray          # (4, 3) float64
    height: float
    length: float               # |move| + d
    breadth: float              # d
    line_no: int = -1

    @property
    def top(self) -> np.ndarray:
        return self.bottom + np.array([0.0, 0.0, self.height])

    @property
    def vertices(self) -> np.ndarray:
        return np.vstack([self.bottom, self.top])


@dataclass(frozen=True)
class MachineState:
    position: tuple[float, float, float]
    cuboids: tuple[Cuboid, ...]


def cuboid_from_move(p_e, p, params: SlicingParams, line_no: int = -1) -> Cuboid:
    """Build the cuboid deposited by an extruding move from p_e to p.

    The quad corners sit at distance k = sqrt(2) * d/2 from the endpoints,
    at 45 degrees off the move direction, which widens the segment by d/2
    on every side. The cuboid occupies z in [p.z - h, p.z]: material ends
    up below the nozzle tip.
    """
    dx = p[0] - p_e[0]
    dy = p[1] - p_e[1]
    if math.hypot(dx, dy) == 0.0:
        raise DegenerateMove("extruding move with zero XY displacement", line_no)
    if abs(p[2] - p_e[2]) > _PLANAR_TOL:
        raise NonPlanarMove(
            f"extruding move changes z by {p[2] - p_e[2]:g}", line_no)

    d, h = params.d, params.h
    k = math.sqrt(2.0) * (d / 2.0)
    theta = math.atan2(dy, dx)
    z = p[2] - h
    q = math.pi / 4.0
    bottom = np.array([
        [p_e[0] - k * math.cos(-theta + q), p_e[1] + k * math.sin(-theta + q), z],
        [p[0] + k * math.cos(theta + q),    p[1] + k * math.sin(theta + q),    z],
        [p[0] + k * math.cos(-theta + q),   p[1] - k * math.sin(-theta + q),   z],
        [p_e[0] - k * math.cos(theta + q),  p_e[1] - k * math.sin(theta + q),  z],
    ])
    return Cuboid(
        bottom=bottom,
        height=h,
        length=math.hypot(dx, dy) + d,
        breadth=d,
        line_no=line_no,
    )


def step(state: MachineState, cmd: MotionCommand, params: SlicingParams) -> MachineState:
    """Execute one motion command: always move, deposit iff extruding."""
    if not cmd.extruding:
        return MachineState(position=cmd.target, cuboids=state.cuboids)
    p_e = state.position
    dx = cmd.target[0] - p_e[0]
    dy = cmd.target[1] - p_e[1]
    if math.hypot(dx, dy) == 0.0:
        # slicers occasionally emit these; skip rather than abort the run
        log.warning("line %d: skipping zero-length extruding move", cmd.line_no)
        return MachineState(position=cmd.target, cuboids=state.cuboids)
    cuboid = cuboid_from_move(p_e, cmd.target, params, line_no=cmd.line_no)
    return MachineState(position=cmd.target, cuboids=state.cuboids + (cuboid,))


def run(program: Program, params: SlicingParams) -> MachineState:
    """Fold step over all commands starting at the origin with no material."""
    position = (0.0, 0.0, 0.0)
    cuboids: list[Cuboid] = []
    for cmd in program.commands:
        if not cmd.extruding:
            position = cmd.target
            continue
        dx = cmd.target[0] - position[0]
        dy = cmd.target[1] - position[1]
        if math.hypot(dx, dy) == 0.0:
            log.warning("line %d: skipping zero-length extruding move", cmd.line_no)
            position = cmd.target
            continue
        cuboids.append(cuboid_from_move(position, cmd.target, params, line_no=cmd.line_no))
        position = cmd.target
    return MachineState(position=position, cuboids=tuple(cuboids))
