"""Deterministic G-code fixture generation.

Generates small serpentine-fill test parts (slabs and prisms, optionally
with a rectangular hole) so the pipeline can be exercised without any
external slicer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidDims

# filament cross-section for a conventional 1.75 mm spool
_FILAMENT_AREA = 3.141592653589793 * (1.75 / 2.0) ** 2

FIXTURE_KINDS = ("slab", "slab_with_hole", "prism")


@dataclass(frozen=True)
class FixtureSpec:
    kind: str
    size_x: float
    size_y: float
    size_z: float
    spacing: float                      # distance between fill lines, >= d
    hole_min: tuple[float, float, float] | None = None
    hole_max: tuple[float, float, float] | None = None
    fill_axis: str = "x"                # serpentine lines run along this axis
    origin: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if self.kind not in FIXTURE_KINDS:
            raise InvalidDims(f"unknown fixture kind {self.kind!r}")
        if min(self.size_x, self.size_y, self.size_z) <= 0:
            raise InvalidDims("fixture dimensions must be positive")
        if self.spacing <= 0:
            raise InvalidDims("fill spacing must be positive")
        if self.kind == "slab_with_hole" and (self.hole_min is None or self.hole_max is None):
            raise InvalidDims("slab_with_hole requires a hole box")
        if self.fill_axis not in ("x", "y"):
            raise InvalidDims("fill_axis must be 'x' or 'y'")


def _fmt(v: float) -> str:
    return f"{v:.5f}".rstrip("0").rstrip(".")


def _chunks(run_len: float, spacing: float, forward: bool):
    """Even chunk boundaries covering [0, run_len], in travel order."""
    n = max(1, math.ceil(run_len / spacing - 1e-9))
    edges = [run_len * i / n for i in range(n + 1)]
    pairs = list(zip(edges, edges[1:]))
    if not forward:
        pairs = [(b, a) for a, b in reversed(pairs)]
    return pairs


def generate_fixture(spec: FixtureSpec, d: float, h: float) -> str:
    """Emit absolute-mode serpentine G-code for the fixture, one string."""
    if spec.spacing < d:
        raise InvalidDims("fill spacing must be at least the nozzle diameter")

    along_x = spec.fill_axis == "x"
    run_len = spec.size_x if along_x else spec.size_y
    width = spec.size_y if along_x else spec.size_x
    # fp guards keep 1/0.2 -> 5 layers and 10/0.4 -> 25 gaps stable
    n_layers = max(1, math.ceil(spec.size_z / h - 1e-9))
    n_lines = int(width / spec.spacing + 1e-9) + 1
    e_per_mm = (d * h) / _FILAMENT_AREA
    ox, oy = spec.origin

    hole = None
    if spec.kind == "slab_with_hole":
        hole = (spec.hole_min, spec.hole_max)

    lines = [
        "; generated fixture: " + spec.kind,
        "G90",
        "M82",
        "G0 F9000 X%s Y%s Z%s" % (_fmt(ox), _fmt(oy), _fmt(h)),
    ]
    e_total = 0.0

    for layer in range(n_layers):
        z = h * (layer + 1)
        zs = _fmt(z)
        for line_idx in range(n_lines):
            cross = line_idx * spec.spacing
            forward = line_idx % 2 == 0
            segments = _chunks(run_len, spec.spacing, forward)
            if hole is not None:
                hmin, hmax = hole
                if hmin[2] <= z <= hmax[2]:
                    c_lo, c_hi = (hmin[1], hmax[1]) if along_x else (hmin[0], hmax[0])
                    r_lo, r_hi = (hmin[0], hmax[0]) if along_x else (hmin[1], hmax[1])
                    cross_abs = cross + (oy if along_x else ox)
                    if c_lo <= cross_abs <= c_hi:
                        run_origin = ox if along_x else oy
                        lo, hi = r_lo - run_origin, r_hi - run_origin
                        # drop whole chunks that reach into the hole, so the
                        # emitted moves are a strict subset of the plain part's
                        segments = [
                            (a, b) for a, b in segments
                            if max(a, b) <= lo + 1e-9 or min(a, b) >= hi - 1e-9
                        ]
            at = None
            for seg_start, seg_end in segments:
                if along_x:
                    sx, sy = ox + seg_start, oy + cross
                    ex, ey = ox + seg_end, oy + cross
                else:
                    sx, sy = ox + cross, oy + seg_start
                    ex, ey = ox + cross, oy + seg_end
                if at != (sx, sy):
                    lines.append("G0 F9000 X%s Y%s Z%s" % (_fmt(sx), _fmt(sy), zs))
                e_total += abs(seg_end - seg_start) * e_per_mm
                lines.append("G1 F1800 X%s Y%s E%.6f" % (_fmt(ex), _fmt(ey), e_total))
                at = (ex, ey)
    lines.append("")
    return "\n".join(lines)
