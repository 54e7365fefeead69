"""Command-line pipeline: reconstruct, compare, check-invariant, gen-fixture."""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import fixtures, gcode, hausdorff, postprocess, render, semantics, transforms
from .errors import (GcodeDiffError, InvalidDims, IoFailure, ParseError,
                     SemanticsError)
from .grid import BoundingBox, UnitBoxSpec, bounding_box, segment
from .sampling import PointCloud, build_point_cloud
from .semantics import SlicingParams
from .transforms import RotationVector

EXIT_OK = 0
EXIT_INVARIANT_VIOLATED = 1
EXIT_USAGE = 2
EXIT_ANALYSIS_ERROR = 3


@dataclass
class RunConfig:
    nozzle_diameter: float = 0.4
    layer_height: float = 0.2
    sampling_gap: float = 0.2
    unit_box: tuple[float, float, float] = (1.0, 1.0, 1.0)
    threshold_percentile: float = 90.0
    rotation: RotationVector = field(default_factory=lambda: RotationVector(0, 0, 0))
    extrusion_mode: str = "auto"
    align: bool = True
    png: bool = False
    dump_cuboids: bool = False
    out_dir: Path = Path(".")
    slicer_cmd: str | None = None

    def __post_init__(self):
        if min(self.nozzle_diameter, self.layer_height, self.sampling_gap) <= 0:
            raise ValueError("d, h and g must be positive")
        if min(self.unit_box) <= 0:
            raise ValueError("unit box dimensions must be positive")
        if not 0 < self.threshold_percentile < 100:
            raise ValueError("threshold percentile must lie in (0, 100)")

    @property
    def slicing(self) -> SlicingParams:
        return SlicingParams(d=self.nozzle_diameter, h=self.layer_height)

    @property
    def ubox(self) -> UnitBoxSpec:
        return UnitBoxSpec(*self.unit_box)

    def params_dict(self) -> dict:
        return {
            "nozzle_diameter": self.nozzle_diameter,
            "layer_height": self.layer_height,
            "sampling_gap": self.sampling_gap,
            "unit_box": list(self.unit_box),
            "threshold_percentile": self.threshold_percentile,
            "rotation": [self.rotation.rx, self.rotation.ry, self.rotation.rz],
            "extrusion_mode": self.extrusion_mode,
            "align": self.align,
        }


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("GLITCH_THREADS", "1")))
    except ValueError:
        return 1


class _Timer:
    def __init__(self):
        self.stages: dict[str, float] = {}

    def time(self, name):
        timer = self

        class _Ctx:
            def __enter__(self):
                self.t0 = time.perf_counter()

            def __exit__(self, *exc):
                timer.stages[name] = timer.stages.get(name, 0.0) + time.perf_counter() - self.t0

        return _Ctx()


def reconstruct_cloud(path, config: RunConfig):
    """Parse, execute and sample one G-code file."""
    options = gcode.ParseOptions(extrusion_mode=config.extrusion_mode,
                                 source_path=str(path))
    program = gcode.parse_file(path, options)
    state = semantics.run(program, config.slicing)
    cloud = build_point_cloud(state.cuboids, config.sampling_gap)
    return program, state, cloud


def _dump_cuboids(state, path) -> None:
    rows = ["line_no," + ",".join(
        f"{name}_{axis}" for name in
        ("b0", "b1", "b2", "b3", "t0", "t1", "t2", "t3") for axis in "xyz")]
    for c in state.cuboids:
        verts = c.vertices.reshape(-1)
        rows.append("%d," % c.line_no + ",".join("%.9g" % v for v in verts))
    render._write_text(path, "\n".join(rows) + "\n")


def _field_stats(fld) -> dict | None:
    nums = fld.num_values()
    if len(nums) == 0:
        return None
    return {
        "min": float(nums.min()),
        "max": float(nums.max()),
        "mean": float(nums.mean()),
        "median": float(np.median(nums)),
        "skewness": postprocess.skewness(nums),
    }


def compare_pipeline(cloud_a: PointCloud, cloud_b: PointCloud, config: RunConfig,
                     bbox: BoundingBox | None = None, timer: _Timer | None = None,
                     labels=("a", "b")):
    """Segment, compare, average and colorize two prepared point clouds."""
    timer = timer or _Timer()
    with timer.time("segment"):
        sets = segment(cloud_a, cloud_b, config.ubox, bbox=bbox)
    with timer.time("compare"):
        raw = hausdorff.compare(sets, sampling_gap=config.sampling_gap, labels=labels)
    with timer.time("average"):
        averaged = postprocess.spatial_average(raw)
    return sets, raw, averaged


def _prepare_second_cloud(cloud_a, cloud_b, config: RunConfig,
                          counter_rotate: RotationVector | None = None):
    """Optionally counter-rotate and min-corner align the second cloud."""
    if counter_rotate is not None and not counter_rotate.is_zero():
        cloud_b = transforms.apply_matrix(
            cloud_b, transforms.inverse_rotation_matrix(counter_rotate))
    elif not config.rotation.is_zero():
        cloud_b = transforms.rotate_point_cloud(cloud_b, config.rotation)
    if config.align and len(cloud_a) and len(cloud_b):
        cloud_b = transforms.align_min_corner(cloud_a, cloud_b)
    return cloud_b


def _emit_comparison_artifacts(out: Path, sets, averaged, config: RunConfig,
                               report_extra: dict, timer: _Timer):
    colors = postprocess.threshold_colorize(averaged, config.threshold_percentile)
    if len(averaged.num_values()):
        hist = postprocess.histogram(averaged, bin_count=50)
    else:
        # every occupied cell is infinite: histogram degenerates to its inf row
        hist = postprocess.Histogram(
            bins=(), inf_count=averaged.counts()["inf"],
            min=0.0, max=0.0, mean=0.0, median=0.0, skewness=0.0)
    with timer.time("render"):
        render.export_field(averaged, out / "field.csv")
        render.export_heatmap(sets, colors, out / "heatmap.ply")
        render.export_histogram(hist, out / "histogram.csv")
        if config.png:
            render.export_png(sets, colors, out / "heatmap.png")
    report = {
        "params": config.params_dict(),
        "grid_dims": list(sets.dims),
        "cell_counts": averaged.counts(),
        "stats": _field_stats(averaged),
        "max_ramp": colors.max_ramp(),
    }
    report.update(report_extra)
    render.write_report(report, out / "report.json")
    render.write_report({"seconds": timer.stages}, out / "timings.json")
    return report, colors


def cmd_reconstruct(args) -> int:
    config = _config_from_args(args)
    out = config.out_dir
    out.mkdir(parents=True, exist_ok=True)
    timer = _Timer()
    with timer.time("reconstruct"):
        program, state, cloud = reconstruct_cloud(args.gcode, config)
    if len(cloud) == 0:
        print("warning: no extruding moves; point cloud is empty", file=sys.stderr)
    render.export_xyz(cloud, out / "cloud.xyz")
    if config.dump_cuboids:
        _dump_cuboids(state, out / "cuboids.csv")
    render.write_report({
        "input": str(args.gcode),
        "params": config.params_dict(),
        "command_count": len(program.commands),
        "cuboid_count": len(state.cuboids),
        "point_count": len(cloud),
    }, out / "report.json")
    render.write_report({"seconds": timer.stages}, out / "timings.json")
    return EXIT_OK


def cmd_compare(args) -> int:
    config = _config_from_args(args)
    out = config.out_dir
    out.mkdir(parents=True, exist_ok=True)
    timer = _Timer()
    with timer.time("reconstruct"):
        _, state_a, cloud_a = reconstruct_cloud(args.gcode_a, config)
        _, state_b, cloud_b = reconstruct_cloud(args.gcode_b, config)
    cloud_b = _prepare_second_cloud(cloud_a, cloud_b, config)
    sets, raw, averaged = compare_pipeline(cloud_a, cloud_b, config, timer=timer,
                                           labels=(str(args.gcode_a), str(args.gcode_b)))
    if config.dump_cuboids:
        _dump_cuboids(state_a, out / "cuboids_a.csv")
        _dump_cuboids(state_b, out / "cuboids_b.csv")
    _emit_comparison_artifacts(out, sets, averaged, config, {
        "inputs": [str(args.gcode_a), str(args.gcode_b)],
        "point_counts": [len(cloud_a), len(cloud_b)],
        "cuboid_counts": [len(state_a.cuboids), len(state_b.cuboids)],
    }, timer)
    return EXIT_OK


def _slice_with_cmd(template: str, model_path: str, v: RotationVector) -> Path:
    """Shell out to an external slicer command template, return gcode path."""
    out_path = Path(tempfile.mkdtemp(prefix="gcodediff_slice_")) / "sliced.gcode"
    cmd = template.format(input=model_path, output=str(out_path),
                          rx=v.rx, ry=v.ry, rz=v.rz)
    result = subprocess.run(cmd, shell=True)
    if result.returncode != 0 or not out_path.exists():
        raise IoFailure(f"slicer command failed: {cmd}")
    return out_path


def cmd_check_invariant(args) -> int:
    config = _config_from_args(args)
    rotated = args.rotated or []
    rotations = [RotationVector.parse(r) for r in (args.rotation_vec or [])]
    if len(rotated) != len(rotations) or not rotated:
        raise InvalidDims("--rotated and --rotation must be given the same "
                          "number of times, at least once")
    out = config.out_dir
    out.mkdir(parents=True, exist_ok=True)
    timer = _Timer()

    with timer.time("reconstruct"):
        _, _, original = reconstruct_cloud(args.original, config)
        counter_rotated = []
        for path, v in zip(rotated, rotations):
            if config.slicer_cmd:
                path = _slice_with_cmd(config.slicer_cmd, path, v)
            _, _, cloud = reconstruct_cloud(path, config)
            counter_rotated.append(_prepare_second_cloud(original, cloud, config,
                                                         counter_rotate=v))

    # one grid for every comparison: union bbox over all participating clouds
    bbox = bounding_box(original, original)
    for cloud in counter_rotated:
        if len(cloud):
            other = bounding_box(cloud, cloud)
            bbox = BoundingBox(min=np.minimum(bbox.min, other.min),
                               max=np.maximum(bbox.max, other.max))

    def one(cloud):
        return compare_pipeline(original, cloud, config, bbox=bbox, timer=timer)

    if _threads() > 1 and len(counter_rotated) > 1:
        with ThreadPoolExecutor(max_workers=_threads()) as pool:
            results = list(pool.map(one, counter_rotated))
    else:
        results = [one(cloud) for cloud in counter_rotated]

    combined = postprocess.combine_fields([averaged for _, _, averaged in results])
    sets = results[0][0]
    report, colors = _emit_comparison_artifacts(out, sets, combined, config, {
        "original": str(args.original),
        "rotated_inputs": [str(p) for p in rotated],
        "rotations": [[v.rx, v.ry, v.rz] for v in rotations],
    }, timer)
    verdict_pass = report["cell_counts"]["inf"] == 0 and colors.max_ramp() < 1.0
    report["verdict"] = "pass" if verdict_pass else "fail"
    render.write_report(report, out / "report.json")
    print(f"invariant check: {report['verdict']}")
    return EXIT_OK if verdict_pass else EXIT_INVARIANT_VIOLATED


def cmd_gen_fixture(args) -> int:
    config = _config_from_args(args)
    dims = tuple(float(x) for x in args.dims.split(","))
    if len(dims) != 3:
        raise InvalidDims("--dims must be sx,sy,sz")
    hole_min = hole_max = None
    if args.hole:
        parts = [float(x) for x in args.hole.split(",")]
        if len(parts) != 6:
            raise InvalidDims("--hole must be minx,miny,minz,maxx,maxy,maxz")
        hole_min, hole_max = tuple(parts[:3]), tuple(parts[3:])
    origin = (0.0, 0.0)
    if args.origin:
        parts = [float(x) for x in args.origin.split(",")]
        if len(parts) != 2:
            raise InvalidDims("--origin must be x,y")
        origin = (parts[0], parts[1])
    spec = fixtures.FixtureSpec(
        kind=args.kind, size_x=dims[0], size_y=dims[1], size_z=dims[2],
        spacing=args.spacing, hole_min=hole_min, hole_max=hole_max,
        fill_axis=args.fill_axis, origin=origin)
    text = fixtures.generate_fixture(spec, d=config.nozzle_diameter,
                                     h=config.layer_height)
    render._write_text(args.output, text)
    return EXIT_OK


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--nozzle-diameter", type=float, default=0.4, metavar="MM")
    p.add_argument("--layer-height", type=float, default=0.2, metavar="MM")
    p.add_argument("--sampling-gap", type=float, default=0.2, metavar="MM")
    p.add_argument("--unit-box", default="1,1,1", metavar="DX,DY,DZ")
    p.add_argument("--threshold-percentile", type=float, default=90.0)
    p.add_argument("--rotate", default="0,0,0", metavar="RX,RY,RZ",
                   help="rotation (degrees) applied to the second input")
    p.add_argument("--extrusion-mode", choices=("auto", "absolute", "relative"),
                   default="auto")
    p.add_argument("--no-align", action="store_true",
                   help="disable min-corner alignment of the second cloud")
    p.add_argument("--png", action="store_true",
                   help="also write a 2D orthographic heatmap projection")
    p.add_argument("--dump-cuboids", action="store_true")
    p.add_argument("--out", default=".", metavar="DIR")
    p.add_argument("--slicer-cmd", default=None, metavar="TEMPLATE",
                   help="external slicer command with {input} {output} {rx} {ry} {rz}")


def _config_from_args(args) -> RunConfig:
    ubox = tuple(float(x) for x in args.unit_box.split(","))
    if len(ubox) != 3:
        raise ValueError("--unit-box must be dx,dy,dz")
    return RunConfig(
        nozzle_diameter=args.nozzle_diameter,
        layer_height=args.layer_height,
        sampling_gap=args.sampling_gap,
        unit_box=ubox,
        threshold_percentile=args.threshold_percentile,
        rotation=RotationVector.parse(args.rotate),
        extrusion_mode=args.extrusion_mode,
        align=not args.no_align,
        png=args.png,
        dump_cuboids=args.dump_cuboids,
        out_dir=Path(args.out),
        slicer_cmd=args.slicer_cmd,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="glitch",
        description="Compare linear-motion G-code programs as point clouds.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reconstruct", help="lift one G-code file to a point cloud")
    p.add_argument("gcode")
    _add_common(p)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("compare", help="compare two G-code files")
    p.add_argument("gcode_a")
    p.add_argument("gcode_b")
    _add_common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("check-invariant",
                       help="check the rotation invariant over pre-sliced inputs")
    p.add_argument("original")
    p.add_argument("--rotated", action="append", metavar="GCODE",
                   help="rotated G-code input (repeatable)")
    p.add_argument("--rotation", action="append", dest="rotation_vec",
                   metavar="RX,RY,RZ",
                   help="rotation that produced the matching --rotated input")
    _add_common(p)
    p.set_defaults(func=cmd_check_invariant)

    p = sub.add_parser("gen-fixture", help="generate a deterministic test part")
    p.add_argument("kind", choices=fixtures.FIXTURE_KINDS)
    p.add_argument("output")
    p.add_argument("--dims", default="10,10,1", metavar="SX,SY,SZ")
    p.add_argument("--spacing", type=float, default=0.8, metavar="MM")
    p.add_argument("--hole", default=None, metavar="X0,Y0,Z0,X1,Y1,Z1")
    p.add_argument("--fill-axis", choices=("x", "y"), default="x")
    p.add_argument("--origin", default=None, metavar="X,Y")
    _add_common(p)
    p.set_defaults(func=cmd_gen_fixture)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (ParseError, SemanticsError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ANALYSIS_ERROR
    except (GcodeDiffError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
