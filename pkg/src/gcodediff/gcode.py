"""Frontend for the linear-motion subset of G-code.

Parses G0/G1 moves, resolves modal arguments to absolute coordinates and
per-move extrusion amounts, and classifies which moves deposit material.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .errors import MalformedArgument, UnsupportedMotion

MOTION_LETTERS = frozenset("XYZEF")

_COMMENT_PAREN = re.compile(r"\([^)]*\)")

# kinds the frontend understands; everything else is "other" and skipped
_KNOWN_KINDS = {"G0", "G1", "G90", "G91", "M82", "M83"}


@dataclass(frozen=True)
class RawCommand:
    kind: str                      # G0, G1, G90, G91, M82, M83 or "other"
    args: dict[str, float]
    line_no: int


@dataclass(frozen=True)
class MotionCommand:
    extruding: bool
    target: tuple[float, float, float]   # absolute, mm
    extrusion_amount: float              # mm of filament, signed
    feed_rate: float                     # mm/min
    line_no: int


@dataclass(frozen=True)
class Program:
    commands: tuple[MotionCommand, ...]
    source_path: str = "<string>"


@dataclass(frozen=True)
class ParseOptions:
    extrusion_mode: str = "auto"    # auto | absolute | relative
    source_path: str = "<string>"

    def __post_init__(self):
        if self.extrusion_mode not in ("auto", "absolute", "relative"):
            raise ValueError(f"bad extrusion_mode {self.extrusion_mode!r}")


def _strip_comments(line: str) -> str:
    line = line.split(";", 1)[0]
    return _COMMENT_PAREN.sub(" ", line)


def tokenize(text: str) -> list[RawCommand]:
    """Split source text into raw commands with per-word float arguments."""
    raw = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        words = _strip_comments(line).upper().split()
        if not words:
            continue
        head = words[0]
        if head in ("G2", "G3", "G02", "G03"):
            raise UnsupportedMotion(f"arc move {head} is not supported", line_no)
        if head in ("G00", "G01"):
            head = "G" + head[-1]
        kind = head if head in _KNOWN_KINDS else "other"
        args: dict[str, float] = {}
        if kind in ("G0", "G1"):
            for word in words[1:]:
                letter, value = word[0], word[1:]
                if letter not in MOTION_LETTERS:
                    raise MalformedArgument(f"unknown argument letter {letter!r}", line_no)
                try:
                    args[letter] = float(value)
                except ValueError:
                    raise MalformedArgument(f"bad numeric value {word!r}", line_no) from None
        raw.append(RawCommand(kind=kind, args=args, line_no=line_no))
    return raw


def detect_extrusion_mode(raw: list[RawCommand]) -> str:
    """Return "relative" or "absolute" from the M82/M83 toggles.

    The last toggle seen before the first E-carrying move wins; with no
    toggle at all the firmware default is absolute.
    """
    mode = "absolute"
    for cmd in raw:
        if cmd.kind == "M82":
            mode = "absolute"
        elif cmd.kind == "M83":
            mode = "relative"
        elif cmd.kind in ("G0", "G1") and "E" in cmd.args:
            break
    return mode


def resolve(raw: list[RawCommand], options: ParseOptions = ParseOptions()) -> Program:
    """Apply modal state to raw commands, yielding absolute motion commands."""
    mode_locked = options.extrusion_mode != "auto"
    if mode_locked:
        e_relative = options.extrusion_mode == "relative"
    else:
        e_relative = detect_extrusion_mode(raw) == "relative"

    pos = (0.0, 0.0, 0.0)
    e_value = 0.0
    feed = 0.0
    positioning_relative = False
    commands = []

    for cmd in raw:
        if cmd.kind == "G90":
            positioning_relative = False
            continue
        if cmd.kind == "G91":
            positioning_relative = True
            continue
        if cmd.kind == "M82":
            if not mode_locked:
                e_relative = False
            continue
        if cmd.kind == "M83":
            if not mode_locked:
                e_relative = True
            continue
        if cmd.kind not in ("G0", "G1"):
            continue

        args = cmd.args
        if positioning_relative:
            target = (
                pos[0] + args.get("X", 0.0),
                pos[1] + args.get("Y", 0.0),
                pos[2] + args.get("Z", 0.0),
            )
        else:
            target = (
                args.get("X", pos[0]),
                args.get("Y", pos[1]),
                args.get("Z", pos[2]),
            )
        feed = args.get("F", feed)

        if e_relative:
            amount = args.get("E", 0.0)
        else:
            new_e = args.get("E", e_value)
            amount = new_e - e_value
            e_value = new_e

        xy_disp = math.hypot(target[0] - pos[0], target[1] - pos[1])
        extruding = cmd.kind == "G1" and amount > 0.0 and xy_disp > 0.0

        commands.append(MotionCommand(
            extruding=extruding,
            target=target,
            extrusion_amount=amount,
            feed_rate=feed,
            line_no=cmd.line_no,
        ))
        pos = target

    return Program(commands=tuple(commands), source_path=options.source_path)


def parse_program(text: str, options: ParseOptions = ParseOptions()) -> Program:
    """Parse G-code source text into a fully resolved Program."""
    return resolve(tokenize(text), options)


def parse_file(path, options: ParseOptions | None = None) -> Program:
    with open(path, "r", errors="replace") as fh:
        text = fh.read()
    if options is None:
        options = ParseOptions(source_path=str(path))
    return parse_program(text, options)
