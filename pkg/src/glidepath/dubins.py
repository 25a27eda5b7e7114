"""Dubins CSC paths lifted to constant-ratio gliding descents.

Frame convention: x east, y north, headings in degrees clockwise from north.
A right turn (``"R"``) increases heading.  Only the four CSC words are
generated; CCC words are not attempted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence, Union

import numpy as np

from . import kernels
from .performance import CLEAN, DragConfig, PerformanceModel, glide_ratio

WORDS = ("RSR", "RSL", "LSL", "LSR")
MIN_ARC_DEG = 1e-6
DEFAULT_STEP_FT = 100.0


class NoCscPath(ValueError):
    """None of the four CSC words connects the two configurations."""


def _wrap360(h: float) -> float:
    h = h % 360.0
    return 0.0 if h >= 360.0 else h


def heading_diff(a: float, b: float) -> float:
    """Smallest signed difference ``a - b`` in degrees, in (-180, 180]."""
    d = (a - b) % 360.0
    return d - 360.0 if d > 180.0 else d


@dataclass(frozen=True)
class Configuration2D:
    x: float
    y: float
    heading: float

    def __post_init__(self):
        object.__setattr__(self, "heading", _wrap360(float(self.heading)))


def _sign(direction: str) -> float:
    if direction == "R":
        return 1.0
    if direction == "L":
        return -1.0
    raise ValueError(f"turn direction must be 'L' or 'R', got {direction!r}")


def _arc_poses(start: Configuration2D, radius: float, direction: str, s: np.ndarray):
    sg = _sign(direction)
    h0 = math.radians(start.heading)
    cx = start.x + sg * radius * math.cos(h0)
    cy = start.y - sg * radius * math.sin(h0)
    h = h0 + sg * s / radius
    x = cx - sg * radius * np.cos(h)
    y = cy + sg * radius * np.sin(h)
    return x, y, np.degrees(h) % 360.0


def _line_poses(start: Configuration2D, s: np.ndarray):
    h = math.radians(start.heading)
    return start.x + s * math.sin(h), start.y + s * math.cos(h), np.full_like(s, start.heading)


class _SegmentOps:
    """Shared pose helpers; subclasses define ``length`` and ``_poses``."""

    def poses(self, s):
        s = np.atleast_1d(np.asarray(s, dtype=np.float64))
        return self._poses(s)

    @property
    def end(self) -> Configuration2D:
        x, y, h = self.poses(self.length)
        return Configuration2D(float(x[0]), float(y[0]), float(h[0]))


@dataclass(frozen=True)
class Turn(_SegmentOps):
    start: Configuration2D
    radius: float
    direction: str
    arc: float
    bank: float | None = None
    drag: DragConfig | None = None
    kind = "turn"

    @property
    def length(self) -> float:
        return self.radius * math.radians(self.arc)

    @property
    def center(self) -> tuple[float, float]:
        sg = _sign(self.direction)
        h0 = math.radians(self.start.heading)
        return (self.start.x + sg * self.radius * math.cos(h0),
                self.start.y - sg * self.radius * math.sin(h0))

    def _poses(self, s):
        return _arc_poses(self.start, self.radius, self.direction, s)

    @property
    def end(self) -> Configuration2D:
        x, y, _ = self.poses(self.length)
        return Configuration2D(float(x[0]), float(y[0]),
                               self.start.heading + _sign(self.direction) * self.arc)


@dataclass(frozen=True)
class Straight(_SegmentOps):
    start: Configuration2D
    length: float
    bank: float | None = 0.0
    drag: DragConfig | None = None
    kind = "straight"

    def _poses(self, s):
        return _line_poses(self.start, s)


@dataclass(frozen=True)
class Spiral(_SegmentOps):
    """``turns`` full circles flown from and back to ``start``."""

    start: Configuration2D
    radius: float
    direction: str
    turns: int
    bank: float | None = None
    drag: DragConfig | None = None
    kind = "spiral"

    def __post_init__(self):
        if self.turns < 1:
            raise ValueError("a spiral needs at least one turn")

    @property
    def length(self) -> float:
        return self.turns * 2.0 * math.pi * self.radius

    @property
    def center(self) -> tuple[float, float]:
        return Turn(self.start, self.radius, self.direction, 360.0).center

    def _poses(self, s):
        return _arc_poses(self.start, self.radius, self.direction, s)

    @property
    def end(self) -> Configuration2D:
        return self.start


@dataclass(frozen=True)
class ExtendedFinal(_SegmentOps):
    """Straight final approach flown in the given drag configuration."""

    start: Configuration2D
    length: float
    bank: float | None = 0.0
    drag: DragConfig | None = None
    kind = "extended_final"

    def __post_init__(self):
        if self.length < 0:
            raise ValueError("extended final length must be non-negative")

    def _poses(self, s):
        return _line_poses(self.start, s)


Segment = Union[Turn, Straight, Spiral, ExtendedFinal]


@dataclass(frozen=True)
class CscSolution:
    word: str
    first_arc: float
    straight: float
    second_arc: float
    radius: float

    @property
    def turn_length(self) -> float:
        return self.radius * math.radians(self.first_arc + self.second_arc)

    @property
    def length(self) -> float:
        return self.turn_length + self.straight

    @property
    def last_direction(self) -> str:
        if self.second_arc >= MIN_ARC_DEG or self.first_arc < MIN_ARC_DEG:
            return self.word[2]
        return self.word[0]


def solve_csc(start: Configuration2D, goal: Configuration2D, radius: float) -> CscSolution:
    """Shortest feasible CSC word without building segment objects."""
    if not radius > 0:
        raise ValueError("turn radius must be positive")
    comp = kernels.csc_components(start.x, start.y, start.heading,
                                  goal.x, goal.y, goal.heading, radius)[0]
    lengths = radius * np.radians(comp[:, 0] + comp[:, 2]) + comp[:, 1]
    feasible = ~np.isnan(lengths)
    if not feasible.any():
        raise NoCscPath(f"no CSC path from {start} to {goal} at radius {radius:.1f} ft")
    best = np.min(lengths[feasible])
    # canonical order breaks ties
    w = int(np.flatnonzero(feasible & (lengths <= best * (1 + 1e-12) + 1e-9))[0])
    a1, s, a2 = (float(v) for v in comp[w])
    return CscSolution(WORDS[w], a1, s, a2, float(radius))


def csc_segments(start: Configuration2D, sol: CscSolution) -> list[Segment]:
    segs: list[Segment] = []
    here = start
    if sol.first_arc >= MIN_ARC_DEG:
        t = Turn(here, sol.radius, sol.word[0], sol.first_arc)
        segs.append(t)
        here = t.end
    if sol.straight > 0:
        line = Straight(here, sol.straight)
        segs.append(line)
        here = line.end
    if sol.second_arc >= MIN_ARC_DEG:
        segs.append(Turn(here, sol.radius, sol.word[2], sol.second_arc))
    return segs


def shortest_csc(start: Configuration2D, goal: Configuration2D,
                 radius: float) -> tuple[str, list[Segment]]:
    """Shortest of RSR, RSL, LSL, LSR as a (word, segments) pair.

    Zero-length arcs are omitted from the segment list.  Raises
    :class:`NoCscPath` if every word is infeasible.
    """
    sol = solve_csc(start, goal, radius)
    return sol.word, csc_segments(start, sol)


def make_spirals(at: Configuration2D, radius: float, direction: str, turns: int) -> Spiral:
    return Spiral(at, radius, direction, int(turns))


@dataclass(frozen=True)
class GlidePath:
    """A descending trajectory: resolved segments plus its discretised polyline.

    ``points`` is ``(N, 3)`` x/y/z in feet; ``banks`` and ``segment_index``
    annotate each point with the bank flown and the segment it belongs to.
    """

    segments: tuple
    ratios: tuple
    start_alt: float
    end_alt: float
    points: np.ndarray
    banks: np.ndarray
    segment_index: np.ndarray

    def __len__(self):
        return len(self.points)

    @property
    def horizontal_length(self) -> float:
        return float(sum(s.length for s in self.segments))

    @property
    def turn_count(self) -> int:
        n = 0
        for s in self.segments:
            if isinstance(s, Turn):
                n += 1
            elif isinstance(s, Spiral):
                n += s.turns
        return n

    @property
    def extended_final(self) -> float:
        return float(sum(s.length for s in self.segments if isinstance(s, ExtendedFinal)))

    @property
    def spiral_turns(self) -> int:
        return sum(s.turns for s in self.segments if isinstance(s, Spiral))

    def point_kinds(self) -> list[str]:
        kinds = [s.kind for s in self.segments]
        return [kinds[i] if kinds else "none" for i in self.segment_index]


def _resolve(seg: Segment, bank: float, drag: DragConfig) -> Segment:
    if isinstance(seg, (Turn, Spiral)):
        return replace(seg, bank=bank if seg.bank is None else seg.bank,
                       drag=seg.drag or drag)
    return replace(seg, bank=0.0, drag=seg.drag or drag)


def lift_to_glide(segments: Sequence[Segment], model: PerformanceModel, bank: float,
                  drag: DragConfig = CLEAN, start_alt: float = 0.0,
                  step: float = DEFAULT_STEP_FT,
                  origin: Configuration2D | None = None) -> GlidePath:
    """Descend along ``segments`` from ``start_alt``.

    Turns and spirals without an explicit bank are flown at ``bank``;
    straight segments are always wings level.  Segments without an explicit
    drag configuration use ``drag``.  Each segment loses altitude at its own
    glide ratio.  ``origin`` supplies the single polyline point for an empty
    segment list.
    """
    if not step > 0:
        raise ValueError("discretisation step must be positive")
    resolved = tuple(_resolve(s, bank, drag) for s in segments)
    ratios = tuple(glide_ratio(model, s.bank, s.drag) for s in resolved)

    xs, ys, zs, bs, idx = [], [], [], [], []
    alt = float(start_alt)
    if resolved:
        p0 = resolved[0].start
    else:
        p0 = origin
    if p0 is not None:
        xs.append(np.array([p0.x]))
        ys.append(np.array([p0.y]))
        zs.append(np.array([alt]))
        bs.append(np.array([resolved[0].bank if resolved else 0.0]))
        idx.append(np.array([0]))
    loss_total = 0.0
    for k, (seg, g) in enumerate(zip(resolved, ratios)):
        length = seg.length
        if length <= 0:
            continue
        n = max(1, math.ceil(length / step - 1e-9))
        s = np.linspace(0.0, length, n + 1)[1:]
        x, y, _ = seg.poses(s)
        xs.append(x)
        ys.append(y)
        zs.append(alt - s / g)
        bs.append(np.full(n, seg.bank, dtype=np.float64))
        idx.append(np.full(n, k))
        loss = length / g
        loss_total += loss
        alt = float(start_alt) - loss_total

    if xs:
        pts = np.column_stack([np.concatenate(xs), np.concatenate(ys), np.concatenate(zs)])
        banks = np.concatenate(bs)
        index = np.concatenate(idx).astype(np.int64)
    else:
        pts = np.empty((0, 3))
        banks = np.empty(0)
        index = np.empty(0, dtype=np.int64)
    return GlidePath(resolved, ratios, float(start_alt), float(start_alt) - loss_total,
                     pts, banks, index)
