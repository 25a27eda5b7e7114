"""Sense / refine / replan loop over a recorded sensor stream."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .estimation import EstimatorConfig, GlideEstimate, SensorSample, SensorSeries
from .geodesy import GeoPosition, unproject_many
from .metrics import CandidateSet, rank
from .performance import PerformanceModel, refine_baseline
from .planner import (
    DEFAULT_BANKS,
    DEFAULT_SEARCH_STEP_FT,
    AircraftState,
    RunwaySpec,
    generate_all,
)


@dataclass(frozen=True)
class LoopConfig:
    runways: tuple[RunwaySpec, ...]
    banks: tuple[float, ...] = DEFAULT_BANKS
    estimator: EstimatorConfig = field(default_factory=EstimatorConfig)
    replan_threshold: float = 0.05
    search_step: float = DEFAULT_SEARCH_STEP_FT
    workers: int | None = None

    def __post_init__(self):
        if not self.replan_threshold > 0:
            raise ValueError("replan_threshold must be positive")


@dataclass(frozen=True)
class LoopEvent:
    t: float
    kind: str  # "estimate" | "refine" | "replan"
    estimate: GlideEstimate | None = None
    old_g0: float | None = None
    new_g0: float | None = None
    candidates: CandidateSet | None = None


def state_at(series: SensorSeries, i: int) -> AircraftState:
    return AircraftState(
        GeoPosition(float(series.lat[i]), float(series.lon[i]), float(series.true_alt[i])),
        float(series.heading[i]))


def replay(stream: Sequence[SensorSample], initial: PerformanceModel,
           cfg: LoopConfig) -> list[LoopEvent]:
    """Walk ``stream`` once and return the ordered event timeline.

    Every stable window yields an ``estimate`` event.  When the baseline it
    implies departs from the current ``g0`` by more than the relative
    threshold, a ``refine`` event and a ``replan`` at the same time follow.
    After a refine, windows overlapping the refine time cannot refine again.
    """
    series = stream if isinstance(stream, SensorSeries) else SensorSeries(stream)
    events: list[LoopEvent] = []
    if not len(series):
        return events
    model = initial
    stats = series.stability(cfg.estimator)
    last_refine = -np.inf
    for i in np.flatnonzero(stats[0]):
        i = int(i)
        est = series.estimate_at(i, cfg.estimator, stats)
        t = float(series.t[i])
        events.append(LoopEvent(t, "estimate", estimate=est))
        if est.window[0] <= last_refine:
            continue
        g0_new = refine_baseline(est.g_hat, est.bank, est.drag)
        if abs(g0_new - model.g0) / model.g0 <= cfg.replan_threshold:
            continue
        events.append(LoopEvent(t, "refine", estimate=est, old_g0=model.g0, new_g0=g0_new))
        model = model.with_g0(g0_new)
        last_refine = t
        results = generate_all(state_at(series, i), cfg.runways, cfg.banks, model,
                               search_step=cfg.search_step, workers=cfg.workers)
        events.append(LoopEvent(t, "replan", candidates=rank(results)))
    return events


def fly(path, frame, airspeed: float, t0: float = 0.0,
        pressure_offset: float = 0.0) -> list[SensorSample]:
    """Sample a planned glide at 1 Hz as if flown at constant ``airspeed``.

    Ground speed equals airspeed (no wind).  Pressure altitude is true
    altitude minus ``pressure_offset``.  Banks and drag configurations come
    from the segment each sample falls in.
    """
    pts = path.points
    if len(pts) < 2:
        raise ValueError("need at least two trajectory points to fly")
    seg_len = np.hypot(np.diff(pts[:, 0]), np.diff(pts[:, 1]))
    cum = np.concatenate(([0.0], np.cumsum(seg_len)))
    speed_fps = airspeed * 1.68781
    s = np.arange(0.0, cum[-1] + 1e-9, speed_fps)
    x = np.interp(s, cum, pts[:, 0])
    y = np.interp(s, cum, pts[:, 1])
    z = np.interp(s, cum, pts[:, 2])
    # interval j runs from point j to j + 1 and belongs to the segment of point j + 1
    j = np.clip(np.searchsorted(cum, s, side="right") - 1, 0, len(seg_len) - 1)
    heading = np.degrees(np.arctan2(np.diff(pts[:, 0]), np.diff(pts[:, 1])))[j] % 360.0
    seg = path.segment_index[j + 1]
    geo = unproject_many(frame, np.column_stack([x, y, z]))
    out = []
    for k in range(len(s)):
        segment = path.segments[seg[k]]
        out.append(SensorSample(
            t0 + k, GeoPosition(float(geo[k, 0]), float(geo[k, 1]), float(z[k])),
            float(z[k] - pressure_offset), float(z[k]), float(heading[k]), float(airspeed),
            float(segment.bank), segment.drag))
    return out
