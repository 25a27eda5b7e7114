"""Safety metrics, normalisation and utility ranking of candidate trajectories."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .dubins import GlidePath
from .geodesy import LocalFrame, project
from .planner import PlanResult, RunwaySpec

HEIGHT_FLOOR_FT = 50.0

# (attribute, maximise?) in utility order
METRIC_SENSES = (
    ("avg_altitude", True),
    ("avg_distance", False),
    ("avg_bank_over_height", False),
    ("turns", False),
    ("length", False),
    ("extended_final", True),
)
METRIC_NAMES = tuple(name for name, _ in METRIC_SENSES)


@dataclass(frozen=True)
class RawMetrics:
    avg_altitude: float
    avg_distance: float
    avg_bank_over_height: float
    turns: int
    length: float
    extended_final: float

    def as_tuple(self):
        return tuple(getattr(self, n) for n in METRIC_NAMES)


@dataclass(frozen=True)
class SafetyReport:
    runway_id: str
    bank: float
    raw: RawMetrics
    normalized: dict
    utility: float
    rank: int


@dataclass(frozen=True)
class CandidateSet:
    entries: tuple  # of (PlanResult, SafetyReport), best first

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def reports(self) -> list[SafetyReport]:
        return [r for _, r in self.entries]


def compute_raw(t: GlidePath, runway: RunwaySpec, frame: LocalFrame | None = None,
                height_floor: float = HEIGHT_FLOOR_FT) -> RawMetrics:
    """The six raw metrics of a discretised trajectory.

    ``t`` is expressed in ``frame`` (default: the runway's own threshold
    frame).  Bank-over-height divides by height above the field, floored at
    ``height_floor`` feet.
    """
    if len(t) == 0:
        raise ValueError("cannot score an empty trajectory")
    frame = frame or runway.frame
    r = project(frame, runway.threshold)
    pts = t.points
    zbar, dbar, boh, length = kernels.trajectory_sums(
        pts[:, 0], pts[:, 1], pts[:, 2], t.banks, (r.x, r.y, runway.elevation),
        runway.elevation, height_floor)
    return RawMetrics(zbar, dbar, boh, t.turn_count, length, t.extended_final)


def normalize(values: Sequence[float], maximize: bool) -> list[float]:
    """Min-max scale so the best value maps to 1; an all-equal list maps to 1s."""
    x = np.asarray(values, dtype=np.float64)
    if x.size == 0:
        raise ValueError("nothing to normalise")
    lo, hi = x.min(), x.max()
    if hi == lo:
        return [1.0] * x.size
    if maximize:
        out = (x - lo) / (hi - lo)
    else:
        out = (x - hi) / (lo - hi)
    # + 0.0 turns -0.0 into 0.0
    return [float(v) + 0.0 for v in out]


def score(raws: Sequence[RawMetrics]) -> tuple[dict, list[float]]:
    """Normalised metric columns and the utility of each raw metric set."""
    columns = {name: normalize([getattr(m, name) for m in raws], sense)
               for name, sense in METRIC_SENSES}
    utilities = [sum(columns[n][i] for n in METRIC_NAMES) / len(METRIC_NAMES)
                 for i in range(len(raws))]
    return columns, utilities


def rank(results: Sequence[PlanResult],
         runways: Sequence[RunwaySpec] | None = None) -> CandidateSet:
    """Score, normalise and rank plan results; rank 1 has the highest utility.

    ``runways`` optionally overrides the runway each result is scored
    against; by default each result's own runway is used.
    """
    if not results:
        return CandidateSet(())
    runways = runways or [r.runway for r in results]
    raws = [compute_raw(res.trajectory, rwy) for res, rwy in zip(results, runways)]
    columns, utilities = score(raws)
    order = sorted(range(len(results)),
                   key=lambda i: (-utilities[i], results[i].runway.id, results[i].bank))
    entries = []
    for position, i in enumerate(order, start=1):
        res = results[i]
        report = SafetyReport(res.runway.id, res.bank, raws[i],
                              {n: columns[n][i] for n in METRIC_NAMES},
                              utilities[i], position)
        entries.append((res, report))
    return CandidateSet(tuple(entries))
