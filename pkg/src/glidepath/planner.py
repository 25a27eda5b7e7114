"""Glide trajectory generation to a runway threshold.

A candidate trajectory is a Dubins airplane path, then zero or more full
spiral turns, then an optional straight final approach flown dirty.  The
Dubins path alone either lands short (unreachable), arrives at field
elevation (low-altitude case) or arrives high; excess height is burnt off
with whole spirals and the remainder with an extended final whose length
is searched in ``search_step`` increments.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

from .dubins import (
    DEFAULT_STEP_FT,
    Configuration2D,
    CscSolution,
    ExtendedFinal,
    GlidePath,
    NoCscPath,
    csc_segments,
    lift_to_glide,
    make_spirals,
    solve_csc,
)
from .geodesy import GeoPosition, LocalFrame, project
from .performance import DragConfig, PerformanceModel, glide_ratio, turn_radius

log = logging.getLogger(__name__)

DEFAULT_BANKS = (20.0, 30.0, 45.0)
DEFAULT_SEARCH_STEP_FT = 50.0


class Unreachable(Exception):
    """The aircraft cannot glide to the runway at the requested bank."""


class SearchExhausted(RuntimeError):
    """No extended final length closed the altitude budget within its bound."""


@dataclass(frozen=True)
class RunwaySpec:
    id: str
    threshold: GeoPosition
    true_heading: float
    elevation: float

    def __post_init__(self):
        if not 0.0 <= self.true_heading < 360.0:
            raise ValueError(f"runway heading must lie in [0, 360): {self.true_heading}")

    @property
    def frame(self) -> LocalFrame:
        return LocalFrame(GeoPosition(self.threshold.lat, self.threshold.lon, 0.0))


@dataclass(frozen=True)
class AircraftState:
    """Position (``alt`` is true altitude, ft MSL) and heading in degrees."""

    position: GeoPosition
    heading: float


@dataclass(frozen=True)
class PlanRequest:
    start: AircraftState
    runway: RunwaySpec
    bank: float
    model: PerformanceModel
    search_step: float = DEFAULT_SEARCH_STEP_FT
    dirty: DragConfig | None = None
    step: float = DEFAULT_STEP_FT

    def __post_init__(self):
        if not self.search_step > 0:
            raise ValueError("search_step must be positive")
        if not 0.0 < self.bank < 90.0:
            raise ValueError(f"planning bank must lie in (0, 90): {self.bank}")


@dataclass(frozen=True)
class PlanResult:
    trajectory: GlidePath
    word: str
    spirals: int
    extended_final: float
    classification: str
    runway: RunwaySpec
    bank: float
    radius: float

    @property
    def key(self):
        return (self.runway.id, self.bank)


@dataclass(frozen=True)
class _Budget:
    """Altitude bookkeeping shared by the three planning cases."""

    start_alt: float
    elevation: float
    radius: float
    g_turn: float       # clean, banked
    g_straight: float   # clean, wings level
    g_dirty: float      # dirty, wings level
    tolerance: float

    @property
    def spiral_loss(self) -> float:
        return 2.0 * math.pi * self.radius / self.g_turn

    @property
    def extended_bound(self) -> float:
        return 2.0 * math.pi * self.radius * self.g_dirty / self.g_turn

    def excess(self, sol: CscSolution, extended: float = 0.0) -> float:
        loss = sol.turn_length / self.g_turn + sol.straight / self.g_straight
        return self.start_alt - loss - extended / self.g_dirty - self.elevation

    def spirals_for(self, excess: float) -> int | None:
        """Whole spirals leaving a residual within tolerance, or None."""
        n = math.floor((excess + self.tolerance) / self.spiral_loss)
        if n < 0:
            return None
        return n if abs(excess - n * self.spiral_loss) <= self.tolerance else None


def altitude_tolerance(search_step: float, g_dirty: float) -> float:
    """Half the height lost over one search step on the dirty glide."""
    return search_step / (2.0 * g_dirty)


def _final_fix(runway_heading: float, extended: float) -> Configuration2D:
    h = math.radians(runway_heading)
    return Configuration2D(-extended * math.sin(h), -extended * math.cos(h), runway_heading)


def generate(req: PlanRequest) -> PlanResult:
    """Plan one (runway, bank) candidate.

    Raises :class:`Unreachable` when the Dubins path alone lands short,
    :class:`~glidepath.dubins.NoCscPath` for degenerate geometry and
    :class:`SearchExhausted` if the extended-final search overruns.
    """
    model = req.model
    runway = req.runway
    dirty = req.dirty or model.dirty
    frame = runway.frame
    p = project(frame, req.start.position)
    start = Configuration2D(p.x, p.y, req.start.heading)
    radius = turn_radius(req.bank, model.best_glide_speed)
    g_dirty = glide_ratio(model, 0.0, dirty)
    budget = _Budget(p.z, runway.elevation, radius,
                     glide_ratio(model, req.bank, model.clean),
                     glide_ratio(model, 0.0, model.clean),
                     g_dirty, altitude_tolerance(req.search_step, g_dirty))

    sol = solve_csc(start, _final_fix(runway.true_heading, 0.0), radius)
    excess = budget.excess(sol)
    if excess < -budget.tolerance:
        raise Unreachable(f"{runway.id} at {req.bank:g} deg: {-excess:.0f} ft short")
    if excess <= budget.tolerance:
        return _assemble(req, start, sol, 0, 0.0, "low", dirty, radius)
    n = budget.spirals_for(excess)
    if n is not None:
        return _assemble(req, start, sol, n, 0.0, "high", dirty, radius)
    extended, sol, n = _search_extended(start, runway.true_heading, budget, req.search_step)
    return _assemble(req, start, sol, n, extended, "high", dirty, radius)


def _search_extended(start: Configuration2D, heading: float, budget: _Budget,
                     step: float) -> tuple[float, CscSolution, int]:
    """Walk the final-approach fix back from the threshold until the budget closes.

    Between consecutive steps the excess (in units of one spiral's loss) may
    jump over an integer without any step landing inside the tolerance band;
    the crossing is then located by bisection on the continuous length.
    """
    def phase(e):
        try:
            sol = solve_csc(start, _final_fix(heading, e), budget.radius)
        except NoCscPath:
            return None, None
        return sol, budget.excess(sol, e) / budget.spiral_loss

    _, prev_m = phase(0.0)
    prev_e = 0.0
    k = 1
    while True:
        e = k * step
        if e >= budget.extended_bound:
            raise SearchExhausted(
                f"extended final search passed {budget.extended_bound:.0f} ft without closing")
        sol, m = phase(e)
        if sol is not None:
            n = budget.spirals_for(m * budget.spiral_loss)
            if n is not None:
                return e, sol, n
            if prev_m is not None:
                found = _bisect_crossing(phase, budget, prev_e, prev_m, e, m)
                if found is not None:
                    return found
        prev_e, prev_m = e, m
        k += 1


def _bisect_crossing(phase, budget: _Budget, e0: float, m0: float, e1: float, m1: float):
    lo_i, hi_i = sorted((math.floor(m0), math.floor(m1)))
    if lo_i == hi_i:
        return None
    target = lo_i + 1 if m1 > m0 else hi_i
    if target < 0:
        return None
    f0 = m0 - target
    lo, hi = e0, e1
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        sol, m = phase(mid)
        if sol is None:
            return None
        if abs(m - target) * budget.spiral_loss <= budget.tolerance:
            return mid, sol, target
        if (m - target) * f0 > 0:
            lo = mid
        else:
            hi = mid
    return None


def _assemble(req: PlanRequest, start: Configuration2D, sol: CscSolution, spirals: int,
              extended: float, classification: str, dirty: DragConfig,
              radius: float) -> PlanResult:
    segs = csc_segments(start, sol)
    fix = _final_fix(req.runway.true_heading, extended)
    if spirals:
        segs.append(make_spirals(fix, radius, sol.last_direction, spirals))
    if extended > 0:
        segs.append(ExtendedFinal(fix, extended, drag=dirty))
    path = lift_to_glide(segs, req.model, req.bank, req.model.clean,
                         req.start.position.alt, req.step, origin=start)
    return PlanResult(path, sol.word, spirals, extended, classification,
                      req.runway, req.bank, radius)


def try_generate(req: PlanRequest) -> PlanResult | None:
    try:
        return generate(req)
    except (Unreachable, NoCscPath) as exc:
        log.debug("skipping %s@%g: %s", req.runway.id, req.bank, exc)
        return None
    except SearchExhausted as exc:
        log.warning("no closing extended final for %s@%g: %s", req.runway.id, req.bank, exc)
        return None


def generate_all(start: AircraftState, runways: Sequence[RunwaySpec],
                 banks: Sequence[float], model: PerformanceModel, *,
                 search_step: float = DEFAULT_SEARCH_STEP_FT,
                 dirty: DragConfig | None = None, step: float = DEFAULT_STEP_FT,
                 workers: int | None = None) -> list[PlanResult]:
    """Plan every runway x bank pair and keep the reachable ones.

    Results are ordered by runway id then ascending bank regardless of
    ``workers``.
    """
    requests = [PlanRequest(start, rwy, float(b), model, search_step, dirty, step)
                for rwy in sorted(runways, key=lambda r: r.id)
                for b in sorted(banks)]
    if workers and workers > 1 and len(requests) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(try_generate, requests))
    else:
        results = [try_generate(r) for r in requests]
    return [r for r in results if r is not None]
