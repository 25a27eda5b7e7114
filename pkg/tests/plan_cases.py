"""Random planning problems around a synthetic runway."""

import math

from glidepath.geodesy import GeoPosition
from glidepath.performance import CLEAN, PerformanceModel
from glidepath.planner import AircraftState, PlanRequest, RunwaySpec

FEET_PER_DEG = 364_000.0


def runway(heading=40.0, elevation=20.0, lat=40.77, lon=-73.87, ident="R1"):
    return RunwaySpec(ident, GeoPosition(lat, lon, elevation), heading, elevation)


def offset(rwy, east, north, alt):
    lat = rwy.threshold.lat + north / FEET_PER_DEG
    lon = rwy.threshold.lon + east / (FEET_PER_DEG * math.cos(math.radians(rwy.threshold.lat)))
    return GeoPosition(lat, lon, alt)


def random_request(rng, model=None):
    g0 = rng.uniform(8, 22) if model is None else model.g0
    if model is None:
        model = PerformanceModel(g0, rng.uniform(60, 250), (CLEAN,)).with_dirty_ratio(
            g0 * rng.uniform(0.4, 0.9))
    rwy = runway(heading=rng.uniform(0, 360), elevation=rng.uniform(0, 2000))
    dist = rng.uniform(0, 60000)
    bearing = rng.uniform(0, 2 * math.pi)
    alt = rwy.elevation + rng.uniform(0, 15000)
    start = AircraftState(offset(rwy, dist * math.sin(bearing), dist * math.cos(bearing), alt),
                          rng.uniform(0, 360))
    bank = float(rng.choice([20.0, 30.0, 45.0]))
    return PlanRequest(start, rwy, bank, model)
