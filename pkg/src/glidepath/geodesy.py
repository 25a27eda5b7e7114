"""Flat-earth local frames in feet.

Planning happens in an east/north/up frame centred on the target runway
threshold.  The projection is equirectangular about the frame origin, which
is accurate to well under a foot per nautical mile at the ranges involved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

FEET_PER_DEG_LAT = 364_000.0
MAX_LAT_OFFSET_DEG = 2.0


class OutOfFrameRange(ValueError):
    """A point lies too far from the frame origin for a flat-earth projection."""


@dataclass(frozen=True)
class GeoPosition:
    lat: float
    lon: float
    alt: float = 0.0

    def __post_init__(self):
        if not -90.0 <= self.lat <= 90.0:
            raise ValueError(f"latitude out of range: {self.lat}")
        if not -180.0 <= self.lon <= 180.0:
            raise ValueError(f"longitude out of range: {self.lon}")


@dataclass(frozen=True)
class LocalPoint:
    x: float
    y: float
    z: float = 0.0

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.x, self.y, self.z)):
            raise ValueError(f"non-finite local point: {self}")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])


@dataclass(frozen=True)
class LocalFrame:
    origin: GeoPosition

    @property
    def feet_per_deg_lon(self) -> float:
        return FEET_PER_DEG_LAT * math.cos(math.radians(self.origin.lat))

    def project(self, p: GeoPosition) -> LocalPoint:
        return project(self, p)

    def unproject(self, p: LocalPoint) -> GeoPosition:
        return unproject(self, p)


def project(frame: LocalFrame, p: GeoPosition) -> LocalPoint:
    """Map a geographic position into ``frame`` (x east, y north, z = alt)."""
    if abs(p.lat - frame.origin.lat) >= MAX_LAT_OFFSET_DEG:
        raise OutOfFrameRange(
            f"latitude {p.lat} is {abs(p.lat - frame.origin.lat):.3f} deg from the "
            f"frame origin (limit {MAX_LAT_OFFSET_DEG})")
    dlon = (p.lon - frame.origin.lon + 180.0) % 360.0 - 180.0
    return LocalPoint(dlon * frame.feet_per_deg_lon,
                      (p.lat - frame.origin.lat) * FEET_PER_DEG_LAT,
                      p.alt)


def unproject(frame: LocalFrame, p: LocalPoint) -> GeoPosition:
    lat = frame.origin.lat + p.y / FEET_PER_DEG_LAT
    lon = frame.origin.lon + p.x / frame.feet_per_deg_lon
    lon = (lon + 180.0) % 360.0 - 180.0
    return GeoPosition(lat, lon, p.z)


def unproject_many(frame: LocalFrame, xyz: np.ndarray) -> np.ndarray:
    """Vectorised :func:`unproject`; returns an ``(n, 3)`` array of lat, lon, alt."""
    xyz = np.asarray(xyz, dtype=np.float64)
    lat = frame.origin.lat + xyz[:, 1] / FEET_PER_DEG_LAT
    lon = frame.origin.lon + xyz[:, 0] / frame.feet_per_deg_lon
    lon = (lon + 180.0) % 360.0 - 180.0
    return np.column_stack([lat, lon, xyz[:, 2]])


def distance3d(a: LocalPoint, b: LocalPoint) -> float:
    return math.sqrt((a.x - b.x) ** 2 + (a.y - b.y) ** 2 + (a.z - b.z) ** 2)
