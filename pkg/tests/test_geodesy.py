import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from glidepath.geodesy import (
    FEET_PER_DEG_LAT,
    GeoPosition,
    LocalFrame,
    LocalPoint,
    OutOfFrameRange,
    distance3d,
    project,
    unproject,
    unproject_many,
)

FRAME = LocalFrame(GeoPosition(40.8, -73.9))
K = FEET_PER_DEG_LAT


def test_origin_maps_to_origin():
    p = project(FRAME, GeoPosition(40.8, -73.9, 3000))
    assert (p.x, p.y, p.z) == (0.0, 0.0, 3000.0)


def test_meridian_offset():
    p = project(FRAME, GeoPosition(40.81, -73.9))
    assert p.x == 0.0
    assert p.y == pytest.approx(0.01 * K)


def test_unproject_origin_keeps_altitude():
    g = unproject(FRAME, LocalPoint(0, 0, 1234))
    assert (g.lat, g.lon, g.alt) == (40.8, -73.9, 1234)


def test_unproject_parallel_offset():
    x = K * math.cos(math.radians(40.8)) * 0.01
    g = unproject(FRAME, LocalPoint(x, 0, 0))
    assert g.lat == pytest.approx(40.8, abs=1e-12)
    assert g.lon == pytest.approx(-73.89, abs=1e-12)


def test_round_trip_random_points():
    rng = np.random.default_rng(7)
    for dlat, dlon in rng.uniform(-0.5, 0.5, size=(100, 2)):
        p = GeoPosition(40.8 + dlat, -73.9 + dlon, 2500.0)
        q = unproject(FRAME, project(FRAME, p))
        assert abs(q.lat - p.lat) < 1e-9
        assert abs(q.lon - p.lon) < 1e-9
        assert q.alt == p.alt


def test_out_of_frame():
    with pytest.raises(OutOfFrameRange):
        project(FRAME, GeoPosition(42.8, -73.9))
    project(FRAME, GeoPosition(42.79, -73.9))


def test_antimeridian_wrap():
    frame = LocalFrame(GeoPosition(0.0, 179.99))
    p = project(frame, GeoPosition(0.0, -179.99))
    assert p.x == pytest.approx(0.02 * K)
    assert unproject(frame, p).lon == pytest.approx(-179.99)


@pytest.mark.parametrize("bad", [(91, 0), (-90.5, 0), (0, 180.5)])
def test_position_validation(bad):
    with pytest.raises(ValueError):
        GeoPosition(*bad)


def test_local_point_must_be_finite():
    with pytest.raises(ValueError):
        LocalPoint(float("nan"), 0, 0)


def test_unproject_many_matches_scalar():
    xyz = np.array([[100.0, -2000.0, 50.0], [30000.0, 12000.0, 3000.0]])
    many = unproject_many(FRAME, xyz)
    for row, (x, y, z) in zip(many, xyz):
        g = unproject(FRAME, LocalPoint(x, y, z))
        assert tuple(row) == pytest.approx((g.lat, g.lon, g.alt), abs=1e-12)


@pytest.mark.parametrize("a,b,d", [
    ((0, 0, 0), (3, 4, 0), 5.0),
    ((1, 2, 2), (0, 0, 0), 3.0),
    ((5, -1, 7), (5, -1, 7), 0.0),
])
def test_distance_examples(a, b, d):
    assert distance3d(LocalPoint(*a), LocalPoint(*b)) == pytest.approx(d)


coord = st.floats(-1e5, 1e5, allow_nan=False)
points = st.builds(LocalPoint, coord, coord, coord)


@given(points, points, points)
@settings(max_examples=200)
def test_distance_is_a_metric(a, b, c):
    ab, ba = distance3d(a, b), distance3d(b, a)
    assert ab == ba
    assert ab >= 0
    assert (ab == 0) == (a == b) or ab < 1e-9
    assert distance3d(a, c) <= ab + distance3d(b, c) + 1e-6


@given(st.floats(-1.99, 1.99), st.floats(-3, 3), st.floats(-60, 60))
@settings(max_examples=200)
def test_round_trip_property(dlat, dlon, lat0):
    frame = LocalFrame(GeoPosition(lat0, 10.0))
    p = GeoPosition(lat0 + dlat, 10.0 + dlon, 100.0)
    q = frame.unproject(frame.project(p))
    assert abs(q.lat - p.lat) < 1e-9 and abs(q.lon - p.lon) < 1e-9
