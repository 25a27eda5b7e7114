import pytest

from glidepath import formats
from glidepath.estimation import SensorSample
from glidepath.geodesy import GeoPosition
from glidepath.performance import CLEAN, PerformanceModel

KNOT = 1.68781


@pytest.fixture(scope="session")
def a320():
    return formats.load_profile("a320")


@pytest.fixture(scope="session")
def a320_19(a320):
    return a320.with_g0(19.0).with_dirty_ratio(9.0)


@pytest.fixture(scope="session")
def runways():
    return formats.load_runways("lga_runways.txt")


@pytest.fixture(scope="session")
def fdr_rows():
    return formats.parse_fdr(formats.data_path("us1549_fdr_corrected.csv"))


def glide_stream(ratio, n=40, airspeed=190.0, alt0=5000.0, t0=0.0, bank=0.0,
                 drag=CLEAN, lat=40.8, lon=-73.9):
    """1 Hz samples of a steady glide at ``ratio``."""
    sink = airspeed * KNOT / ratio
    out = []
    for k in range(n):
        alt = alt0 - k * sink
        out.append(SensorSample(t0 + k, GeoPosition(lat + k * 1e-4, lon, alt), alt, alt,
                                0.0, airspeed, bank, drag))
    return out


def simple_model(g0=17.25, speed=225.0, dirty=9.0):
    m = PerformanceModel(g0, speed, (CLEAN,))
    return m.with_dirty_ratio(dirty)
