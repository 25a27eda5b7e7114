"""Observed glide ratio from airspeed and pressure-altitude streams.

At each 1 Hz sample the instantaneous ratio is the distance flown over the
preceding ``eta`` seconds (sum of airspeeds) divided by the pressure
altitude lost over the same span.  A trailing window of ``omega`` seconds
is *stable* when altitude never rises inside it and the instantaneous
ratios have a population standard deviation within ``sigma_tau``; the
estimate is the mean ratio over the latest stable window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .geodesy import GeoPosition
from .kernels import KNOT_FT_PER_S
from .performance import CLEAN, DragConfig

__all__ = [
    "KNOT_FT_PER_S", "NonDescending", "InsufficientData", "SensorSample",
    "EstimatorConfig", "GlideEstimate", "SensorSeries", "instant_glide",
    "stable_window", "estimate", "estimate_series",
]


class NonDescending(ValueError):
    """No altitude was lost over the lookback, so the ratio is undefined."""


class InsufficientData(ValueError):
    """The stream does not cover the requested lookback."""


@dataclass(frozen=True)
class SensorSample:
    t: float
    position: GeoPosition
    pressure_alt: float
    true_alt: float
    heading: float
    airspeed: float
    bank: float = 0.0
    drag: DragConfig = CLEAN

    def __post_init__(self):
        if self.airspeed < 0:
            raise ValueError(f"negative airspeed at t={self.t}")


@dataclass(frozen=True)
class EstimatorConfig:
    eta: int = 4
    omega: int = 10
    sigma_tau: float = 5.0
    max_bank_range: float = 5.0

    def __post_init__(self):
        if self.eta <= 0 or self.omega < self.eta or self.sigma_tau <= 0:
            raise ValueError(f"invalid estimator configuration {self}")
        if int(self.eta) != self.eta or int(self.omega) != self.omega:
            raise ValueError("eta and omega are whole seconds at 1 Hz")


@dataclass(frozen=True)
class GlideEstimate:
    g_hat: float
    bank: float
    drag: DragConfig
    window: tuple[float, float]
    std: float = 0.0


class SensorSeries:
    """A stream resampled to 1 Hz as parallel numpy arrays.

    Continuous channels are interpolated linearly (heading along the
    shorter arc); the drag configuration is held from the preceding sample.
    """

    def __init__(self, samples: Sequence[SensorSample]):
        samples = list(samples)
        t = np.array([s.t for s in samples], dtype=np.float64)
        if t.size and np.any(np.diff(t) <= 0):
            raise ValueError("sample times must be strictly increasing")
        self.samples = samples
        if t.size == 0:
            grid = t
        else:
            grid = t[0] + np.arange(int(math.floor(t[-1] - t[0] + 1e-9)) + 1)
        self.t = grid

        def interp(values):
            if not t.size:
                return np.empty(0)
            return np.interp(grid, t, np.asarray(values, dtype=np.float64))

        self.lat = interp([s.position.lat for s in samples])
        self.lon = interp([s.position.lon for s in samples])
        self.pressure_alt = interp([s.pressure_alt for s in samples])
        self.true_alt = interp([s.true_alt for s in samples])
        self.airspeed = interp([s.airspeed for s in samples])
        self.bank = interp([s.bank for s in samples])
        self.heading = interp(np.degrees(np.unwrap(np.radians([s.heading for s in samples]))))
        self.heading %= 360.0
        configs: list[DragConfig] = []
        codes = []
        for s in samples:
            if s.drag not in configs:
                configs.append(s.drag)
            codes.append(configs.index(s.drag))
        self.drag_configs = configs
        if t.size:
            held = np.searchsorted(t, grid + 1e-9, side="right") - 1
            self.drag_code = np.asarray(codes, dtype=np.int64)[held]
        else:
            self.drag_code = np.empty(0, dtype=np.int64)

    def __len__(self):
        return len(self.t)

    def index_of(self, t_i: float) -> int:
        if not len(self.t):
            raise InsufficientData("empty stream")
        k = t_i - self.t[0]
        i = int(round(k))
        if abs(k - i) > 1e-6 or not 0 <= i < len(self.t):
            raise InsufficientData(f"t={t_i} is not a 1 Hz sample of this stream")
        return i

    def instant_ratios(self, eta: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(ratio, distance, loss) per sample; ratio is NaN where undefined."""
        dist, loss = kernels.instant_terms(self.airspeed, self.pressure_alt, eta)
        with np.errstate(invalid="ignore", divide="ignore"):
            ratio = np.where(loss > 0, dist / loss, np.nan)
        return ratio, dist, loss

    def stability(self, cfg: EstimatorConfig):
        """Per-sample stable flag plus the window statistics behind it."""
        ratio, _, _ = self.instant_ratios(cfg.eta)
        first = cfg.omega - 1 + cfg.eta
        n = len(self.t)
        if n <= first:
            empty = np.zeros(n, dtype=bool)
            nan = np.full(n, np.nan)
            return empty, nan, nan, nan
        mono, count, mean, std, bank_mean, bank_range, same_drag = kernels.window_stats(
            ratio, self.pressure_alt, self.bank, self.drag_code, cfg.omega, first, cfg.eta)
        stable = (mono & (count > 0) & (std <= cfg.sigma_tau)
                  & (bank_range <= cfg.max_bank_range) & same_drag)
        return stable, mean, std, bank_mean

    def estimate_at(self, i: int, cfg: EstimatorConfig, stats=None) -> GlideEstimate | None:
        stable, mean, std, bank_mean = stats or self.stability(cfg)
        if not stable[i]:
            return None
        window_codes = self.drag_code[i - cfg.omega + 1:i + 1]
        modal = int(np.bincount(window_codes).argmax())
        return GlideEstimate(float(mean[i]), float(bank_mean[i]), self.drag_configs[modal],
                             (float(self.t[i - cfg.omega + 1]), float(self.t[i])),
                             float(std[i]))


def _series(stream) -> SensorSeries:
    return stream if isinstance(stream, SensorSeries) else SensorSeries(stream)


def instant_glide(stream, t_i: float, eta: int = 4) -> float:
    """Observed glide ratio at ``t_i`` over the preceding ``eta`` seconds."""
    s = _series(stream)
    i = s.index_of(t_i)
    if i < eta:
        raise InsufficientData(f"need {eta} s of history before t={t_i}")
    _, dist, loss = s.instant_ratios(eta)
    if not loss[i] > 0:
        raise NonDescending(f"altitude loss {loss[i]:.1f} ft over {eta} s before t={t_i}")
    return float(dist[i] / loss[i])


def stable_window(stream, t_i: float, cfg: EstimatorConfig = EstimatorConfig()) -> bool:
    s = _series(stream)
    i = s.index_of(t_i)
    if i < cfg.omega - 1 + cfg.eta:
        raise InsufficientData(f"need {cfg.omega + cfg.eta - 1} s of history before t={t_i}")
    stable, *_ = s.stability(cfg)
    return bool(stable[i])


def estimate_series(stream, cfg: EstimatorConfig = EstimatorConfig()) -> list[GlideEstimate]:
    """An estimate for every sample that closes a stable window, in time order."""
    s = _series(stream)
    stats = s.stability(cfg)
    return [s.estimate_at(int(i), cfg, stats) for i in np.flatnonzero(stats[0])]


def estimate(stream, cfg: EstimatorConfig = EstimatorConfig()) -> GlideEstimate | None:
    """Estimate from the latest stable window, or None if there is none."""
    s = _series(stream)
    if not len(s):
        return None
    stats = s.stability(cfg)
    idx = np.flatnonzero(stats[0])
    if not idx.size:
        return None
    return s.estimate_at(int(idx[-1]), cfg, stats)
