"""Hot numeric loops, each in two flavours.

Every kernel exists as an explicit loop (compiled by numba when enabled) and
as a vectorised numpy function with identical semantics.  The public name
binds to one of them according to :data:`glidepath._accel.USE_NUMBA`; the
``*_loop`` / ``*_numpy`` variants stay importable for tests and benchmarks.
"""

import math

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from ._accel import USE_NUMBA, jit

KNOT_FT_PER_S = 1.68781

# CSC words in canonical order RSR, RSL, LSL, LSR. +1 is a right (clockwise) turn.
WORD_FIRST = (1.0, 1.0, -1.0, -1.0)
WORD_SECOND = (1.0, -1.0, -1.0, 1.0)

_ARC_SNAP = 1e-9


# --------------------------------------------------------------------------
# Dubins CSC components
# --------------------------------------------------------------------------

@jit
def _csc_components_loop(x0, y0, h0, x1, y1, h1, r):
    n = x0.shape[0]
    out = np.full((n, 4, 3), np.nan)
    for i in range(n):
        ch0 = math.cos(math.radians(h0[i]))
        sh0 = math.sin(math.radians(h0[i]))
        ch1 = math.cos(math.radians(h1[i]))
        sh1 = math.sin(math.radians(h1[i]))
        ri = r[i]
        for w in range(4):
            s1 = WORD_FIRST[w]
            s2 = WORD_SECOND[w]
            cx1 = x0[i] + s1 * ri * ch0
            cy1 = y0[i] - s1 * ri * sh0
            cx2 = x1[i] + s2 * ri * ch1
            cy2 = y1[i] - s2 * ri * sh1
            dx = cx2 - cx1
            dy = cy2 - cy1
            dist = math.hypot(dx, dy)
            if s1 == s2:
                if dist < 1e-9 * ri:
                    psi = h0[i]
                    straight = 0.0
                else:
                    psi = math.degrees(math.atan2(dx, dy))
                    straight = dist
            else:
                if dist < 2.0 * ri:
                    if dist < 2.0 * ri * (1.0 - 1e-12):
                        continue
                    straight = 0.0
                else:
                    straight = math.sqrt(dist * dist - 4.0 * ri * ri)
                psi = math.degrees(math.atan2(dx, dy)) + s1 * math.degrees(
                    math.atan2(2.0 * ri, straight))
            a1 = (s1 * (psi - h0[i])) % 360.0
            a2 = (s2 * (h1[i] - psi)) % 360.0
            if a1 > 360.0 - _ARC_SNAP:
                a1 = 0.0
            if a2 > 360.0 - _ARC_SNAP:
                a2 = 0.0
            out[i, w, 0] = a1
            out[i, w, 1] = straight
            out[i, w, 2] = a2
    return out


def _csc_components_numpy(x0, y0, h0, x1, y1, h1, r):
    n = x0.shape[0]
    out = np.full((n, 4, 3), np.nan)
    ch0, sh0 = np.cos(np.radians(h0)), np.sin(np.radians(h0))
    ch1, sh1 = np.cos(np.radians(h1)), np.sin(np.radians(h1))
    for w in range(4):
        s1, s2 = WORD_FIRST[w], WORD_SECOND[w]
        dx = (x1 + s2 * r * ch1) - (x0 + s1 * r * ch0)
        dy = (y1 - s2 * r * sh1) - (y0 - s1 * r * sh0)
        dist = np.hypot(dx, dy)
        psi_c = np.degrees(np.arctan2(dx, dy))
        if s1 == s2:
            coincident = dist < 1e-9 * r
            psi = np.where(coincident, h0, psi_c)
            straight = np.where(coincident, 0.0, dist)
            ok = np.ones(n, dtype=bool)
        else:
            ok = dist >= 2.0 * r * (1.0 - 1e-12)
            straight = np.sqrt(np.maximum(dist * dist - 4.0 * r * r, 0.0))
            straight = np.where(dist < 2.0 * r, 0.0, straight)
            psi = psi_c + s1 * np.degrees(np.arctan2(2.0 * r, straight))
        a1 = np.mod(s1 * (psi - h0), 360.0)
        a2 = np.mod(s2 * (h1 - psi), 360.0)
        a1 = np.where(a1 > 360.0 - _ARC_SNAP, 0.0, a1)
        a2 = np.where(a2 > 360.0 - _ARC_SNAP, 0.0, a2)
        out[ok, w, 0] = a1[ok]
        out[ok, w, 1] = straight[ok]
        out[ok, w, 2] = a2[ok]
    return out


def csc_components(x0, y0, h0, x1, y1, h1, r):
    """Arc/straight/arc decomposition of all four CSC words.

    All arguments broadcast to 1-D float arrays of a common length ``n``.
    Headings are degrees clockwise from north.  Returns an ``(n, 4, 3)``
    array of ``(first arc deg, straight ft, second arc deg)`` per word, NaN
    where a word is infeasible.
    """
    args = np.broadcast_arrays(*(np.atleast_1d(np.asarray(a, dtype=np.float64))
                                 for a in (x0, y0, h0, x1, y1, h1, r)))
    args = [np.ascontiguousarray(a) for a in args]
    if USE_NUMBA:
        return _csc_components_loop(*args)
    return _csc_components_numpy(*args)


def csc_lengths(x0, y0, h0, x1, y1, h1, r):
    """Total 2D length of each CSC word, ``(n, 4)``, ``inf`` when infeasible."""
    comp = csc_components(x0, y0, h0, x1, y1, h1, r)
    r = np.broadcast_to(np.asarray(r, dtype=np.float64), comp.shape[:1])
    lengths = r[:, None] * np.radians(comp[:, :, 0] + comp[:, :, 2]) + comp[:, :, 1]
    return np.where(np.isnan(lengths), np.inf, lengths)


# --------------------------------------------------------------------------
# Trajectory metric sums
# --------------------------------------------------------------------------

@jit
def _trajectory_sums_loop(x, y, z, bank, rx, ry, rz, elevation, floor_ft):
    n = x.shape[0]
    zsum = 0.0
    dsum = 0.0
    bsum = 0.0
    length = 0.0
    for i in range(n):
        zsum += z[i]
        dsum += math.sqrt((x[i] - rx) ** 2 + (y[i] - ry) ** 2 + (z[i] - rz) ** 2)
        h = z[i] - elevation
        if h < floor_ft:
            h = floor_ft
        bsum += bank[i] / h
        if i > 0:
            length += math.sqrt((x[i] - x[i - 1]) ** 2 + (y[i] - y[i - 1]) ** 2
                                + (z[i] - z[i - 1]) ** 2)
    return zsum / n, dsum / n, bsum / n, length


def _trajectory_sums_numpy(x, y, z, bank, rx, ry, rz, elevation, floor_ft):
    n = x.shape[0]
    d = np.sqrt((x - rx) ** 2 + (y - ry) ** 2 + (z - rz) ** 2)
    h = np.maximum(z - elevation, floor_ft)
    seg = np.sqrt(np.diff(x) ** 2 + np.diff(y) ** 2 + np.diff(z) ** 2)
    return z.sum() / n, d.sum() / n, (bank / h).sum() / n, seg.sum()


def trajectory_sums(x, y, z, bank, runway_xyz, elevation, floor_ft):
    """Average altitude, average distance to the runway point, average
    bank-over-height and polyline length of one trajectory."""
    x, y, z, bank = (np.ascontiguousarray(a, dtype=np.float64) for a in (x, y, z, bank))
    rx, ry, rz = (float(v) for v in runway_xyz)
    fn = _trajectory_sums_loop if USE_NUMBA else _trajectory_sums_numpy
    out = fn(x, y, z, bank, rx, ry, rz, float(elevation), float(floor_ft))
    return tuple(float(v) for v in out)


# --------------------------------------------------------------------------
# Glide ratio estimation from a 1 Hz stream
# --------------------------------------------------------------------------

@jit
def _instant_terms_loop(airspeed_kn, alt, eta):
    n = alt.shape[0]
    dist = np.full(n, np.nan)
    loss = np.full(n, np.nan)
    for i in range(eta, n):
        acc = 0.0
        for j in range(i - eta + 1, i + 1):
            acc += airspeed_kn[j]
        dist[i] = acc * KNOT_FT_PER_S
        loss[i] = alt[i - eta] - alt[i]
    return dist, loss


def _instant_terms_numpy(airspeed_kn, alt, eta):
    n = alt.shape[0]
    dist = np.full(n, np.nan)
    loss = np.full(n, np.nan)
    if n > eta:
        csum = np.concatenate(([0.0], np.cumsum(airspeed_kn)))
        dist[eta:] = (csum[eta + 1:] - csum[1:n - eta + 1]) * KNOT_FT_PER_S
        loss[eta:] = alt[:n - eta] - alt[eta:]
    return dist, loss


def instant_terms(airspeed_kn, alt, eta):
    """Horizontal distance (ft) and altitude loss (ft) over the ``eta``
    samples ending at each index of a 1 Hz stream.  NaN before coverage."""
    airspeed_kn = np.ascontiguousarray(airspeed_kn, dtype=np.float64)
    alt = np.ascontiguousarray(alt, dtype=np.float64)
    fn = _instant_terms_loop if USE_NUMBA else _instant_terms_numpy
    return fn(airspeed_kn, alt, int(eta))


@jit
def _window_stats_loop(ratio, alt, bank, drag, omega, first, lookback):
    n = ratio.shape[0]
    monotone = np.zeros(n, dtype=np.bool_)
    count = np.zeros(n, dtype=np.int64)
    mean = np.full(n, np.nan)
    std = np.full(n, np.nan)
    bank_mean = np.full(n, np.nan)
    bank_range = np.full(n, np.nan)
    uniform_drag = np.zeros(n, dtype=np.bool_)
    for i in range(first, n):
        mono = True
        for j in range(i - omega + 1, i + 1):
            if alt[j] > alt[j - 1]:
                mono = False
        monotone[i] = mono
        c = 0
        acc = 0.0
        bacc = 0.0
        bmin = np.inf
        bmax = -np.inf
        same = True
        for j in range(i - omega - lookback + 1, i + 1):
            bmin = min(bmin, bank[j])
            bmax = max(bmax, bank[j])
            if drag[j] != drag[i]:
                same = False
        for j in range(i - omega + 1, i + 1):
            bacc += bank[j]
            if not math.isnan(ratio[j]):
                c += 1
                acc += ratio[j]
        bank_mean[i] = bacc / omega
        bank_range[i] = bmax - bmin
        uniform_drag[i] = same
        count[i] = c
        if c > 0:
            m = acc / c
            var = 0.0
            for j in range(i - omega + 1, i + 1):
                if not math.isnan(ratio[j]):
                    var += (ratio[j] - m) ** 2
            mean[i] = m
            std[i] = math.sqrt(var / c)
    return monotone, count, mean, std, bank_mean, bank_range, uniform_drag


def _window_stats_numpy(ratio, alt, bank, drag, omega, first, lookback):
    n = ratio.shape[0]
    monotone = np.zeros(n, dtype=np.bool_)
    count = np.zeros(n, dtype=np.int64)
    mean = np.full(n, np.nan)
    std = np.full(n, np.nan)
    bank_mean = np.full(n, np.nan)
    bank_range = np.full(n, np.nan)
    uniform_drag = np.zeros(n, dtype=np.bool_)
    if n <= first:
        return monotone, count, mean, std, bank_mean, bank_range, uniform_drag
    rises = np.concatenate(([False], alt[1:] > alt[:-1])).astype(np.int64)
    rw = sliding_window_view(rises, omega)[first - omega + 1:]
    monotone[first:] = rw.sum(axis=1) == 0
    gw = sliding_window_view(ratio, omega)[first - omega + 1:]
    valid = ~np.isnan(gw)
    c = valid.sum(axis=1)
    filled = np.where(valid, gw, 0.0)
    with np.errstate(invalid="ignore", divide="ignore"):
        m = filled.sum(axis=1) / c
        var = np.where(valid, (gw - m[:, None]) ** 2, 0.0).sum(axis=1) / c
    count[first:] = c
    mean[first:] = np.where(c > 0, m, np.nan)
    std[first:] = np.where(c > 0, np.sqrt(var), np.nan)
    bw = sliding_window_view(bank, omega)[first - omega + 1:]
    bank_mean[first:] = bw.sum(axis=1) / omega
    span = omega + lookback
    bs = sliding_window_view(bank, span)[first - span + 1:]
    bank_range[first:] = bs.max(axis=1) - bs.min(axis=1)
    dw = sliding_window_view(drag, span)[first - span + 1:]
    uniform_drag[first:] = (dw == drag[first:, None]).all(axis=1)
    return monotone, count, mean, std, bank_mean, bank_range, uniform_drag


def window_stats(ratio, alt, bank, drag, omega, first, lookback=0):
    """Trailing-window statistics at every index ``i >= first``.

    The window holds the ``omega`` samples ending at ``i``; monotonicity is
    checked on every step inside ``[i - omega, i]``.  Bank range and drag
    uniformity also cover the ``lookback`` samples before the window, since
    those feed its first instantaneous ratios.  ``first`` must be at least
    ``omega + lookback - 1`` and at least ``omega``.  Returns ``(monotone,
    valid_count, mean, std, bank_mean, bank_range, uniform_drag)`` arrays; std is the population form over the
    non-NaN ratios.
    """
    ratio = np.ascontiguousarray(ratio, dtype=np.float64)
    alt = np.ascontiguousarray(alt, dtype=np.float64)
    bank = np.ascontiguousarray(bank, dtype=np.float64)
    drag = np.ascontiguousarray(drag, dtype=np.int64)
    if first < omega or first < omega + lookback - 1:
        raise ValueError("first index must leave room for a full window")
    fn = _window_stats_loop if USE_NUMBA else _window_stats_numpy
    return fn(ratio, alt, bank, drag, int(omega), int(first), int(lookback))
