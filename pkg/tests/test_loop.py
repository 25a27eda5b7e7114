import dataclasses

import numpy as np
import pytest

from conftest import glide_stream
from glidepath.estimation import SensorSeries, estimate_series
from glidepath.formats import format_timeline
from glidepath.loop import LoopConfig, fly, replay, state_at
from glidepath.performance import refine_baseline
from glidepath.planner import generate_all
from loop_cases import RUNWAY, START, model, synthetic_flight

CFG = LoopConfig((RUNWAY,), (45.0,))


@pytest.fixture(scope="module")
def flight19():
    return synthetic_flight(19.0)


def kinds(events):
    return [e.kind for e in events]


def test_flown_stream_follows_plan(flight19):
    res, samples = flight19
    assert [s.t for s in samples] == list(range(len(samples)))
    assert samples[0].true_alt == pytest.approx(START.position.alt)
    assert samples[0].pressure_alt == pytest.approx(START.position.alt - 264)
    path_len = res.trajectory.horizontal_length
    assert len(samples) == pytest.approx(path_len / (225 * 1.68781), abs=2)
    assert {s.bank for s in samples} <= {0.0, 45.0}


def test_straight_segment_recovers_ratio(flight19):
    _, samples = flight19
    straight = [e for e in estimate_series(samples) if e.bank == 0.0]
    assert straight
    for e in straight:
        assert e.g_hat == pytest.approx(19.0, rel=0.02)


def test_single_refine_to_observed_baseline(flight19):
    _, samples = flight19
    events = replay(samples, model(17.25), CFG)
    refines = [e for e in events if e.kind == "refine"]
    assert len(refines) == 1
    assert refines[0].old_g0 == 17.25
    assert refines[0].new_g0 == pytest.approx(19.0, rel=0.02)
    i = events.index(refines[0])
    assert events[i + 1].kind == "replan" and events[i + 1].t == refines[0].t
    assert [e.t for e in events] == sorted(e.t for e in events)


def test_post_refine_estimates_agree(flight19):
    _, samples = flight19
    events = replay(samples, model(17.25), CFG)
    g0 = next(e.new_g0 for e in events if e.kind == "refine")
    t_refine = next(e.t for e in events if e.kind == "refine")
    for e in events:
        if e.kind == "estimate" and e.t > t_refine:
            est = e.estimate
            dev = abs(refine_baseline(est.g_hat, est.bank, est.drag) - g0) / g0
            assert dev <= CFG.replan_threshold


def test_consistent_model_never_refines():
    high = dataclasses.replace(START, position=dataclasses.replace(START.position, alt=4500.0))
    _, samples = synthetic_flight(17.25, start=high)
    events = replay(samples, model(17.25), CFG)
    assert "refine" not in kinds(events) and "estimate" in kinds(events)


def test_climb_only_stream_is_silent():
    s = glide_stream(15.0, n=40)
    alts = np.linspace(1000, 3000, 40)
    s = [dataclasses.replace(x, pressure_alt=a, true_alt=a) for x, a in zip(s, alts)]
    assert replay(s, model(17.25), CFG) == []
    assert replay([], model(17.25), CFG) == []


def test_replay_is_idempotent(flight19):
    _, samples = flight19
    a = replay(samples, model(17.25), CFG)
    b = replay(samples, model(17.25), CFG)
    assert format_timeline(a) == format_timeline(b)
    for x, y in zip(a, b):
        assert (x.t, x.kind, x.estimate, x.new_g0) == (y.t, y.kind, y.estimate, y.new_g0)


def test_debounce_allows_later_refine():
    # two regimes separated by a climb, so no stable window mixes them
    first = glide_stream(19.0, n=30)
    second = glide_stream(12.0, n=30, t0=30, alt0=first[-1].pressure_alt + 500)
    events = replay(first + second, model(17.25), LoopConfig((RUNWAY,), (45.0,)))
    refines = [e for e in events if e.kind == "refine"]
    assert [round(e.new_g0) for e in refines] == [19, 12]
    assert refines[1].estimate.window[0] > refines[0].t


def test_threshold_validation():
    with pytest.raises(ValueError):
        LoopConfig((RUNWAY,), replan_threshold=0)


def test_larger_g0_keeps_reachable_pairs(fdr_rows, runways):
    series = SensorSeries(fdr_rows)
    for i in (4, 20, 28):
        state = state_at(series, i)
        low = {r.key for r in generate_all(state, runways, (20, 30, 45), model(17.25))}
        high = {r.key for r in generate_all(state, runways, (20, 30, 45), model(19.0))}
        assert low <= high


def test_fly_needs_two_points(flight19):
    res, _ = flight19
    short = dataclasses.replace(res.trajectory, points=res.trajectory.points[:1])
    with pytest.raises(ValueError):
        fly(short, RUNWAY.frame, 225.0)
