"""Readers and writers for profiles, runways, scenarios, FDR tables and exports.

Text formats:

* aircraft profile / scenario: ``key = value`` lines, ``#`` comments.
  Units live in the key names (``alt_ft``, ``best_glide_speed_kn``).
* runway database: whitespace table ``id lat_deg lon_deg true_heading_deg
  elevation_ft``.
* FDR: CSV whose first seven columns carry exactly the headers of
  :data:`FDR_COLUMNS`; optional ``Bank(degrees)`` and ``Drag config``
  columns may follow.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .dubins import GlidePath
from .estimation import SensorSample
from .geodesy import GeoPosition, LocalFrame, unproject_many
from .loop import LoopEvent
from .metrics import CandidateSet
from .performance import CLEAN, DragConfig, PerformanceModel
from .planner import DEFAULT_BANKS, DEFAULT_SEARCH_STEP_FT, AircraftState, RunwaySpec

log = logging.getLogger(__name__)

FDR_COLUMNS = (
    "Time Delay",
    "Latitude(decimal)",
    "Longitude(decimal)",
    "Pressure Altitude(feet)",
    "true altitude(feet)",
    "magnetic heading(degrees)",
    "Airspeed(kts)",
)
FDR_OPTIONAL = ("Bank(degrees)", "Drag config")

REPORT_COLUMNS = ("Runway", "Bank angle", "d", "z", "l", "n", "theta/h", "e", "u", "Rank")
# report column -> normalised metric name
_REPORT_METRICS = (("d", "avg_distance"), ("z", "avg_altitude"), ("l", "length"),
                   ("n", "turns"), ("theta/h", "avg_bank_over_height"),
                   ("e", "extended_final"))

TRAJECTORY_CSV_COLUMNS = ("t_index", "lat", "lon", "alt_ft", "bank_deg", "segment_kind")


class SchemaError(ValueError):
    """A file does not follow its declared column or key layout."""


class EmptyTrajectory(ValueError):
    """Refusing to export a trajectory without points."""


def data_path(name: str) -> Path:
    return Path(str(resources.files("glidepath") / "data" / name))


def _resolve(ref: str, base: Path | None, suffix: str = "") -> Path:
    p = Path(ref)
    candidates = [p]
    if base is not None and not p.is_absolute():
        candidates.append(base / p)
    for d in ("", "scenarios/"):
        candidates += [data_path(d + ref), data_path(d + ref + suffix)]
    for c in candidates:
        if c.is_file():
            return c
    raise FileNotFoundError(f"cannot resolve {ref!r}")


# --------------------------------------------------------------------------
# key = value files
# --------------------------------------------------------------------------

def read_keyvalue(text: str, source: str = "<string>") -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise SchemaError(f"{source}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key in out:
            raise SchemaError(f"{source}:{lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def _number(kv: dict, key: str, source: str, default=None) -> float:
    if key not in kv:
        if default is None:
            raise SchemaError(f"{source}: missing key {key!r}")
        return default
    try:
        return float(kv[key])
    except ValueError:
        raise ValueError(f"{source}: {key} = {kv[key]!r} is not a number") from None


def parse_profile(text: str, source: str = "<profile>") -> PerformanceModel:
    kv = read_keyvalue(text, source)
    drags = tuple(DragConfig(k.split(".", 1)[1], _number(kv, k, source))
                  for k in kv if k.startswith("drag."))
    if not any(d.name == "clean" for d in drags):
        drags = (CLEAN,) + drags
    return PerformanceModel(_number(kv, "g0", source),
                            _number(kv, "best_glide_speed_kn", source),
                            drags, kv.get("name", Path(source).stem))


def load_profile(ref: str | Path, base: Path | None = None) -> PerformanceModel:
    path = _resolve(str(ref), base, ".profile")
    return parse_profile(path.read_text(), str(path))


# --------------------------------------------------------------------------
# runway database
# --------------------------------------------------------------------------

def parse_runways(text: str, source: str = "<runways>") -> list[RunwaySpec]:
    runways = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 5:
            raise SchemaError(f"{source}:{lineno}: expected 5 columns, got {len(parts)}")
        try:
            lat, lon, hdg, elev = (float(v) for v in parts[1:])
        except ValueError:
            raise ValueError(f"{source}:{lineno}: non-numeric runway field") from None
        runways.append(RunwaySpec(parts[0], GeoPosition(lat, lon, elev), hdg, elev))
    return runways


def load_runways(ref: str | Path, base: Path | None = None) -> list[RunwaySpec]:
    path = _resolve(str(ref), base)
    return parse_runways(path.read_text(), str(path))


def format_runways(runways: Iterable[RunwaySpec]) -> str:
    lines = ["# id lat_deg lon_deg true_heading_deg elevation_ft"]
    for r in runways:
        lines.append(f"{r.id} {r.threshold.lat!r} {r.threshold.lon!r} "
                     f"{r.true_heading!r} {r.elevation!r}")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# scenarios
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Scenario:
    model: PerformanceModel
    start: AircraftState
    runways: tuple[RunwaySpec, ...]
    banks: tuple[float, ...] = DEFAULT_BANKS
    search_step: float = DEFAULT_SEARCH_STEP_FT
    step: float = 100.0
    name: str = "scenario"
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.runways:
            raise SchemaError("scenario lists no runways")
        if not self.banks:
            raise SchemaError("scenario lists no bank angles")


def _floats(value: str) -> tuple[float, ...]:
    return tuple(float(v) for v in re.split(r"[,\s]+", value.strip()) if v)


def parse_scenario(text: str, source: str = "<scenario>",
                   base: Path | None = None) -> Scenario:
    """Build a :class:`Scenario`; profile and runway references resolve
    relative to ``base``, then against the packaged data directory."""
    kv = read_keyvalue(text, source)
    for key in ("profile", "runway_db", "lat_deg", "lon_deg", "alt_ft", "heading_deg"):
        if key not in kv:
            raise SchemaError(f"{source}: missing key {key!r}")
    model = load_profile(kv["profile"], base)
    if "g0" in kv:
        model = model.with_g0(_number(kv, "g0", source))
    if "dirty_ratio" in kv:
        model = model.with_dirty_ratio(_number(kv, "dirty_ratio", source))
    db = load_runways(kv["runway_db"], base)
    wanted = [w for w in re.split(r"[,\s]+", kv.get("runways", "")) if w]
    if wanted:
        by_id = {r.id: r for r in db}
        missing = [w for w in wanted if w not in by_id]
        if missing:
            raise SchemaError(f"{source}: unknown runways {missing}")
        runways = tuple(by_id[w] for w in wanted)
    else:
        runways = tuple(db)
    start = AircraftState(GeoPosition(_number(kv, "lat_deg", source),
                                      _number(kv, "lon_deg", source),
                                      _number(kv, "alt_ft", source)),
                          _number(kv, "heading_deg", source))
    banks = _floats(kv["banks_deg"]) if "banks_deg" in kv else DEFAULT_BANKS
    known = {"profile", "runway_db", "runways", "lat_deg", "lon_deg", "alt_ft",
             "heading_deg", "banks_deg", "g0", "dirty_ratio", "search_step_ft",
             "step_ft", "name"}
    extras = {k: v for k, v in kv.items() if k not in known}
    return Scenario(model, start, runways, banks,
                    _number(kv, "search_step_ft", source, DEFAULT_SEARCH_STEP_FT),
                    _number(kv, "step_ft", source, 100.0),
                    kv.get("name", Path(source).stem), extras)


def load_scenario(ref: str | Path) -> Scenario:
    path = _resolve(str(ref), None, ".scn")
    return parse_scenario(path.read_text(), str(path), path.parent)


# --------------------------------------------------------------------------
# FDR tables
# --------------------------------------------------------------------------

_T_SYMBOL = re.compile(r"^\s*t\s*(?:([+-])\s*(\d+(?:\.\d*)?))?\s*$")


def parse_time(cell: str, epoch: float = 0.0) -> float:
    """Seconds from ``"t"``, ``"t+K"``/``"t-K"`` (relative to ``epoch``) or a plain number."""
    m = _T_SYMBOL.match(cell)
    if m:
        if m.group(1) is None:
            return epoch
        k = float(m.group(2))
        return epoch + (k if m.group(1) == "+" else -k)
    return float(cell)


def parse_fdr(file, epoch: float = 0.0) -> list[SensorSample]:
    """Read an FDR CSV into time-ordered samples.

    ``file`` is a path or a text stream.  Out-of-order rows are sorted with
    a warning; duplicate times are rejected.
    """
    if isinstance(file, (str, Path)):
        with open(file, newline="") as fh:
            return parse_fdr(fh, epoch)
    reader = csv.reader(file)
    header = next(reader, None)
    if header is None:
        raise SchemaError("FDR file is empty")
    header = [h.strip() for h in header]
    if tuple(header[:len(FDR_COLUMNS)]) != FDR_COLUMNS:
        missing = [c for c in FDR_COLUMNS if c not in header]
        raise SchemaError(f"FDR header mismatch; expected {list(FDR_COLUMNS)}"
                          + (f", missing {missing}" if missing else ""))
    extra = header[len(FDR_COLUMNS):]
    unknown = [c for c in extra if c not in FDR_OPTIONAL]
    if unknown:
        raise SchemaError(f"unknown FDR columns {unknown}")
    drag_by_name = {"clean": CLEAN}
    rows = []
    for lineno, row in enumerate(reader, start=2):
        if not any(c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise SchemaError(f"line {lineno}: {len(row)} cells, expected {len(header)}")
        cells = dict(zip(header, (c.strip() for c in row)))

        def num(col):
            try:
                return float(cells[col])
            except ValueError:
                raise ValueError(f"line {lineno}, column {col!r}: "
                                 f"{cells[col]!r} is not a number") from None

        try:
            t = parse_time(cells["Time Delay"], epoch)
        except ValueError:
            raise ValueError(f"line {lineno}, column 'Time Delay': "
                             f"{cells['Time Delay']!r} is not a time") from None
        drag = CLEAN
        if "Drag config" in cells:
            name, _, delta = cells["Drag config"].partition(":")
            if name not in drag_by_name:
                drag_by_name[name] = DragConfig(name, float(delta) if delta else 1.0)
            drag = drag_by_name[name]
        true_alt = num("true altitude(feet)")
        rows.append(SensorSample(
            t, GeoPosition(num("Latitude(decimal)"), num("Longitude(decimal)"), true_alt),
            num("Pressure Altitude(feet)"), true_alt, num("magnetic heading(degrees)"),
            num("Airspeed(kts)"),
            num("Bank(degrees)") if "Bank(degrees)" in cells else 0.0, drag))
    times = [r.t for r in rows]
    if times != sorted(times):
        log.warning("FDR rows out of time order; sorting")
        rows.sort(key=lambda r: r.t)
    if len(set(times)) != len(times):
        raise SchemaError("duplicate sample times in FDR")
    return rows


def format_fdr(samples: Sequence[SensorSample], extended: bool = False) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(FDR_COLUMNS + (FDR_OPTIONAL if extended else ()))
    for s in samples:
        row = [repr(float(s.t)), repr(s.position.lat), repr(s.position.lon),
               repr(s.pressure_alt), repr(s.true_alt), repr(s.heading), repr(s.airspeed)]
        if extended:
            row += [repr(s.bank), f"{s.drag.name}:{s.drag.delta!r}"]
        w.writerow(row)
    return buf.getvalue()


# --------------------------------------------------------------------------
# trajectory export
# --------------------------------------------------------------------------

def trajectory_table(t: GlidePath, frame: LocalFrame) -> list[tuple]:
    if len(t) == 0:
        raise EmptyTrajectory("trajectory has no points")
    geo = unproject_many(frame, t.points)
    kinds = t.point_kinds()
    return [(i, float(geo[i, 0]), float(geo[i, 1]), float(geo[i, 2]),
             float(t.banks[i]), kinds[i]) for i in range(len(t))]


def export_trajectory(t: GlidePath, frame: LocalFrame, fmt: str = "csv",
                      path: str | Path | None = None, properties: dict | None = None) -> str:
    """Render ``t`` as CSV or GeoJSON text; also written to ``path`` if given."""
    rows = trajectory_table(t, frame)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(TRAJECTORY_CSV_COLUMNS)
        for i, lat, lon, alt, bank, kind in rows:
            w.writerow([i, repr(lat), repr(lon), repr(alt), repr(bank), kind])
        text = buf.getvalue()
    elif fmt == "geojson":
        props = {
            "segments": [{"kind": s.kind, "length_ft": s.length, "bank_deg": s.bank,
                          "drag": s.drag.name} for s in t.segments],
            "bank_deg": [r[4] for r in rows],
            "segment_kind": [r[5] for r in rows],
            "start_alt_ft": t.start_alt,
            "end_alt_ft": t.end_alt,
        }
        props.update(properties or {})
        feature = {
            "type": "Feature",
            "geometry": {"type": "LineString",
                         "coordinates": [[lon, lat, alt] for _, lat, lon, alt, _, _ in rows]},
            "properties": props,
        }
        text = json.dumps(feature, indent=1) + "\n"
    else:
        raise ValueError(f"unknown trajectory format {fmt!r}")
    if path is not None:
        Path(path).write_text(text)
    return text


def read_trajectory_geojson(text: str) -> np.ndarray:
    """``(n, 3)`` lat, lon, alt from an exported GeoJSON LineString."""
    feature = json.loads(text)
    coords = np.asarray(feature["geometry"]["coordinates"], dtype=np.float64)
    return coords[:, [1, 0, 2]]


def read_trajectory_csv(text: str) -> np.ndarray:
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != TRAJECTORY_CSV_COLUMNS:
        raise SchemaError("not a trajectory CSV")
    return np.array([[float(r["lat"]), float(r["lon"]), float(r["alt_ft"])] for r in reader])


# --------------------------------------------------------------------------
# reports and timelines
# --------------------------------------------------------------------------

def _bank_str(bank: float) -> str:
    return f"{bank:g}"


def format_report(cs: CandidateSet, order: str = "rank") -> str:
    """Tab-separated ranking table (normalised metrics, utility, rank)."""
    entries = list(cs)
    if order == "key":
        entries.sort(key=lambda e: (e[1].runway_id, e[1].bank))
    lines = ["\t".join(REPORT_COLUMNS)]
    for _, rep in entries:
        cells = [rep.runway_id, _bank_str(rep.bank)]
        cells += [f"{rep.normalized[m]:.2f}" for _, m in _REPORT_METRICS]
        cells += [f"{rep.utility:.2f}", str(rep.rank)]
        lines.append("\t".join(cells))
    return "\n".join(lines) + "\n"


def format_raw_report(cs: CandidateSet) -> str:
    lines = ["\t".join(("Runway", "Bank angle", "word", "spirals", "extended_ft",
                        "z_avg_ft", "d_avg_ft", "theta_over_h", "turns", "length_ft",
                        "u", "Rank"))]
    for res, rep in cs:
        r = rep.raw
        lines.append("\t".join([
            rep.runway_id, _bank_str(rep.bank), res.word, str(res.spirals),
            f"{res.extended_final:.1f}", f"{r.avg_altitude:.1f}", f"{r.avg_distance:.1f}",
            f"{r.avg_bank_over_height:.6f}", str(r.turns), f"{r.length:.1f}",
            f"{rep.utility:.4f}", str(rep.rank)]))
    return "\n".join(lines) + "\n"


def format_event(ev: LoopEvent) -> str:
    if ev.kind == "estimate":
        e = ev.estimate
        return (f"t={ev.t:g}\testimate\tg_hat={e.g_hat:.3f}\tbank={e.bank:.1f}"
                f"\tdrag={e.drag.name}\twindow={e.window[0]:g}..{e.window[1]:g}")
    if ev.kind == "refine":
        return f"t={ev.t:g}\trefine\tg0={ev.old_g0:.3f}->{ev.new_g0:.3f}"
    if ev.kind == "replan":
        parts = [f"{rep.rank}:{rep.runway_id}@{_bank_str(rep.bank)}:u={rep.utility:.2f}"
                 for rep in ev.candidates.reports]
        return f"t={ev.t:g}\treplan\t" + (" ".join(parts) if parts else "none")
    raise ValueError(f"unknown event kind {ev.kind!r}")


def format_timeline(events: Sequence[LoopEvent]) -> str:
    return "".join(format_event(e) + "\n" for e in events)


def heading_table(model: PerformanceModel, banks=(0, 10, 20, 30, 45, 60)) -> list[tuple]:
    """(bank, glide ratio, radius or inf) rows for the clean configuration."""
    from .performance import glide_ratio, turn_radius

    rows = []
    for b in banks:
        g = glide_ratio(model, b)
        r = math.inf if b == 0 else turn_radius(b, model.best_glide_speed)
        rows.append((float(b), g, r))
    return rows
