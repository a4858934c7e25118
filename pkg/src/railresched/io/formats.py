"""Tab-separated, section-based text formats.

Each file is a list of ``[section]`` headers followed by tab-separated rows.
Blank lines and lines starting with ``#`` are ignored.  Times are written
``HH:MM`` where the hour may exceed 23 for movements past midnight.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from ..constraints.priority import PriorityPolicy
from ..exceptions import NonMonotoneItinerary, ParseError, UnknownStation
from ..network import (
    Category,
    Direction,
    RailwayNetwork,
    ScheduleEntry,
    Station,
    Timetable,
    TrackSegment,
    Train,
    build_network,
)
from ..petri import ColourRule, Marking, PetriNet
from ..rescheduler.recovery import DisasterEvent, RecoveryModel

DATA_DIR = Path(__file__).resolve().parent.parent / "data"
BUNDLED = "bundled:"


# ----- low level -----------------------------------------------------------------

Row = Tuple[int, List[str]]  # (line number, cells)


def read_sections(text: str, path=None, allowed: Optional[Sequence[str]] = None) -> List[Tuple[str, List[Row]]]:
    """Split into ``(section, rows)`` pairs, keeping repeated sections apart."""
    out: List[Tuple[str, List[Row]]] = []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        if line.startswith("[") and line.rstrip().endswith("]"):
            name = line.strip()[1:-1].strip().lower()
            if allowed is not None and name not in allowed:
                raise ParseError(f"unknown section [{name}]", no, 1, path)
            out.append((name, []))
            continue
        if not out:
            raise ParseError("row outside of any section", no, 1, path)
        out[-1][1].append((no, line.split("\t")))
    return out


def _section(sections, name) -> List[Row]:
    rows: List[Row] = []
    for n, r in sections:
        if n == name:
            rows += r
    return rows


def _int(cell: str, no: int, col: int, path, what: str) -> int:
    try:
        return int(cell.strip())
    except ValueError:
        raise ParseError(f"{what} must be an integer, got {cell!r}", no, col, path) from None


def _need(cells: List[str], n: int, no: int, path, what: str):
    if len(cells) < n:
        raise ParseError(f"{what} needs {n} fields, got {len(cells)}", no, len(cells) + 1, path)


def parse_hhmm(cell: str, no: int = None, col: int = None, path=None) -> int:
    s = cell.strip()
    hh, sep, mm = s.partition(":")
    if not sep or not hh.isdigit() or not mm.isdigit() or len(mm) != 2 or int(mm) > 59:
        raise ParseError(f"time must be HH:MM, got {cell!r}", no, col, path)
    return int(hh) * 60 + int(mm)


def format_hhmm(minutes: int) -> str:
    if minutes < 0:
        raise ValueError("negative time")
    return f"{minutes // 60:02d}:{minutes % 60:02d}"


def _read(path) -> str:
    return Path(path).read_text(encoding="utf-8")


def resolve(ref: str, base: Optional[Path] = None) -> Path:
    """Resolve a file reference; ``bundled:x`` points into the package data."""
    if ref.startswith(BUNDLED):
        return DATA_DIR / ref[len(BUNDLED):]
    p = Path(ref)
    if not p.is_absolute() and base is not None:
        p = base / p
    return p


# ----- network ---------------------------------------------------------------------

_TRUE = {"yes", "y", "true", "1"}
_FALSE = {"no", "n", "false", "0", ""}


def parse_network_text(text: str, path=None) -> RailwayNetwork:
    secs = read_sections(text, path, ("stations", "tracks"))
    stations, tracks = [], []
    for no, cells in _section(secs, "stations"):
        _need(cells, 3, no, path, "station row")
        flag = cells[3].strip().lower() if len(cells) > 3 else ""
        if flag not in _TRUE | _FALSE:
            raise ParseError(f"junction flag must be yes/no, got {cells[3]!r}", no, 4, path)
        stations.append(Station(_int(cells[0], no, 1, path, "station id"), cells[1].strip(),
                                _int(cells[2], no, 3, path, "platform count"), flag in _TRUE))
    for no, cells in _section(secs, "tracks"):
        _need(cells, 5, no, path, "track row")
        role = cells[3].strip().upper()
        if role not in Direction.__members__:
            raise ParseError(f"track role must be UP, DOWN or GENERAL, got {cells[3]!r}", no, 4, path)
        tracks.append(TrackSegment(_int(cells[0], no, 1, path, "track id"),
                                   (cells[1].strip(), cells[2].strip()), Direction[role],
                                   _int(cells[4], no, 5, path, "journey time")))
    return build_network(stations, tracks)


def parse_network_file(path) -> RailwayNetwork:
    return parse_network_text(_read(path), path)


def serialize_network(net: RailwayNetwork) -> str:
    lines = ["[stations]", "# id\tcode\tplatforms\tjunction"]
    for st in sorted(net.stations.values(), key=lambda s: s.id):
        lines.append(f"{st.id}\t{st.code}\t{st.platform_count}\t{'yes' if st.is_junction else 'no'}")
    lines += ["", "[tracks]", "# id\tfrom\tto\trole\tjourney"]
    for tr in sorted(net.tracks.values(), key=lambda t: t.id):
        a, b = tr.endpoints
        lines.append(f"{tr.id}\t{a}\t{b}\t{tr.direction_role.value}\t{tr.journey_time}")
    return "\n".join(lines) + "\n"


# ----- timetable -------------------------------------------------------------------

_CATEGORIES = {c.value.lower(): c for c in Category}


def parse_timetable_text(text: str, net: Optional[RailwayNetwork] = None, path=None) -> Timetable:
    secs = read_sections(text, path, ("trains", "schedule"))
    trains: Dict[str, Train] = {}
    for no, cells in _section(secs, "trains"):
        _need(cells, 2, no, path, "train row")
        number = cells[0].strip()
        cat = _CATEGORIES.get(cells[1].strip().lower())
        if cat is None:
            raise ParseError(f"unknown category {cells[1]!r}", no, 2, path)
        if number in trains:
            raise ParseError(f"train {number} listed twice", no, 1, path)
        name = cells[2].strip() if len(cells) > 2 else ""
        trains[number] = Train(len(trains) + 1, number, cat, name)
    entries: List[ScheduleEntry] = []
    last: Dict[str, Tuple[str, int]] = {}
    for no, cells in _section(secs, "schedule"):
        _need(cells, 4, no, path, "schedule row")
        number, station = cells[0].strip(), cells[1].strip()
        if number not in trains:
            raise ParseError(f"train {number} is not in the roster", no, 1, path)
        if net is not None and station not in net.stations:
            raise UnknownStation(f"{station} (line {no})")
        o_AT = parse_hhmm(cells[2], no, 3, path)
        o_DT = parse_hhmm(cells[3], no, 4, path)
        if o_DT < o_AT:
            raise NonMonotoneItinerary(f"departure {cells[3]} before arrival {cells[2]}", no, 4, path)
        if number in last and o_AT < last[number][1]:
            raise NonMonotoneItinerary(f"train {number} arrives at {station} before leaving "
                                       f"{last[number][0]}", no, 3, path)
        track = None
        if len(cells) > 4 and cells[4].strip() not in ("", "-"):
            track = _int(cells[4], no, 5, path, "track id")
        entries.append(ScheduleEntry(number, station, o_AT, o_DT, track=track))
        last[number] = (station, o_DT)
    return Timetable(trains.values(), entries)


def parse_timetable_file(path, net: Optional[RailwayNetwork] = None) -> Timetable:
    return parse_timetable_text(_read(path), net, path)


def serialize_timetable(tt: Timetable) -> str:
    lines = ["[trains]", "# number\tcategory\tname"]
    for n in tt.ordered_trains():
        t = tt.trains[n]
        lines.append(f"{t.number}\t{t.category.value}\t{t.name}")
    lines += ["", "[schedule]", "# train\tstation\tarrival\tdeparture\ttrack"]
    for n in tt.ordered_trains():
        for e in tt.itinerary(n):
            track = "-" if e.track is None else str(e.track)
            lines.append(f"{n}\t{e.station}\t{format_hhmm(e.o_AT)}\t{format_hhmm(e.o_DT)}\t{track}")
    return "\n".join(lines) + "\n"


# ----- scenario --------------------------------------------------------------------

@dataclass
class ScenarioSpec:
    id: str
    network_file: str
    timetable_file: str
    seed: int
    events: List[DisasterEvent] = field(default_factory=list)
    policy: PriorityPolicy = field(default_factory=PriorityPolicy)
    horizon: Optional[int] = None
    headway: int = 5
    min_dwell: int = 1
    baseline_levels: int = 2
    baseline_latency: int = 3
    base_dir: Optional[Path] = field(default=None, compare=False)

    def network_path(self) -> Path:
        return resolve(self.network_file, self.base_dir)

    def timetable_path(self) -> Path:
        return resolve(self.timetable_file, self.base_dir)

    def load(self) -> Tuple[RailwayNetwork, Timetable]:
        for p in (self.network_path(), self.timetable_path()):
            if not p.exists():
                raise ParseError(f"referenced file {p} does not exist")
        net = parse_network_file(self.network_path())
        return net, parse_timetable_file(self.timetable_path(), net)


_SCENARIO_INT = ("seed", "horizon", "headway", "min_dwell", "baseline_levels", "baseline_latency")


def parse_scenario_text(text: str, path=None) -> ScenarioSpec:
    secs = read_sections(text, path, ("scenario", "policy", "event"))
    kv: Dict[str, str] = {}
    for no, cells in _section(secs, "scenario"):
        _need(cells, 2, no, path, "scenario setting")
        key = cells[0].strip().lower()
        if key not in ("id", "network", "timetable") + _SCENARIO_INT:
            raise ParseError(f"unknown setting {cells[0]!r}", no, 1, path)
        kv[key] = cells[1].strip()
        if key in _SCENARIO_INT:
            _int(cells[1], no, 2, path, key)
    for req in ("id", "network", "timetable", "seed"):
        if req not in kv:
            raise ParseError(f"scenario setting {req!r} is required", None, None, path)

    windows, threshold = [], None
    for no, cells in _section(secs, "policy"):
        key = cells[0].strip().lower()
        if key == "busy_window":
            _need(cells, 3, no, path, "busy_window")
            windows.append((parse_hhmm(cells[1], no, 2, path), parse_hhmm(cells[2], no, 3, path)))
        elif key == "delay_threshold":
            _need(cells, 2, no, path, "delay_threshold")
            threshold = _int(cells[1], no, 2, path, "delay threshold")
        else:
            raise ParseError(f"unknown policy setting {cells[0]!r}", no, 1, path)
    pol_kw = {}
    if windows:
        pol_kw["busy_windows"] = tuple(windows)
    if threshold is not None:
        pol_kw["delay_threshold"] = threshold
    try:
        policy = PriorityPolicy(**pol_kw)
    except ValueError as exc:
        raise ParseError(str(exc), None, None, path) from None

    events = []
    for i, (name, rows) in enumerate(s for s in secs if s[0] == "event"):
        events.append(_parse_event(rows, path, f"E{len(events) + 1}"))
    ints = {k: int(kv[k]) for k in _SCENARIO_INT if k in kv}
    return ScenarioSpec(kv["id"], kv["network"], kv["timetable"], events=events, policy=policy,
                        base_dir=Path(path).resolve().parent if path else None, **ints)


def _parse_event(rows: List[Row], path, default_id: str) -> DisasterEvent:
    ev_id, t_D, plats, tracks, rec = default_id, None, set(), set(), None
    first = rows[0][0] if rows else None
    for no, cells in rows:
        key = cells[0].strip().lower()
        if key == "id":
            ev_id = cells[1].strip()
        elif key == "time":
            t_D = parse_hhmm(cells[1], no, 2, path)
        elif key == "platforms":
            for col, c in enumerate(cells[1:], start=2):
                st, sep, k = c.strip().partition(":")
                if not sep:
                    raise ParseError(f"platform must be CODE:k, got {c!r}", no, col, path)
                plats.add((st, _int(k, no, col, path, "platform index")))
        elif key == "tracks":
            tracks |= {_int(c, no, col, path, "track id") for col, c in enumerate(cells[1:], start=2)}
        elif key == "recovery":
            _need(cells, 4, no, path, "recovery")
            try:
                rec = RecoveryModel(_int(cells[2], no, 3, path, "tau1"), _int(cells[3], no, 4, path, "tau2"),
                                    cells[1].strip().lower())
            except Exception as exc:
                raise ParseError(str(exc), no, 2, path) from None
        else:
            raise ParseError(f"unknown event setting {cells[0]!r}", no, 1, path)
    if t_D is None or rec is None:
        raise ParseError("event needs a time and a recovery", first, None, path)
    try:
        return DisasterEvent(t_D, frozenset(plats), frozenset(tracks), rec, ev_id)
    except ValueError as exc:
        raise ParseError(str(exc), first, None, path) from None


def parse_scenario_file(path) -> ScenarioSpec:
    return parse_scenario_text(_read(path), path)


def serialize_scenario(spec: ScenarioSpec) -> str:
    lines = ["[scenario]", f"id\t{spec.id}", f"network\t{spec.network_file}",
             f"timetable\t{spec.timetable_file}", f"seed\t{spec.seed}"]
    if spec.horizon is not None:
        lines.append(f"horizon\t{spec.horizon}")
    lines += [f"headway\t{spec.headway}", f"min_dwell\t{spec.min_dwell}",
              f"baseline_levels\t{spec.baseline_levels}", f"baseline_latency\t{spec.baseline_latency}",
              "", "[policy]"]
    for s, e in spec.policy.busy_windows:
        lines.append(f"busy_window\t{format_hhmm(s)}\t{format_hhmm(e)}")
    lines.append(f"delay_threshold\t{spec.policy.delay_threshold}")
    for ev in spec.events:
        lines += ["", "[event]", f"id\t{ev.id}", f"time\t{format_hhmm(ev.t_D)}"]
        if ev.blocked_platforms:
            lines.append("platforms\t" + "\t".join(f"{s}:{k}" for s, k in sorted(ev.blocked_platforms)))
        if ev.blocked_tracks:
            lines.append("tracks\t" + "\t".join(str(t) for t in sorted(ev.blocked_tracks)))
        r = ev.recovery
        lines.append(f"recovery\t{r.density}\t{r.tau1}\t{r.tau2}")
    return "\n".join(lines) + "\n"


def bundled_scenarios() -> List[Path]:
    return sorted((DATA_DIR / "scenarios").glob("*.scn"))


def find_scenario(ref: str) -> Path:
    """A scenario path, or the name of a bundled scenario (with or without ``.scn``)."""
    p = Path(ref)
    if p.exists():
        return p
    name = ref if ref.endswith(".scn") else ref + ".scn"
    cand = DATA_DIR / "scenarios" / name
    if cand.exists():
        return cand
    raise ParseError(f"no scenario file or bundled scenario named {ref!r}")


# ----- petri nets ------------------------------------------------------------------

_INPUT_VALUES = {"true": True, "false": False, "open": None}


def parse_petri_text(text: str, path=None) -> Tuple[PetriNet, Marking]:
    secs = read_sections(text, path, ("net", "places", "transitions", "arcs", "guards",
                                      "rules", "inputs", "marking"))
    name = ""
    for no, cells in _section(secs, "net"):
        if cells[0].strip().lower() == "name" and len(cells) > 1:
            name = cells[1].strip()
    places = []
    for no, cells in _section(secs, "places"):
        _need(cells, 2, no, path, "place row")
        places.append((cells[0].strip(), cells[1].strip()))
    transitions = []
    for no, cells in _section(secs, "transitions"):
        _need(cells, 2, no, path, "transition row")
        transitions.append((cells[0].strip(), cells[1].strip()))
    pids = {p for p, _ in places}
    tids = {t for t, _ in transitions}
    ins, outs = [], []
    for no, cells in _section(secs, "arcs"):
        _need(cells, 2, no, path, "arc row")
        a, b = cells[0].strip(), cells[1].strip()
        if a in pids and b in tids:
            ins.append((a, b))
        elif a in tids and b in pids:
            outs.append((a, b))
        else:
            raise ParseError(f"arc {a} -> {b} must join a place and a transition", no, 1, path)
    guards = {}
    for no, cells in _section(secs, "guards"):
        _need(cells, 2, no, path, "guard row")
        guards[cells[0].strip()] = frozenset(c.strip() for c in cells[1:] if c.strip())
    rules = {}
    for no, cells in _section(secs, "rules"):
        _need(cells, 3, no, path, "rule row")
        f = cells[3].strip() if len(cells) > 3 else "-"
        rules[cells[0].strip()] = ColourRule(cells[1].strip(), cells[2].strip(), None if f == "-" else f)
    inputs = {}
    for no, cells in _section(secs, "inputs"):
        _need(cells, 2, no, path, "input row")
        v = cells[1].strip().lower()
        if v not in _INPUT_VALUES:
            raise ParseError(f"input must be true, false or open, got {cells[1]!r}", no, 2, path)
        inputs[cells[0].strip()] = _INPUT_VALUES[v]
    counts = None
    for no, cells in _section(secs, "marking"):
        counts = tuple(_int(c, no, i + 1, path, "token count") for i, c in enumerate(cells))
    try:
        net = PetriNet(places, transitions, ins, outs, rules, guards, inputs, name)
    except Exception as exc:
        raise ParseError(str(exc), None, None, path) from None
    if counts is None:
        raise ParseError("a [marking] section is required", None, None, path)
    return net, net.marking(counts)


def parse_petri_file(path) -> Tuple[PetriNet, Marking]:
    return parse_petri_text(_read(path), path)


def serialize_petri(net: PetriNet, m0: Marking) -> str:
    lines = ["[net]", f"name\t{net.name}", "", "[places]"]
    lines += [f"{p}\t{k}" for p, k in net.places]
    lines += ["", "[transitions]"] + [f"{t}\t{k}" for t, k in net.transitions]
    lines += ["", "[arcs]"] + [f"{a}\t{b}" for a, b in net.input_arcs] + [f"{a}\t{b}" for a, b in net.output_arcs]
    if net.guards:
        lines += ["", "[guards]"]
        lines += [f"{t}\t" + "\t".join(sorted(g)) for t, g in net.guards.items()]
    if net.colour_rules:
        lines += ["", "[rules]"]
        for p, r in net.colour_rules.items():
            lines.append(f"{p}\t{r.input}\t{r.when_true}\t{r.when_false or '-'}")
    if net.inputs:
        lines += ["", "[inputs]"]
        for k, v in net.inputs.items():
            lines.append(f"{k}\t{'open' if v is None else str(v).lower()}")
    lines += ["", "[marking]", "\t".join(str(c) for c in m0.counts)]
    return "\n".join(lines) + "\n"
