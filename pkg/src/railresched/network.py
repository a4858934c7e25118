"""Railway multigraph, train roster and static timetable.

Times are integer minutes since midnight of day 0.  Stations are referred to
by their short code and trains by their number everywhere outside this
module; the integer ids only serve as deterministic tie-breakers.
"""
from __future__ import annotations

import copy
import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import networkx as nx

from .exceptions import (
    DanglingTrackEndpoint,
    DisconnectedGraph,
    DuplicateStationId,
    InvalidNetwork,
    NoRouteExists,
    UnknownStation,
    UnknownTrain,
)

MAX_PLATFORMS = 6
MAX_PARALLEL_TRACKS = 4


class Direction(str, Enum):
    UP = "UP"
    DOWN = "DOWN"
    GENERAL = "GENERAL"


class Category(str, Enum):
    PREMIUM = "Premium"
    MAIL = "Mail"
    FREIGHT = "Freight"
    PASSENGER = "Passenger"
    LOCAL = "Local"

    @property
    def level(self) -> int:
        return CATEGORY_LEVEL[self]

    @property
    def long_distance(self) -> bool:
        return self in (Category.PREMIUM, Category.MAIL, Category.FREIGHT)


# y1..y5, stored as the integer suffix
CATEGORY_LEVEL = {
    Category.PREMIUM: 1,
    Category.MAIL: 2,
    Category.FREIGHT: 3,
    Category.PASSENGER: 4,
    Category.LOCAL: 5,
}


@dataclass(frozen=True)
class Station:
    id: int
    code: str
    platform_count: int
    is_junction: bool = False


@dataclass(frozen=True)
class TrackSegment:
    id: int
    endpoints: Tuple[str, str]
    direction_role: Direction
    journey_time: int

    def other_end(self, code: str) -> str:
        a, b = self.endpoints
        if code == a:
            return b
        if code == b:
            return a
        raise ValueError(f"{code} is not an endpoint of track {self.id}")


@dataclass(frozen=True)
class Train:
    id: int
    number: str
    category: Category
    name: str = ""

    @property
    def level(self) -> int:
        return self.category.level

    @property
    def long_distance(self) -> bool:
        return self.category.long_distance


@dataclass
class ScheduleEntry:
    """One station visit of one train.

    ``track`` is the track used to leave this station towards the next entry
    of the same train (``None`` at the terminal).  The ``x_*`` fields start as
    copies of the original ``o_*`` fields and are the only mutable part.
    """

    train: str
    station: str
    o_AT: int
    o_DT: int
    x_AT: Optional[int] = None
    x_DT: Optional[int] = None
    platform: Optional[int] = None
    track: Optional[int] = None

    def __post_init__(self):
        if self.x_AT is None:
            self.x_AT = self.o_AT
        if self.x_DT is None:
            self.x_DT = self.o_DT

    @property
    def o_dwell(self) -> int:
        return self.o_DT - self.o_AT

    @property
    def x_dwell(self) -> int:
        return self.x_DT - self.x_AT

    @property
    def stopping(self) -> bool:
        return self.o_dwell > 0

    @property
    def delay(self) -> int:
        return self.x_AT - self.o_AT


@dataclass(frozen=True)
class Violation:
    rule: str
    train: Optional[str]
    location: object = None
    time: Optional[int] = None
    other: Optional[str] = None
    detail: str = ""

    def key(self):
        trains = tuple(sorted(t for t in (self.train, self.other) if t is not None))
        return (self.rule, trains, self.location)


@dataclass(frozen=True)
class Route:
    """Alternating platform / track occupancy steps, ending on a platform."""

    steps: Tuple[Tuple[str, object], ...]
    total_journey: int = 0

    @property
    def stations(self) -> Tuple[str, ...]:
        return tuple(v for kind, v in self.steps if kind == "P")

    @property
    def tracks(self) -> Tuple[int, ...]:
        return tuple(v for kind, v in self.steps if kind == "L")

    def __str__(self):
        return " ".join(f"{k}_{v}" for k, v in self.steps)


class RailwayNetwork:
    """Connected multigraph of stations and (possibly parallel) tracks."""

    def __init__(self, stations: Dict[str, Station], tracks: Dict[int, TrackSegment]):
        self.stations = stations
        self.tracks = tracks
        self.adjacency: Dict[str, set] = {code: set() for code in stations}
        for tr in tracks.values():
            a, b = tr.endpoints
            self.adjacency[a].add((b, tr.id))
            self.adjacency[b].add((a, tr.id))

    def __repr__(self):
        return f"RailwayNetwork({len(self.stations)} stations, {len(self.tracks)} tracks)"

    def station(self, code: str) -> Station:
        try:
            return self.stations[code]
        except KeyError:
            raise UnknownStation(code) from None

    def track(self, track_id: int) -> TrackSegment:
        try:
            return self.tracks[track_id]
        except KeyError:
            raise InvalidNetwork(f"unknown track {track_id}") from None

    def platforms(self, code: str) -> int:
        return self.station(code).platform_count

    def neighbors(self, code: str) -> List[str]:
        return sorted({nb for nb, _ in self.adjacency[code]}, key=lambda c: self.stations[c].id)

    def tracks_between(self, a: str, b: str, directed: bool = True) -> List[TrackSegment]:
        """Tracks joining ``a`` and ``b``; with ``directed`` only those usable a->b."""
        out = [self.tracks[t] for nb, t in self.adjacency[a] if nb == b]
        if directed:
            out = [t for t in out if self.usable(t, a, b)]
        return sorted(out, key=lambda t: t.id)

    def usable(self, track: TrackSegment, frm: str, to: str) -> bool:
        # UP runs towards the higher station id, DOWN towards the lower one
        if set(track.endpoints) != {frm, to}:
            return False
        if track.direction_role is Direction.GENERAL:
            return True
        up = self.stations[frm].id < self.stations[to].id
        return up == (track.direction_role is Direction.UP)

    def default_track(self, a: str, b: str) -> Optional[TrackSegment]:
        cands = self.tracks_between(a, b)
        return cands[0] if cands else None


def build_network(stations: Sequence[Station], tracks: Sequence[TrackSegment]) -> RailwayNetwork:
    if not stations:
        raise InvalidNetwork("station list is empty")
    by_code: Dict[str, Station] = {}
    ids = set()
    for st in stations:
        if st.code in by_code or st.id in ids:
            raise DuplicateStationId(f"duplicate station {st.code!r} (id {st.id})")
        if not 1 <= st.platform_count <= MAX_PLATFORMS:
            raise InvalidNetwork(
                f"station {st.code}: platform_count must be in 1..{MAX_PLATFORMS}, got {st.platform_count}"
            )
        by_code[st.code] = st
        ids.add(st.id)
    by_id: Dict[int, TrackSegment] = {}
    for tr in tracks:
        a, b = tr.endpoints
        for end in (a, b):
            if end not in by_code:
                raise DanglingTrackEndpoint(f"track {tr.id} references unknown station {end!r}")
        if a == b:
            raise InvalidNetwork(f"track {tr.id} is a self-loop at {a}")
        if tr.journey_time <= 0:
            raise InvalidNetwork(f"track {tr.id}: journey_time must be positive")
        if tr.id in by_id:
            raise InvalidNetwork(f"duplicate track id {tr.id}")
        by_id[tr.id] = tr
    net = RailwayNetwork(by_code, by_id)
    seen = _reachable(net, stations[0].code)
    if len(seen) != len(by_code):
        missing = sorted(set(by_code) - seen, key=lambda c: by_code[c].id)
        raise DisconnectedGraph(f"stations unreachable from {stations[0].code}: {', '.join(missing)}")
    return net


def _reachable(net: RailwayNetwork, start: str) -> set:
    seen = {start}
    stack = [start]
    while stack:
        cur = stack.pop()
        for nb, _ in net.adjacency[cur]:
            if nb not in seen:
                seen.add(nb)
                stack.append(nb)
    return seen


def route_key(net: RailwayNetwork, route: Route):
    return tuple(net.stations[v].id if k == "P" else v for k, v in route.steps)


def _expand(net: RailwayNetwork, path: Sequence[str], avoid_tracks) -> Iterator[Route]:
    hops = []
    for a, b in zip(path, path[1:]):
        cands = [t for t in net.tracks_between(a, b) if t.id not in avoid_tracks]
        if not cands:
            return
        hops.append(cands)
    for combo in itertools.product(*hops):
        steps: List[Tuple[str, object]] = []
        for st, tr in zip(path, combo):
            steps += [("P", st), ("L", tr.id)]
        steps.append(("P", path[-1]))
        yield Route(tuple(steps), sum(t.journey_time for t in combo))


def enumerate_routes(
    net: RailwayNetwork,
    origin: str,
    dest: str,
    max_routes: int = 3,
    avoid_tracks: Iterable[int] = (),
    avoid_stations: Iterable[str] = (),
) -> List[Route]:
    """Up to ``max_routes`` loop-free routes, shortest total journey first.

    Station sequences come from Yen's algorithm on the collapsed simple graph;
    each is then expanded over its parallel tracks.  Expansion continues until
    the next station sequence cannot beat the current k-th best route.
    """
    net.station(origin)
    net.station(dest)
    if origin == dest:
        raise ValueError("origin and destination must differ")
    avoid_tracks = set(avoid_tracks)
    avoid_stations = set(avoid_stations) - {origin, dest}

    g = nx.DiGraph()
    g.add_nodes_from(c for c in net.stations if c not in avoid_stations)
    for tr in net.tracks.values():
        if tr.id in avoid_tracks:
            continue
        a, b = tr.endpoints
        if a in avoid_stations or b in avoid_stations:
            continue
        for frm, to in ((a, b), (b, a)):
            if net.usable(tr, frm, to):
                w = g.edges[frm, to]["weight"] if g.has_edge(frm, to) else None
                if w is None or tr.journey_time < w:
                    g.add_edge(frm, to, weight=tr.journey_time)

    found: List[Route] = []
    try:
        for path in nx.shortest_simple_paths(g, origin, dest, weight="weight"):
            lower = nx.path_weight(g, path, "weight")
            if len(found) >= max_routes:
                found.sort(key=lambda r: (r.total_journey, route_key(net, r)))
                if lower > found[max_routes - 1].total_journey:
                    break
            found.extend(_expand(net, path, avoid_tracks))
    except (nx.NetworkXNoPath, nx.NodeNotFound):
        pass
    if not found:
        raise NoRouteExists(f"no route from {origin} to {dest}")
    found.sort(key=lambda r: (r.total_journey, route_key(net, r)))
    return found[:max_routes]


class Timetable:
    """Train roster plus the schedule entries of every train."""

    def __init__(self, trains: Iterable[Train], entries: Iterable[ScheduleEntry]):
        self.trains: Dict[str, Train] = {}
        for t in trains:
            self.trains[t.number] = t
        self.entries: List[ScheduleEntry] = list(entries)

    def __repr__(self):
        return f"Timetable({len(self.trains)} trains, {len(self.entries)} entries)"

    def __len__(self):
        return len(self.entries)

    def train(self, number: str) -> Train:
        try:
            return self.trains[number]
        except KeyError:
            raise UnknownTrain(number) from None

    def itinerary(self, number: str) -> List[ScheduleEntry]:
        return [e for e in self.entries if e.train == number]

    def itineraries(self) -> Dict[str, List[ScheduleEntry]]:
        out: Dict[str, List[ScheduleEntry]] = {n: [] for n in self.trains}
        for e in self.entries:
            out.setdefault(e.train, []).append(e)
        return out

    def ordered_trains(self) -> List[str]:
        return sorted(self.trains, key=lambda n: self.trains[n].id)

    def copy(self) -> "Timetable":
        return Timetable(self.trains.values(), [copy.copy(e) for e in self.entries])

    def entry(self, train: str, station: str) -> ScheduleEntry:
        for e in self.entries:
            if e.train == train and e.station == station:
                return e
        raise KeyError((train, station))

    def horizon_end(self) -> int:
        return max((max(e.x_DT, e.o_DT) for e in self.entries), default=0)


def leg_track(net: RailwayNetwork, prev: ScheduleEntry, nxt: ScheduleEntry) -> Optional[TrackSegment]:
    if prev.track is not None:
        tr = net.tracks.get(prev.track)
        if tr is not None and set(tr.endpoints) == {prev.station, nxt.station}:
            return tr
        return None
    return net.default_track(prev.station, nxt.station)


def validate_timetable(net: RailwayNetwork, timetable: Timetable) -> List[Violation]:
    """Static checks: dwell non-negative and planned continuity between stops."""
    for e in timetable.entries:
        timetable.train(e.train)
        net.station(e.station)
    out: List[Violation] = []
    for number in timetable.ordered_trains():
        legs = timetable.itinerary(number)
        for e in legs:
            if e.o_DT < e.o_AT:
                out.append(Violation("dwell", number, e.station, e.o_AT, detail="o_DT < o_AT"))
        for prev, nxt in zip(legs, legs[1:]):
            tr = leg_track(net, prev, nxt)
            if tr is None:
                out.append(Violation("adjacency", number, nxt.station, nxt.o_AT,
                                     detail=f"no usable track {prev.station}->{nxt.station}"))
                continue
            if nxt.o_AT < prev.o_DT + tr.journey_time:
                out.append(Violation("continuity", number, nxt.station, nxt.o_AT,
                                     detail=f"{nxt.o_AT} < {prev.o_DT} + {tr.journey_time}"))
    return out
