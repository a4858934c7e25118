"""Platform (P_jik) and track (L_jil) occupancy, as snapshots and as timelines.

Occupancy intervals are half-open: a train holds its platform over
``[x_AT, x_DT)`` and the track to the next station over ``[x_DT, x_AT')``.
A zero-dwell pass holds its platform for no time: snapshots leave it out,
but capacity checks at an arrival instant still count it as present.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Tuple

from ..network import RailwayNetwork, ScheduleEntry, Timetable, leg_track


class Blockage(NamedTuple):
    """A resource unusable over ``[start, end)``.

    ``kind`` is ``"platform"`` (``ref`` = ``(station, k)``) or ``"track"``
    (``ref`` = track id).
    """

    kind: str
    ref: object
    start: int
    end: int

    def active(self, t: int) -> bool:
        return self.start <= t < self.end


class Resource(NamedTuple):
    kind: str  # "platform" or "track"
    station: str
    index: int  # platform k or track l

    def __str__(self):
        return f"{'P' if self.kind == 'platform' else 'L'}({self.station},{self.index})"


@dataclass(frozen=True)
class OccupancyState:
    """Indicator families at one instant; only the 1-entries are stored."""

    platform_occ: FrozenSet[Tuple[str, str, int]] = frozenset()
    track_occ: FrozenSet[Tuple[str, str, int]] = frozenset()
    blocked_platforms: FrozenSet[Tuple[str, int]] = frozenset()
    blocked_tracks: FrozenSet[int] = frozenset()
    # trains present at a station without a platform index yet
    unassigned: FrozenSet[Tuple[str, str]] = frozenset()

    def P(self, train: str, station: str, k: int) -> int:
        return int((train, station, k) in self.platform_occ)

    def L(self, train: str, station: str, l: int) -> int:
        return int((train, station, l) in self.track_occ)

    def trains_at(self, station: str) -> List[str]:
        out = [j for j, i, _ in self.platform_occ if i == station]
        out += [j for j, i in self.unassigned if i == station]
        return sorted(out)

    def occupied_platforms(self, station: str) -> set:
        return {k for _, i, k in self.platform_occ if i == station}

    def free_platforms(self, station: str, p: int) -> List[int]:
        taken = self.occupied_platforms(station) | {k for i, k in self.blocked_platforms if i == station}
        free = [k for k in range(1, p + 1) if k not in taken]
        # unindexed occupants still consume capacity
        n_unassigned = sum(1 for _, i in self.unassigned if i == station)
        return free[n_unassigned:]

    def track_users(self, track: int) -> List[str]:
        return sorted(j for j, _, l in self.track_occ if l == track)

    def track_free(self, track: int) -> bool:
        return not self.track_users(track) and track not in self.blocked_tracks

    def with_platform(self, train: str, station: str, k: int) -> "OccupancyState":
        return OccupancyState(self.platform_occ | {(train, station, k)}, self.track_occ,
                              self.blocked_platforms, self.blocked_tracks, self.unassigned)

    def with_track(self, train: str, station: str, l: int) -> "OccupancyState":
        return OccupancyState(self.platform_occ, self.track_occ | {(train, station, l)},
                              self.blocked_platforms, self.blocked_tracks, self.unassigned)


@dataclass
class Interval:
    train: str
    resource: Resource
    start: int
    end: int
    entry: Optional[ScheduleEntry] = None

    @property
    def point(self) -> bool:
        return self.start == self.end

    def covers(self, t: int) -> bool:
        if self.point:
            return t == self.start
        return self.start <= t < self.end


def platform_intervals(timetable: Timetable) -> List[Interval]:
    out = []
    for e in timetable.entries:
        k = e.platform if e.platform is not None else 0
        out.append(Interval(e.train, Resource("platform", e.station, k), e.x_AT, max(e.x_DT, e.x_AT), e))
    return out


def track_intervals(net: RailwayNetwork, timetable: Timetable) -> List[Interval]:
    out = []
    for number, legs in timetable.itineraries().items():
        for prev, nxt in zip(legs, legs[1:]):
            tr = leg_track(net, prev, nxt)
            if tr is None:
                continue
            out.append(Interval(number, Resource("track", nxt.station, tr.id), prev.x_DT, nxt.x_AT, prev))
    return out


def blocked_platform_count(blockages: Iterable[Blockage], station: str, t: int) -> int:
    return sum(1 for b in blockages if b.kind == "platform" and b.ref[0] == station and b.active(t))


def assign_platforms(net: RailwayNetwork, timetable: Timetable, blockages: Iterable[Blockage] = ()) -> None:
    """Give every entry the lowest platform index free at its arrival instant."""
    blockages = list(blockages)
    by_station: Dict[str, List[ScheduleEntry]] = {}
    for e in timetable.entries:
        by_station.setdefault(e.station, []).append(e)
    order = {n: net.stations[n].id for n in net.stations}
    for station in sorted(by_station, key=order.get):
        p = net.platforms(station)
        visits = sorted(by_station[station], key=lambda e: (e.x_AT, timetable.trains[e.train].id))
        placed: List[ScheduleEntry] = []
        for e in visits:
            t = e.x_AT
            taken = set()
            for o in placed:
                if o.platform is None:
                    continue
                if (o.x_AT <= t < o.x_DT) or (o.x_AT == o.x_DT == t):
                    taken.add(o.platform)
            taken |= {b.ref[1] for b in blockages
                      if b.kind == "platform" and b.ref[0] == station and b.active(t)}
            free = [k for k in range(1, p + 1) if k not in taken]
            e.platform = free[0] if free else None
            placed.append(e)


class OccupancyTimeline:
    """Time-indexed view of a schedule's resource usage."""

    def __init__(self, net: RailwayNetwork, timetable: Timetable, blockages: Iterable[Blockage] = ()):
        self.net = net
        self.timetable = timetable
        self.blockages = list(blockages)
        self.platforms = platform_intervals(timetable)
        self.tracks = track_intervals(net, timetable)

    def at(self, t: int) -> OccupancyState:
        pocc, unassigned, tocc = set(), set(), set()
        for iv in self.platforms:
            if not iv.point and iv.covers(t):
                if iv.resource.index:
                    pocc.add((iv.train, iv.resource.station, iv.resource.index))
                else:
                    unassigned.add((iv.train, iv.resource.station))
        for iv in self.tracks:
            if iv.start <= t < iv.end:
                tocc.add((iv.train, iv.resource.station, iv.resource.index))
        bp = {b.ref for b in self.blockages if b.kind == "platform" and b.active(t)}
        bt = {b.ref for b in self.blockages if b.kind == "track" and b.active(t)}
        return OccupancyState(frozenset(pocc), frozenset(tocc), frozenset(bp), frozenset(bt), frozenset(unassigned))

    def event_times(self) -> List[int]:
        ts = set()
        for iv in self.platforms + self.tracks:
            ts.update((iv.start, iv.end))
        for b in self.blockages:
            ts.update((b.start, b.end))
        return sorted(ts)
