"""Feasibility rules over schedules and occupancy snapshots.

Rule ids used in violation reports:

* ``EQ1`` continuity: arrival no earlier than previous departure plus journey
* ``EQ2`` no arrival before the original arrival time
* ``EQ3`` platform index within ``1..p``
* ``EQ4`` capacity: at each arrival, trains present plus blocked platforms <= p
* ``EQ5`` one train at a time per track
* ``EQ6`` one resource per train at any instant
* ``EQ7`` consecutive stops joined by a track usable in that direction
* ``BLOCK`` no entry onto a blocked track; a train caught on it waits for recovery
"""
from __future__ import annotations

from typing import Iterable, List, Optional, Sequence, Union

from ..exceptions import EarlyArrivalViolation, MultipleResourcesHeld, NonAdjacentStations
from ..network import RailwayNetwork, ScheduleEntry, Timetable, Violation, leg_track
from .occupancy import (
    Blockage,
    OccupancyState,
    OccupancyTimeline,
    Resource,
    blocked_platform_count,
    platform_intervals,
    track_intervals,
)

RULES = ("EQ1", "EQ2", "EQ3", "EQ4", "EQ5", "EQ6", "EQ7", "BLOCK")


def check_continuity(entry_prev: ScheduleEntry, entry_next: ScheduleEntry, journey: int,
                     net: Optional[RailwayNetwork] = None) -> bool:
    if entry_prev.train != entry_next.train:
        raise ValueError("entries belong to different trains")
    if net is not None and not net.tracks_between(entry_prev.station, entry_next.station, directed=False):
        raise NonAdjacentStations(f"{entry_prev.station} and {entry_next.station} are not adjacent")
    return entry_next.x_AT >= entry_prev.x_DT + journey


def compute_delay(entry: ScheduleEntry) -> int:
    if entry.x_AT < entry.o_AT:
        raise EarlyArrivalViolation(
            f"train {entry.train} at {entry.station}: x_AT {entry.x_AT} < o_AT {entry.o_AT}")
    return entry.x_AT - entry.o_AT


def check_platform_capacity(occ: OccupancyState, station: str, p: int) -> bool:
    if p < 1:
        raise ValueError("p must be >= 1")
    used = [k for _, i, k in occ.platform_occ if i == station]
    if any(not 1 <= k <= p for k in used):
        return False
    n_unassigned = sum(1 for _, i in occ.unassigned if i == station)
    return len(used) + n_unassigned <= p


def check_track_exclusivity(occ: OccupancyState, station: str, track: int) -> bool:
    return sum(1 for _, i, l in occ.track_occ if i == station and l == track) <= 1


def resource_of(occ: Union[OccupancyState, OccupancyTimeline], train: str, t: Optional[int] = None):
    """The single resource held by ``train``, or ``None`` when it holds nothing."""
    if isinstance(occ, OccupancyTimeline):
        if t is None:
            raise ValueError("a time is needed to query a timeline")
        occ = occ.at(t)
    held = [Resource("platform", i, k) for j, i, k in occ.platform_occ if j == train]
    held += [Resource("platform", i, 0) for j, i in occ.unassigned if j == train]
    held += [Resource("track", i, l) for j, i, l in occ.track_occ if j == train]
    if len(held) > 1:
        raise MultipleResourcesHeld(f"train {train} holds {', '.join(map(str, sorted(held)))}")
    return held[0] if held else None


def _as_timetable(schedule) -> Timetable:
    if isinstance(schedule, Timetable):
        return schedule
    raise TypeError("validate_schedule expects a Timetable")


def validate_schedule(net: RailwayNetwork, schedule: Timetable,
                      occ_timeline: Optional[OccupancyTimeline] = None,
                      blockages: Iterable[Blockage] = ()) -> List[Violation]:
    """Every violation of the feasibility rules; an empty list means feasible."""
    tt = _as_timetable(schedule)
    blockages = list(blockages) if occ_timeline is None else list(occ_timeline.blockages)
    out: List[Violation] = []
    its = tt.itineraries()
    order = {n: tt.trains[n].id if n in tt.trains else 0 for n in its}

    for number in sorted(its, key=lambda n: (order[n], n)):
        legs = its[number]
        for e in legs:
            if e.x_AT < e.o_AT:
                out.append(Violation("EQ2", number, e.station, e.x_AT,
                                     detail=f"x_AT {e.x_AT} < o_AT {e.o_AT}"))
            if e.platform is not None and not 1 <= e.platform <= net.platforms(e.station):
                out.append(Violation("EQ3", number, e.station, e.x_AT,
                                     detail=f"platform {e.platform} outside 1..{net.platforms(e.station)}"))
        for prev, nxt in zip(legs, legs[1:]):
            tr = leg_track(net, prev, nxt)
            if tr is None or not net.usable(tr, prev.station, nxt.station):
                out.append(Violation("EQ7", number, (prev.station, nxt.station), prev.x_DT,
                                     detail="no usable track between consecutive stops"))
                continue
            if nxt.x_AT < prev.x_DT + tr.journey_time:
                out.append(Violation("EQ1", number, nxt.station, nxt.x_AT,
                                     detail=f"{nxt.x_AT} < {prev.x_DT} + {tr.journey_time}"))

    # EQ6: resource intervals of one train must be pairwise disjoint; a
    # zero-dwell pass, like an empty track interval, holds nothing and is left out
    ptv = platform_intervals(tt)
    trv = track_intervals(net, tt)
    per_train = {}
    for iv in ptv + trv:
        if iv.end > iv.start:
            per_train.setdefault(iv.train, []).append(iv)
    for number in sorted(per_train, key=lambda n: (order.get(n, 0), n)):
        ivs = per_train[number]
        bad = False
        for a_i, a in enumerate(ivs):
            for b in ivs[a_i + 1:]:
                if _overlap(a, b):
                    bad = True
        if bad:
            out.append(Violation("EQ6", number, None, None, detail="more than one resource held at once"))

    # EQ4: capacity checked at every arrival instant
    for iv in ptv:
        t, st = iv.start, iv.resource.station
        present = sum(1 for o in ptv if o.resource.station == st and o.covers(t))
        blocked = blocked_platform_count(blockages, st, t)
        if present + blocked > net.platforms(st):
            out.append(Violation("EQ4", iv.train, st, t,
                                 detail=f"{present} present + {blocked} blocked > {net.platforms(st)}"))

    # EQ5: track intervals on one track must not overlap
    held = [iv for iv in trv if iv.end > iv.start]
    for a_i, a in enumerate(held):
        for b in held[a_i + 1:]:
            if a.resource.index == b.resource.index and a.train != b.train and _overlap(a, b):
                first, second = sorted((a.train, b.train), key=lambda n: (order.get(n, 0), n))
                out.append(Violation("EQ5", first, a.resource.index, max(a.start, b.start), other=second))

    # BLOCK: entering a blocked track, or leaving it before recovery
    for iv in trv:
        for bl in blockages:
            if bl.kind != "track" or bl.ref != iv.resource.index:
                continue
            entered = bl.start <= iv.start < bl.end
            trapped_early = iv.start < bl.start < iv.end < bl.end
            if entered or trapped_early:
                out.append(Violation("BLOCK", iv.train, iv.resource.index, iv.start,
                                     detail=f"track blocked over [{bl.start}, {bl.end})"))
    return out


def _overlap(a, b) -> bool:
    """Half-open overlap, with zero-length intervals treated as instants."""
    if a.point and b.point:
        return a.start == b.start
    if a.point:
        return b.start <= a.start < b.end
    if b.point:
        return a.start <= b.start < a.end
    return a.start < b.end and b.start < a.end
