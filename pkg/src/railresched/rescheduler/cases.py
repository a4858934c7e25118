"""Per-train disaster handling cases and the dwell/track delay rules.

Case labels:

===========  =========================================  ==================
label        situation at onset                         decision
===========  =========================================  ==================
``1.1.1``    on the approach track, admitted, detour    Reroute
``1.1.2``    on the approach track, admitted            Retime at station
``1.2``      on the approach track, not admitted        Retime on track
``2``        standing at the disaster station           Reorder
``3.1``      elsewhere, reaching the station in buffer  NoChange / Retime
``3.2``      elsewhere, path uses the blocked track     Reroute / Retime
===========  =========================================  ==================
"""
from __future__ import annotations

import copy
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from ..constraints.occupancy import OccupancyTimeline
from ..constraints.priority import PriorityPolicy, priority_key
from ..exceptions import NoRouteExists, PreconditionUnsatisfied, TrainNotOnApproach
from ..network import RailwayNetwork, Route, ScheduleEntry, Timetable, leg_track
from .recovery import DisasterEvent, buffer_time

RETIME, REORDER, REROUTE, NO_CHANGE = "Retime", "Reorder", "Reroute", "NoChange"
CASE_KINDS = {
    "1.1.1": {REROUTE},
    "1.1.2": {RETIME},
    "1.2": {RETIME},
    "2": {REORDER},
    "3.1": {NO_CHANGE, RETIME},
    "3.2": {REROUTE, RETIME},
}


@dataclass
class RescheduleDecision:
    train: str
    kind: str
    case_label: str
    delay: int = 0
    route: Optional[Route] = None
    position: Optional[int] = None
    # index of the itinerary stop where a new route starts
    start: Optional[int] = None

    def __post_init__(self):
        if self.kind not in CASE_KINDS.get(self.case_label, ()):
            raise ValueError(f"decision {self.kind} does not fit case {self.case_label}")

    @property
    def detail(self) -> str:
        if self.kind == REROUTE and self.route is not None:
            return f"route {self.route}"
        if self.kind == REORDER:
            return f"position {self.position}, +{self.delay} min"
        return f"+{self.delay} min"

    def as_record(self) -> Tuple:
        return (self.train, self.kind, self.case_label, self.delay,
                str(self.route) if self.route else "", self.position, self.start)


# ----- locating trains in a plan ------------------------------------------

NOT_STARTED, AT_STATION, ON_TRACK, DONE = "not_started", "at_station", "on_track", "done"


def locate(legs: Sequence[ScheduleEntry], t: int) -> Tuple[str, int]:
    """State of one itinerary at ``t``: ``(state, index)``.

    Movements planned exactly at ``t`` count as still pending, so a
    departure at onset is a decision, not a fact.
    """
    if not legs or legs[0].x_AT >= t:
        return NOT_STARTED, 0
    for i, e in enumerate(legs):
        if e.x_AT < t <= e.x_DT:
            return AT_STATION, i
        if i + 1 < len(legs) and e.x_DT < t <= legs[i + 1].x_AT:
            return ON_TRACK, i + 1
    return DONE, len(legs) - 1


@dataclass
class CaseContext:
    net: RailwayNetwork
    schedule: Timetable
    occ: OccupancyTimeline
    event: DisasterEvent
    t_R: int
    policy: PriorityPolicy = field(default_factory=PriorityPolicy)
    headway: int = 5
    min_dwell: int = 1

    @property
    def tau_B(self) -> int:
        return buffer_time(self.event)

    @property
    def platform_stations(self) -> List[str]:
        return sorted({s for s, _ in self.event.blocked_platforms}, key=lambda c: self.net.stations[c].id)


def _ctx(net, schedule, occ, event, t_R, policy, **kw) -> CaseContext:
    if occ is None:
        occ = OccupancyTimeline(net, schedule, event.blockages(t_R if t_R is not None else event.t_D + event.recovery.tau2))
    if t_R is None:
        t_R = event.t_D + event.recovery.tau2
    return CaseContext(net, schedule, occ, event, t_R, policy or PriorityPolicy(), **kw)


def _others_present(ctx: CaseContext, station: str, t: int, train: str) -> int:
    n = 0
    for iv in ctx.occ.platforms:
        if iv.train != train and iv.resource.station == station and iv.covers(t):
            n += 1
    return n


def _platform_free(ctx: CaseContext, station: str, t: int, train: str) -> bool:
    blocked = sum(1 for b in ctx.occ.blockages
                  if b.kind == "platform" and b.ref[0] == station and b.active(t))
    return _others_present(ctx, station, t, train) + blocked < ctx.net.platforms(station)


def _track_busy_until(ctx: CaseContext, tid: int, start: int, end: int, train: str) -> Optional[int]:
    """Release time of the latest other train overlapping ``[start, end)`` on ``tid``."""
    busy = [iv.end for iv in ctx.occ.tracks
            if iv.train != train and iv.resource.index == tid and iv.start < end and start < iv.end]
    return max(busy) if busy else None


def _contenders_at(ctx: CaseContext, station: str, train: str) -> List[str]:
    """Trains other than ``train`` needing ``station`` between onset and the buffer horizon."""
    out = []
    for number, legs in ctx.schedule.itineraries().items():
        if number == train:
            continue
        for e in legs:
            if e.station == station and (ctx.event.t_D <= e.x_AT <= ctx.tau_B
                                         or e.x_AT < ctx.event.t_D <= e.x_DT):
                out.append(number)
                break
    return out


def _top_ranked(ctx: CaseContext, train: str, contenders: List[str], t: int) -> bool:
    tt = ctx.schedule
    pool = [(tt.trains[c], 0) for c in contenders]
    mine = priority_key(ctx.policy, tt.trains[train], t, 0, pool)
    return all(mine < priority_key(ctx.policy, tt.trains[c], t, 0,
                                   [p for p in pool if p[0].number != c] + [(tt.trains[train], 0)])
               for c in contenders)


def _blocked_during(ctx: CaseContext, tid: int, start: int, end: int) -> bool:
    return tid in ctx.event.blocked_tracks and start < ctx.t_R and ctx.event.t_D < end


def _route_available(ctx: CaseContext, route: Route, depart: int, train: str) -> bool:
    """Every track and platform of ``route`` free along the projected traversal."""
    t = depart
    for i, tid in enumerate(route.tracks):
        tr = ctx.net.track(tid)
        end = t + tr.journey_time
        if _blocked_during(ctx, tid, t, end) or _track_busy_until(ctx, tid, t, end, train) is not None:
            return False
        st = route.stations[i + 1]
        if any(b[0] == st for b in ctx.event.blocked_platforms) and not _platform_free(ctx, st, end, train):
            return False
        t = end
    return True


def _remaining_route(ctx: CaseContext, legs: Sequence[ScheduleEntry], start: int,
                     swap: Optional[Tuple[int, int]] = None) -> Route:
    steps = []
    total = 0
    for a, b in zip(legs[start:], legs[start + 1:]):
        tr = leg_track(ctx.net, a, b)
        tid = tr.id
        if swap is not None and tid == swap[0]:
            tid = swap[1]
        steps += [("P", a.station), ("L", tid)]
        total += ctx.net.track(tid).journey_time
    steps.append(("P", legs[-1].station))
    return Route(tuple(steps), total)


# ----- the three cases -----------------------------------------------------

def handle_case1(net: RailwayNetwork, schedule: Timetable, occ: Optional[OccupancyTimeline],
                 event: DisasterEvent, train: str, t_R: Optional[int] = None,
                 policy: Optional[PriorityPolicy] = None) -> RescheduleDecision:
    """Train moving on the track towards the disaster station at onset."""
    ctx = _ctx(net, schedule, occ, event, t_R, policy)
    legs = schedule.itinerary(train)
    state, k = locate(legs, event.t_D)
    if state != ON_TRACK:
        raise TrainNotOnApproach(f"train {train} is not on a track at t={event.t_D}")
    prev, nxt = legs[k - 1], legs[k]
    tr = leg_track(net, prev, nxt)
    station = nxt.station
    if tr.id not in event.blocked_tracks and station not in ctx.platform_stations:
        raise TrainNotOnApproach(f"train {train} is not approaching a disaster station")

    if tr.id in event.blocked_tracks:
        # caught on the blocked line: it stays where it is until recovery
        remaining = max(0, prev.x_DT + tr.journey_time - event.t_D)
        arrival = max(nxt.o_AT, ctx.t_R + remaining)
        return RescheduleDecision(train, RETIME, "1.2", delay=arrival - nxt.o_AT)

    a = nxt.x_AT
    admitted = (_platform_free(ctx, station, a, train)
                and _top_ranked(ctx, train, _contenders_at(ctx, station, train), a))
    if not admitted:
        return RescheduleDecision(train, RETIME, "1.2", delay=max(0, ctx.t_R - nxt.o_AT))

    if k == len(legs) - 1:
        return RescheduleDecision(train, RETIME, "1.1.2", delay=0)
    onward = _remaining_route(ctx, legs, k)
    if _route_available(ctx, onward, nxt.x_DT, train):
        return RescheduleDecision(train, RETIME, "1.1.2", delay=0)
    # the original remaining route is not fully available: look for a detour
    try:
        alternatives = [r for r in _routes(ctx, station, legs[-1].station) if r != onward]
    except NoRouteExists:
        alternatives = []
    for route in alternatives:
        if _route_available(ctx, route, nxt.x_DT, train):
            return RescheduleDecision(train, REROUTE, "1.1.1", route=route, start=k)
    return RescheduleDecision(train, RETIME, "1.1.2", delay=max(0, ctx.t_R - nxt.o_DT))


def _routes(ctx: CaseContext, origin: str, dest: str, k: int = 3) -> List[Route]:
    from ..network import enumerate_routes
    return enumerate_routes(ctx.net, origin, dest, max_routes=k,
                            avoid_tracks=ctx.event.blocked_tracks,
                            avoid_stations=ctx.platform_stations)


def handle_case2(net: RailwayNetwork, schedule: Timetable, occ: Optional[OccupancyTimeline],
                 event: DisasterEvent, station: str, t_R: Optional[int] = None,
                 policy: Optional[PriorityPolicy] = None, headway: int = 5,
                 min_dwell: int = 1) -> List[RescheduleDecision]:
    """Trains standing at the disaster station: departures reordered by rank."""
    ctx = _ctx(net, schedule, occ, event, t_R, policy, headway=headway, min_dwell=min_dwell)
    if station not in ctx.platform_stations:
        raise PreconditionUnsatisfied(f"{station} has no blocked platform")
    waiting = []
    for number, legs in schedule.itineraries().items():
        state, k = locate(legs, event.t_D)
        if state == AT_STATION and legs[k].station == station:
            waiting.append((number, legs, k))
    if not waiting:
        return []

    def ready(item):
        number, legs, k = item
        e = legs[k]
        dwell = min_dwell if e.stopping else 0
        r = max(e.o_DT, e.x_AT + dwell)
        if k + 1 < len(legs):
            tid = leg_track(net, e, legs[k + 1]).id
            if tid in event.blocked_tracks:
                r = max(r, ctx.t_R)
        return r

    t = min(ready(w) for w in waiting)
    pool = [(schedule.trains[n], 0) for n, _, _ in waiting]
    ranked = sorted(waiting, key=lambda w: priority_key(
        policy or ctx.policy, schedule.trains[w[0]], t, 0,
        [p for p in pool if p[0].number != w[0]]))
    last_on: Dict[Optional[int], int] = {}
    out = []
    for pos, (number, legs, k) in enumerate(ranked, start=1):
        e = legs[k]
        tid = leg_track(net, e, legs[k + 1]).id if k + 1 < len(legs) else None
        dep = ready((number, legs, k))
        if tid is not None and tid in last_on:
            dep = max(dep, last_on[tid] + headway)
        if tid is not None:
            last_on[tid] = dep
        out.append(RescheduleDecision(number, REORDER, "2", delay=dep - e.o_DT, position=pos))
    return out


def _first_contact(ctx: CaseContext, legs: Sequence[ScheduleEntry], start: int):
    """First disaster contact in ``[t_D, tau_B]``: ``("track", i)`` or ``("station", i)``."""
    for i in range(start, len(legs)):
        e = legs[i]
        if e.station in ctx.platform_stations and ctx.event.t_D <= e.x_AT <= ctx.tau_B:
            return "station", i
        if i + 1 < len(legs):
            tid = leg_track(ctx.net, e, legs[i + 1]).id
            if tid in ctx.event.blocked_tracks and ctx.event.t_D <= e.x_DT <= ctx.tau_B:
                return "track", i
    return None


def handle_case3(net: RailwayNetwork, schedule: Timetable, occ: Optional[OccupancyTimeline],
                 event: DisasterEvent, train: str, t_R: Optional[int] = None,
                 policy: Optional[PriorityPolicy] = None) -> RescheduleDecision:
    """Train away from the disaster that will reach it within the buffer time."""
    ctx = _ctx(net, schedule, occ, event, t_R, policy)
    legs = schedule.itinerary(train)
    state, k = locate(legs, event.t_D)
    if state == DONE:
        raise PreconditionUnsatisfied(f"train {train} has finished")
    if state == AT_STATION and legs[k].station in ctx.platform_stations:
        raise PreconditionUnsatisfied(f"train {train} is at the disaster station")
    if state == ON_TRACK:
        tid = leg_track(net, legs[k - 1], legs[k]).id
        if legs[k].station in ctx.platform_stations or tid in event.blocked_tracks:
            raise PreconditionUnsatisfied(f"train {train} is on the approach track")
    contact = _first_contact(ctx, legs, k)
    if contact is None:
        raise PreconditionUnsatisfied(f"train {train} does not reach the disaster within the buffer")
    kind, i = contact

    if kind == "track":
        a, b = legs[i], legs[i + 1]
        blocked = leg_track(net, a, b)
        dep = a.x_DT
        users = [n for n, its in schedule.itineraries().items() if n != train and any(
            x.station == a.station and y.station == b.station and event.t_D <= x.x_DT <= ctx.tau_B
            for x, y in zip(its, its[1:]))]
        top = _top_ranked(ctx, train, users, dep)
        wait_until = ctx.t_R
        for alt in net.tracks_between(a.station, b.station):
            if alt.id == blocked.id or alt.id in event.blocked_tracks:
                continue
            busy = _track_busy_until(ctx, alt.id, dep, dep + alt.journey_time, train)
            if busy is None and top:
                route = _remaining_route(ctx, legs, i, swap=(blocked.id, alt.id))
                return RescheduleDecision(train, REROUTE, "3.2", route=route, start=i)
            wait_until = min(wait_until, busy if busy is not None else dep)
        return RescheduleDecision(train, RETIME, "3.2", delay=max(0, wait_until - dep))

    e = legs[i]
    prev = legs[i - 1] if i > 0 else None
    track_ok = True
    if prev is not None:
        tr = leg_track(net, prev, e)
        track_ok = _track_busy_until(ctx, tr.id, prev.x_DT, e.x_AT, train) is None
    ok = (_platform_free(ctx, e.station, e.x_AT, train) and track_ok
          and _top_ranked(ctx, train, _contenders_at(ctx, e.station, train), e.x_AT))
    if ok:
        return RescheduleDecision(train, NO_CHANGE, "3.1")
    return RescheduleDecision(train, RETIME, "3.1", delay=max(0, ctx.t_R - e.o_AT))


# ----- delay minimisation rules ---------------------------------------------

def minimize_station_delay(entry: ScheduleEntry, incurred_arrival_delay: int, min_dwell: int) -> ScheduleEntry:
    """Late arrival eats into the dwell; departure slips only when it must."""
    if incurred_arrival_delay < 0 or min_dwell < 0:
        raise ValueError("delay and minimum dwell must be non-negative")
    out = copy.copy(entry)
    out.x_AT = entry.o_AT + incurred_arrival_delay
    out.x_DT = max(entry.o_DT, out.x_AT + min_dwell)
    return out


def minimize_track_delay(segment_entries: Sequence[ScheduleEntry], planned_journey,
                         min_dwell: int = 1) -> List[ScheduleEntry]:
    """Propagate departures along consecutive stops at the planned running times.

    ``planned_journey`` is one journey time for every hop or a list with one
    per hop.  Arrivals never precede the original arrival.
    """
    entries = [copy.copy(e) for e in segment_entries]
    hops = len(entries) - 1
    journeys = list(planned_journey) if isinstance(planned_journey, (list, tuple)) else [planned_journey] * hops
    if len(journeys) != hops:
        raise ValueError("one journey time per hop is required")
    for j, (a, b) in enumerate(zip(entries, entries[1:])):
        arrival = max(a.x_DT + journeys[j], b.o_AT)
        upd = minimize_station_delay(b, arrival - b.o_AT, min_dwell if b.stopping else 0)
        b.x_AT, b.x_DT = upd.x_AT, upd.x_DT
    return entries
