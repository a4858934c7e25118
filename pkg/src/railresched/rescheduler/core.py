"""Disaster rescheduling: classification, candidate plans and the delay objective."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from ..constraints.checks import validate_schedule
from ..constraints.occupancy import OccupancyTimeline
from ..constraints.priority import PriorityPolicy
from ..exceptions import InfeasibleAfterRecovery, NoRouteExists, ScheduleMismatch
from ..network import RailwayNetwork, Timetable, enumerate_routes, leg_track
from .cases import (
    AT_STATION,
    DONE,
    NO_CHANGE,
    ON_TRACK,
    REORDER,
    REROUTE,
    RETIME,
    CaseContext,
    RescheduleDecision,
    _first_contact,
    handle_case1,
    handle_case2,
    handle_case3,
    locate,
)
from .dispatch import DispatchConfig, Plan, dispatch, fifo_rank_fn, priority_rank_fn
from .recovery import DisasterEvent, buffer_time, sample_recovery

MAX_SUBSET_REROUTES = 4


@dataclass
class RescheduleResult:
    decisions: List[RescheduleDecision]
    new_schedule: Timetable
    per_train_delay: Dict[str, int]
    total_delay: int
    t_R: int = 0
    tau_B: int = 0
    plan: str = ""

    def decision_for(self, train: str) -> Optional[RescheduleDecision]:
        for d in self.decisions:
            if d.train == train:
                return d
        return None

    def canonical(self) -> str:
        """Stable text form used for byte-level comparisons."""
        lines = [f"t_R\t{self.t_R}", f"tau_B\t{self.tau_B}", f"plan\t{self.plan}",
                 f"total\t{self.total_delay}"]
        for n in sorted(self.per_train_delay):
            lines.append(f"delay\t{n}\t{self.per_train_delay[n]}")
        for d in self.decisions:
            lines.append("decision\t" + "\t".join("" if v is None else str(v) for v in d.as_record()))
        for e in self.new_schedule.entries:
            lines.append(f"entry\t{e.train}\t{e.station}\t{e.o_AT}\t{e.o_DT}\t{e.x_AT}\t{e.x_DT}\t"
                         f"{e.platform}\t{e.track}")
        return "\n".join(lines) + "\n"


# ----- objective -------------------------------------------------------------

def terminal_delays(original: Timetable, new: Timetable) -> Dict[str, int]:
    if set(original.trains) != set(new.trains):
        raise ScheduleMismatch("schedules cover different trains")
    out = {}
    for number in original.ordered_trains():
        a, b = original.itinerary(number), new.itinerary(number)
        if not a and not b:
            out[number] = 0
            continue
        if not a or not b or a[-1].station != b[-1].station:
            raise ScheduleMismatch(f"train {number} ends at different stations")
        out[number] = b[-1].x_AT - a[-1].o_AT
    return out


def total_delay(original: Timetable, new: Timetable) -> int:
    """Sum over trains of the arrival delay at the terminal station."""
    return sum(terminal_delays(original, new).values())


def delay_components(net: RailwayNetwork, original: Timetable, new: Timetable) -> Dict[str, Tuple[int, int]]:
    """Split each terminal delay into (station part, track part).

    The track part is the time spent held on tracks beyond the planned
    running time; the rest accrued at stations.
    """
    out = {}
    for number, d in terminal_delays(original, new).items():
        legs = new.itinerary(number)
        track = 0
        for a, b in zip(legs, legs[1:]):
            tr = leg_track(net, a, b)
            if tr is None:
                continue
            planned = max(tr.journey_time, b.o_AT - a.o_DT)
            track += max(0, (b.x_AT - a.x_DT) - planned)
        track = min(track, max(d, 0))
        out[number] = (d - track, track)
    return out


# ----- classification ----------------------------------------------------------

def classify(net: RailwayNetwork, schedule: Timetable, event: DisasterEvent, t_R: int,
             policy: PriorityPolicy, headway: int = 5, min_dwell: int = 1) -> List[RescheduleDecision]:
    """One decision per affected train, in train order."""
    occ = OccupancyTimeline(net, schedule, event.blockages(t_R))
    ctx = CaseContext(net, schedule, occ, event, t_R, policy, headway, min_dwell)
    platform_stations = ctx.platform_stations
    decisions: Dict[str, RescheduleDecision] = {}
    for station in platform_stations:
        for d in handle_case2(net, schedule, occ, event, station, t_R, policy, headway, min_dwell):
            decisions[d.train] = d
    for number in schedule.ordered_trains():
        if number in decisions:
            continue
        legs = schedule.itinerary(number)
        state, k = locate(legs, event.t_D)
        if state == DONE:
            continue
        if state == ON_TRACK:
            tid = leg_track(net, legs[k - 1], legs[k]).id
            if tid in event.blocked_tracks or legs[k].station in platform_stations:
                decisions[number] = handle_case1(net, schedule, occ, event, number, t_R, policy)
                continue
        if _first_contact(ctx, legs, k) is not None:
            decisions[number] = handle_case3(net, schedule, occ, event, number, t_R, policy)
    return [decisions[n] for n in schedule.ordered_trains() if n in decisions]


# ----- planning --------------------------------------------------------------

@dataclass
class _Candidate:
    name: str
    schedule: Timetable
    total: int
    reroutes: frozenset = frozenset()


def _reroute_subsets(trains: List[str]):
    if len(trains) <= MAX_SUBSET_REROUTES:
        for r in range(len(trains), -1, -1):
            for combo in itertools.combinations(trains, r):
                yield frozenset(combo)
    else:
        yield frozenset(trains)
        yield frozenset()
        for t in trains:
            yield frozenset([t])


def _detours(net: RailwayNetwork, timetable: Timetable, event: DisasterEvent,
             affected: Sequence[RescheduleDecision]) -> Dict[str, RescheduleDecision]:
    """A detour for every affected train that may leave its route but has no reroute yet.

    The detour starts at the train's current (or next) station, avoids the
    blocked tracks and every station left without a usable platform.
    """
    closed = [st for st in event.stations(net)
              if sum(1 for s, _ in event.blocked_platforms if s == st) >= net.platforms(st)]
    out = {}
    for d in affected:
        if d.kind == REROUTE or d.case_label not in _DETOUR_LABEL:
            continue
        legs = timetable.itinerary(d.train)
        state, k = locate(legs, event.t_D)
        if state == DONE or k >= len(legs) - 1:
            continue
        onward = [("P", legs[k].station)]
        for a, b in zip(legs[k:], legs[k + 1:]):
            onward += [("L", leg_track(net, a, b).id), ("P", b.station)]
        try:
            routes = enumerate_routes(net, legs[k].station, legs[-1].station, 3,
                                      avoid_tracks=event.blocked_tracks, avoid_stations=closed)
        except NoRouteExists:
            continue
        for r in routes:
            if list(r.steps) != onward:
                out[d.train] = RescheduleDecision(d.train, REROUTE, _DETOUR_LABEL[d.case_label],
                                                  route=r, start=k)
                break
    return out


# a detour turns a waiting decision into the reroute of the same case family
_DETOUR_LABEL = {"1.1.2": "1.1.1", "3.1": "3.2", "3.2": "3.2"}


def _plan(net, timetable, event, t_R, policy, config, decision_delay: int = 0,
          affected: Sequence[RescheduleDecision] = ()) -> Tuple[_Candidate, List[RescheduleDecision]]:
    blockages = event.blockages(t_R)
    affected = list(affected)
    detours = _detours(net, timetable, event, affected)
    directives = {d.train: d for d in affected if d.kind == REROUTE}
    directives.update(detours)
    hold = {}
    release = {}
    if decision_delay > 0:
        for d in affected:
            state, _ = locate(timetable.itinerary(d.train), event.t_D)
            if state == ON_TRACK:
                release[d.train] = event.t_D + decision_delay
            else:
                hold[d.train] = event.t_D + decision_delay

    def run(name, rank, routes, extra_hold=None):
        h = dict(hold)
        for n, t in (extra_hold or {}).items():
            h[n] = max(h.get(n, t), t)
        plan = Plan({n: (directives[n].start, directives[n].route) for n in routes}, h)
        try:
            sched = dispatch(net, timetable, event.t_D, blockages, rank, config, plan, release)
        except InfeasibleAfterRecovery:
            return None
        if validate_schedule(net, sched, blockages=blockages):
            return None
        return _Candidate(name, sched, total_delay(timetable, sched), frozenset(routes))

    prio = priority_rank_fn(policy)
    cands: List[_Candidate] = []
    for subset in _reroute_subsets(sorted(directives, key=lambda n: timetable.trains[n].id)):
        label = "priority" + (f"+reroute({','.join(sorted(subset))})" if subset else "")
        c = run(label, prio, subset)
        if c is not None:
            cands.append(c)
    held = {d.train: t_R for d in affected}
    for c in (run("priority+hold", prio, (), held), run("wait-in-place", fifo_rank_fn, ())):
        if c is not None:
            cands.append(c)
    if not cands:
        raise InfeasibleAfterRecovery("no feasible completion of the timetable within the horizon")
    best = min(cands, key=lambda c: c.total)  # first minimum wins
    affected = [detours[d.train] if d.train in best.reroutes and d.train in detours else d
                for d in affected]
    return best, affected


def _finalize(timetable: Timetable, best: _Candidate, affected: List[RescheduleDecision],
              t_R: int, tau_B: int) -> RescheduleResult:
    per_train = terminal_delays(timetable, best.schedule)
    decided = {}
    for d in affected:
        delay = per_train[d.train]
        if d.case_label == "1.1.1" and d.train not in best.reroutes:
            d = RescheduleDecision(d.train, RETIME, "1.1.2", delay)
        elif d.case_label == "3.2" and d.kind == REROUTE and d.train not in best.reroutes:
            d = RescheduleDecision(d.train, RETIME, "3.2", delay)
        elif d.case_label == "3.1":
            kind = NO_CHANGE if _unchanged(timetable, best.schedule, d.train) else RETIME
            d = RescheduleDecision(d.train, kind, "3.1", delay)
        else:
            d = RescheduleDecision(d.train, d.kind, d.case_label, delay, d.route, d.position, d.start)
        decided[d.train] = d
    # knock-on: trains disturbed only through other trains
    for number in timetable.ordered_trains():
        if number not in decided and not _unchanged(timetable, best.schedule, number):
            decided[number] = RescheduleDecision(number, RETIME, "3.1", per_train[number])
    decisions = [decided[n] for n in timetable.ordered_trains() if n in decided]
    return RescheduleResult(decisions, best.schedule, per_train, sum(per_train.values()),
                            t_R, tau_B, best.name)


def _unchanged(a: Timetable, b: Timetable, number: str) -> bool:
    x = [(e.station, e.x_AT, e.x_DT) for e in a.itinerary(number)]
    y = [(e.station, e.x_AT, e.x_DT) for e in b.itinerary(number)]
    return x == y


def _config(timetable, horizon, headway, min_dwell) -> DispatchConfig:
    if horizon is None:
        horizon = timetable.horizon_end() + 1440
    return DispatchConfig(headway=headway, min_dwell_stop=min_dwell, horizon=horizon)


def reschedule(net: RailwayNetwork, timetable: Timetable, event: DisasterEvent,
               policy: Optional[PriorityPolicy] = None, seed=0, *, headway: int = 5,
               min_dwell: int = 1, horizon: Optional[int] = None,
               t_R: Optional[int] = None) -> RescheduleResult:
    """Plan around one disaster; ``t_R`` overrides the sampled recovery instant."""
    policy = policy or PriorityPolicy()
    event.check(net)
    if t_R is None:
        t_R = event.t_D + sample_recovery(event.recovery, seed)
    config = _config(timetable, horizon, headway, min_dwell)
    affected = classify(net, timetable, event, t_R, policy, headway, min_dwell)
    best, affected = _plan(net, timetable, event, t_R, policy, config, 0, affected)
    return _finalize(timetable, best, affected, t_R, buffer_time(event))


def centralized_baseline(net: RailwayNetwork, timetable: Timetable, event: DisasterEvent,
                         policy: Optional[PriorityPolicy] = None, seed=0, *, levels: int = 2,
                         latency: int = 3, headway: int = 5, min_dwell: int = 1,
                         horizon: Optional[int] = None, t_R: Optional[int] = None) -> RescheduleResult:
    """The same case logic, decided by a central authority after a reporting delay.

    Affected trains hold their position for ``levels * latency`` minutes
    while the disruption is reported up the hierarchy and orders come back.
    """
    policy = policy or PriorityPolicy()
    event.check(net)
    if t_R is None:
        t_R = event.t_D + sample_recovery(event.recovery, seed)
    config = _config(timetable, horizon, headway, min_dwell)
    affected = classify(net, timetable, event, t_R, policy, headway, min_dwell)
    best, affected = _plan(net, timetable, event, t_R, policy, config, levels * latency, affected)
    return _finalize(timetable, best, affected, t_R, buffer_time(event))


def wait_in_place_baseline(net: RailwayNetwork, timetable: Timetable, event: DisasterEvent,
                           t_R: int, *, headway: int = 5, min_dwell: int = 1,
                           horizon: Optional[int] = None) -> Timetable:
    """Everyone keeps their route and order and simply waits for recovery."""
    config = _config(timetable, horizon, headway, min_dwell)
    return dispatch(net, timetable, event.t_D, event.blockages(t_R), fifo_rank_fn, config)
