"""Event-skipping dispatch simulation used to turn decisions into feasible times.

From a start instant every train is put in one of four states (not started,
at a station, on a track, done) according to its current plan.  Time then
advances from one event instant to the next.  Within an instant, arrivals and
departures are granted in contention order until nothing else can move:

* an arrival needs a platform: trains present plus blocked platforms < p
* a departure needs its track free, unblocked, and clear of the headway
  since the previous departure onto that track
* departure = max(o_DT, x_AT + min_dwell), so dwell is compressed when late
* arrival = max(departure + planned journey, o_AT), so running time is never
  stretched; extra time is only ever spent waiting
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from ..constraints.occupancy import Blockage, assign_platforms
from ..constraints.priority import PriorityPolicy, priority_key
from ..exceptions import InfeasibleAfterRecovery
from ..network import RailwayNetwork, Route, ScheduleEntry, Timetable, Train, leg_track

NOT_STARTED = "not_started"
AT_STATION = "at_station"
ON_TRACK = "on_track"
DONE = "done"

DEFAULT_HEADWAY = 5


@dataclass
class Leg:
    station: str
    o_AT: Optional[int]
    o_DT: Optional[int]
    track: Optional[int]
    x_AT: Optional[int] = None
    x_DT: Optional[int] = None
    platform: Optional[int] = None

    @property
    def stopping(self) -> bool:
        return self.o_AT is not None and self.o_DT > self.o_AT


@dataclass
class Run:
    train: Train
    legs: List[Leg]
    pos: int = 0
    state: str = NOT_STARTED
    ready: int = 0  # earliest instant for the next action


@dataclass
class DispatchConfig:
    headway: int = DEFAULT_HEADWAY
    min_dwell_stop: int = 1
    min_dwell_pass: int = 0
    horizon: Optional[int] = None

    def min_dwell(self, leg: Leg) -> int:
        return self.min_dwell_stop if leg.stopping else self.min_dwell_pass


RankFn = Callable[[Train, int, int, list], tuple]


def priority_rank_fn(policy: PriorityPolicy) -> RankFn:
    def rank(train, t, delay, contenders):
        return priority_key(policy, train, t, delay, contenders)
    return rank


def fifo_rank_fn(train, t, delay, contenders):
    # oldest planned action first: the larger the current delay, the earlier it was due
    return (-delay, train.id)


@dataclass
class Plan:
    """Directives applied on top of the dispatch rules."""

    routes: Dict[str, Tuple[int, Route]] = field(default_factory=dict)
    hold_until: Dict[str, int] = field(default_factory=dict)


def _legs_of(net: RailwayNetwork, entries: Sequence[ScheduleEntry]) -> List[Leg]:
    legs = []
    for a, b in zip(entries, list(entries[1:]) + [None]):
        tid = None
        if b is not None:
            tr = leg_track(net, a, b)
            tid = tr.id if tr is not None else None
        legs.append(Leg(a.station, a.o_AT, a.o_DT, tid, a.x_AT, a.x_DT, a.platform))
    return legs


def _apply_route(net: RailwayNetwork, legs: List[Leg], start: int, route: Route) -> List[Leg]:
    if route.stations[0] != legs[start].station:
        raise ValueError("route must start at the train's current or next station")
    later = {lg.station: lg for lg in legs[start:]}
    tracks = list(route.tracks) + [None]
    new = []
    for st, tid in zip(route.stations, tracks):
        old = later.get(st)
        if old is not None:
            new.append(Leg(st, old.o_AT, old.o_DT, tid, old.x_AT, old.x_DT))
        else:
            new.append(Leg(st, None, None, tid))
    if new[-1].station != legs[-1].station:
        raise ValueError("route must end at the train's terminal")
    return legs[:start] + new


class Dispatcher:
    def __init__(self, net: RailwayNetwork, timetable: Timetable, t0: int,
                 blockages: Sequence[Blockage] = (), rank: Optional[RankFn] = None,
                 config: Optional[DispatchConfig] = None, plan: Optional[Plan] = None,
                 on_track_release: Optional[Dict[str, int]] = None):
        self.net = net
        self.tt = timetable
        self.t0 = t0
        self.blockages = list(blockages)
        self.rank = rank or priority_rank_fn(PriorityPolicy())
        self.cfg = config or DispatchConfig()
        self.plan = plan or Plan()
        # earliest arrival for trains caught moving (e.g. held by a central authority)
        self.on_track_release = on_track_release or {}
        self.blocked_tracks = [b for b in self.blockages if b.kind == "track"]
        self.runs: Dict[str, Run] = {}
        self.last_dep: Dict[int, int] = {}
        self.point_visits: Dict[str, set] = {}
        self._init_runs()

    # ----- set-up -------------------------------------------------------
    def _track_blocked(self, tid: int, t: int) -> bool:
        return any(b.ref == tid and b.active(t) for b in self.blocked_tracks)

    def _block_end(self, tid: int, t: int) -> Optional[int]:
        ends = [b.end for b in self.blocked_tracks if b.ref == tid and b.start <= t < b.end]
        return max(ends) if ends else None

    def _init_runs(self):
        t0 = self.t0
        for number, entries in self.tt.itineraries().items():
            if not entries:
                continue
            legs = _legs_of(self.net, entries)
            run = Run(self.tt.trains[number], legs)
            # locate the train at t0 in its current plan
            first = legs[0]
            if first.x_AT >= t0:
                run.pos, run.state = 0, NOT_STARTED
            else:
                run.state = DONE
                for i, lg in enumerate(legs):
                    if lg.x_AT < t0 <= lg.x_DT:
                        run.pos, run.state = i, AT_STATION
                        break
                    if i + 1 < len(legs) and lg.x_DT < t0 <= legs[i + 1].x_AT:
                        run.pos, run.state = i + 1, ON_TRACK
                        break
                if run.state == AT_STATION and run.pos == len(legs) - 1 and legs[-1].x_DT < t0:
                    run.state = DONE
            if run.state in (AT_STATION, ON_TRACK, NOT_STARTED) and number in self.plan.routes:
                start, route = self.plan.routes[number]
                legs = _apply_route(self.net, legs, start, route)
                run.legs = legs
            # forget future times; they are decided by the dispatch
            if run.state != DONE:
                for i, lg in enumerate(legs):
                    if i > run.pos or (i == run.pos and run.state in (NOT_STARTED, ON_TRACK)):
                        lg.x_AT = lg.x_DT = None
                    elif i == run.pos:
                        lg.x_DT = None
            self.runs[number] = run
            for lg in legs[:run.pos]:
                if lg.track is not None and lg.x_DT is not None and lg.x_DT < t0:
                    self.last_dep[lg.track] = max(self.last_dep.get(lg.track, lg.x_DT), lg.x_DT)
        for number, run in self.runs.items():
            self._set_ready(number, run, initial=True)

    def _set_ready(self, number: str, run: Run, initial: bool = False):
        hold = self.plan.hold_until.get(number, -10 ** 9)
        if run.state == NOT_STARTED:
            run.ready = max(run.legs[0].o_AT, hold)
        elif run.state == AT_STATION:
            lg = run.legs[run.pos]
            lo = lg.o_DT if lg.o_DT is not None else -10 ** 9
            run.ready = max(lo, lg.x_AT + self.cfg.min_dwell(lg), hold)
        elif run.state == ON_TRACK:
            prev, nxt = run.legs[run.pos - 1], run.legs[run.pos]
            journey = self.net.track(prev.track).journey_time
            lo = nxt.o_AT if nxt.o_AT is not None else -10 ** 9
            arr = max(prev.x_DT + journey, lo)
            if initial:
                remaining = max(0, prev.x_DT + journey - self.t0)
                end = self._block_end(prev.track, self.t0)
                if end is not None:
                    arr = max(arr, end + remaining)
                release = self.on_track_release.get(number)
                if release is not None:
                    arr = max(arr, release + remaining)
            run.ready = arr

    # ----- resource checks ---------------------------------------------
    def _present(self, station: str, t: int) -> int:
        n = 0
        for r in self.runs.values():
            if r.state == AT_STATION and r.legs[r.pos].station == station:
                n += 1
        return n + len(self.point_visits.get((station, t), ()))

    def _blocked_platforms(self, station: str, t: int) -> int:
        return sum(1 for b in self.blockages
                   if b.kind == "platform" and b.ref[0] == station and b.active(t))

    def _capacity_ok(self, station: str, t: int) -> bool:
        return self._present(station, t) + self._blocked_platforms(station, t) + 1 <= self.net.platforms(station)

    def _track_free(self, tid: int, t: int) -> bool:
        if self._track_blocked(tid, t):
            return False
        for r in self.runs.values():
            if r.state == ON_TRACK and r.legs[r.pos - 1].track == tid:
                return False
        last = self.last_dep.get(tid)
        return last is None or t >= last + self.cfg.headway

    # ----- main loop ----------------------------------------------------
    def _delay(self, run: Run, t: int) -> int:
        lg = run.legs[run.pos]
        due = lg.o_DT if run.state == AT_STATION else lg.o_AT
        return max(0, t - due) if due is not None else 0

    def _station_of_action(self, run: Run) -> str:
        return run.legs[run.pos].station

    def _ordered(self, cands: List[Tuple[str, Run]], t: int) -> List[Tuple[str, Run]]:
        by_station: Dict[str, list] = {}
        for number, run in cands:
            by_station.setdefault(self._station_of_action(run), []).append((run.train, self._delay(run, t)))
        keyed = []
        for number, run in cands:
            others = [(tr, d) for tr, d in by_station[self._station_of_action(run)] if tr.number != number]
            keyed.append((self.rank(run.train, t, self._delay(run, t), others), number, run))
        keyed.sort(key=lambda x: (x[0], x[1]))
        return [(n, r) for _, n, r in keyed]

    def _step(self, t: int) -> bool:
        moved = False
        arrivals = [(n, r) for n, r in self.runs.items()
                    if r.state in (NOT_STARTED, ON_TRACK) and r.ready <= t]
        for number, run in self._ordered(arrivals, t):
            lg = run.legs[run.pos]
            if not self._capacity_ok(lg.station, t):
                continue
            lg.x_AT = t
            run.state = AT_STATION
            self._set_ready(number, run)
            moved = True
        departures = [(n, r) for n, r in self.runs.items() if r.state == AT_STATION and r.ready <= t]
        for number, run in self._ordered(departures, t):
            lg = run.legs[run.pos]
            if run.pos == len(run.legs) - 1:
                lg.x_DT = t
                run.state = DONE
                if lg.x_AT == t:
                    self.point_visits.setdefault((lg.station, t), set()).add(number)
                moved = True
                continue
            if lg.track is None or not self._track_free(lg.track, t):
                continue
            lg.x_DT = t
            if lg.x_AT == t:
                self.point_visits.setdefault((lg.station, t), set()).add(number)
            self.last_dep[lg.track] = t
            run.pos += 1
            run.state = ON_TRACK
            self._set_ready(number, run)
            moved = True
        return moved

    def _next_time(self, t: int) -> Optional[int]:
        cands = [r.ready for r in self.runs.values() if r.state != DONE and r.ready > t]
        cands += [b.end for b in self.blockages if b.end > t]
        cands += [v + self.cfg.headway for v in self.last_dep.values() if v + self.cfg.headway > t]
        return min(cands) if cands else None

    def run(self) -> Timetable:
        horizon = self.cfg.horizon
        t = min([self.t0] + [r.ready for r in self.runs.values() if r.state != DONE])
        t = max(t, self.t0)
        while any(r.state != DONE for r in self.runs.values()):
            if horizon is not None and t > horizon:
                raise InfeasibleAfterRecovery(f"trains still running at the horizon {horizon}")
            while self._step(t):
                pass
            if all(r.state == DONE for r in self.runs.values()):
                break
            nxt = self._next_time(t)
            if nxt is None:
                stuck = sorted(n for n, r in self.runs.items() if r.state != DONE)
                raise InfeasibleAfterRecovery(f"dispatch deadlock at t={t}: {', '.join(stuck)}")
            t = nxt
        return self.timetable()

    def timetable(self) -> Timetable:
        entries = []
        for number in self.tt.ordered_trains():
            run = self.runs.get(number)
            if run is None:
                continue
            for lg in run.legs:
                o_AT = lg.o_AT if lg.o_AT is not None else lg.x_AT
                o_DT = lg.o_DT if lg.o_DT is not None else lg.x_DT
                entries.append(ScheduleEntry(number, lg.station, o_AT, o_DT, lg.x_AT, lg.x_DT,
                                             None, lg.track))
        out = Timetable(self.tt.trains.values(), entries)
        assign_platforms(self.net, out, self.blockages)
        return out


def dispatch(net: RailwayNetwork, timetable: Timetable, t0: int, blockages: Sequence[Blockage] = (),
             rank: Optional[RankFn] = None, config: Optional[DispatchConfig] = None,
             plan: Optional[Plan] = None, on_track_release: Optional[Dict[str, int]] = None) -> Timetable:
    """Re-time every movement from ``t0`` on; earlier movements are kept."""
    return Dispatcher(net, timetable, t0, blockages, rank, config, plan, on_track_release).run()
