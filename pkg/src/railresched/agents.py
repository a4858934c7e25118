"""Deterministic discrete-event simulation of station and train agents.

Every station and every train has an agent.  Trains talk to stations only;
stations talk to trains and to their neighbouring stations.  Messages are
delivered with zero latency but still go through the event queue, so the
processing order is a pure function of ``(at, seq)``.
"""
from __future__ import annotations

import hashlib
import heapq
import json
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .constraints.checks import validate_schedule
from .constraints.priority import PriorityPolicy, priority_key
from .exceptions import HorizonExceeded, IllegalMessageRoute, InfeasibleAfterRecovery
from .network import RailwayNetwork, Timetable
from .rescheduler.cases import AT_STATION, ON_TRACK, locate
from .rescheduler.core import RescheduleResult, centralized_baseline, reschedule, terminal_delays
from .rescheduler.recovery import DisasterEvent, sample_recovery

STATION, TRAIN = "StationAgent", "TrainAgent"

DISASTER_NOTICE = "DisasterNotice"
RECOVERY_STATUS = "RecoveryStatus"
RESOURCE_REQUEST = "ResourceRequest"
RESOURCE_GRANT = "ResourceGrant"
RESOURCE_DENY = "ResourceDeny"
SCHEDULE_UPDATE = "ScheduleUpdate"

ARRIVAL, DEPARTURE, DELIVERY, ONSET, RECOVERY = (
    "Arrival", "Departure", "MessageDelivery", "DisasterOnset", "RecoveryComplete")

DEFAULT_LOOKAHEAD = 10


@dataclass(frozen=True, order=True)
class AgentId:
    kind: str
    ref: str

    def __str__(self):
        return f"{'S' if self.kind == STATION else 'T'}:{self.ref}"


def station_id(code: str) -> AgentId:
    return AgentId(STATION, code)


def train_id(number: str) -> AgentId:
    return AgentId(TRAIN, number)


@dataclass(frozen=True)
class Message:
    sender: AgentId
    to: AgentId
    at: int
    kind: str
    payload: Tuple = ()

    def digest(self) -> str:
        return hashlib.sha256(repr(self.payload).encode()).hexdigest()[:12]

    def record(self) -> str:
        return f"{self.at}\t{self.sender}\t{self.to}\t{self.kind}\t{self.digest()}"


def check_route(net: RailwayNetwork, msg: Message) -> None:
    """Raise unless the message respects the communication rules."""
    s, d = msg.sender, msg.to
    if s.kind == TRAIN and d.kind != STATION:
        raise IllegalMessageRoute(f"train {s.ref} may only message stations, not {d}")
    if s.kind == STATION and d.kind == STATION:
        if d.ref == s.ref or d.ref not in net.neighbors(s.ref):
            raise IllegalMessageRoute(f"station {s.ref} is not a neighbour of {d.ref}")
    if (s.kind == TRAIN) != (msg.kind == RESOURCE_REQUEST):
        raise IllegalMessageRoute(f"{s} cannot send {msg.kind}")


@dataclass(order=True)
class SimEvent:
    at: int
    seq: int
    action: str = field(compare=False)
    data: object = field(compare=False, default=None)


# ----- agents ----------------------------------------------------------------

@dataclass
class StationAgent:
    code: str
    net: RailwayNetwork
    timetable: Timetable
    policy: PriorityPolicy = field(default_factory=PriorityPolicy)

    @property
    def id(self) -> AgentId:
        return station_id(self.code)


@dataclass
class StationState:
    clock: int = 0
    # granted platform reservations: train -> (arrival, departure)
    reservations: Dict[str, Tuple[int, int]] = field(default_factory=dict)
    # blocked platforms as (index, blocked until)
    blocked: FrozenSet[Tuple[int, int]] = frozenset()
    seen_events: FrozenSet[str] = frozenset()
    notices: Tuple[str, ...] = ()


def _check_inbox(me: AgentId, net: RailwayNetwork, inbox: Iterable[Message]) -> None:
    for m in inbox:
        if m.to != me:
            raise ValueError(f"message for {m.to} delivered to {me}")
        check_route(net, m)


def station_agent_step(agent: StationAgent, inbox: Sequence[Message],
                       state: StationState) -> Tuple[List[Message], StationState]:
    _check_inbox(agent.id, agent.net, inbox)
    out: List[Message] = []
    now = state.clock
    reservations = dict(state.reservations)
    seen = set(state.seen_events)
    blocked = set(state.blocked)
    notices = list(state.notices)

    requests = [m for m in inbox if m.kind == RESOURCE_REQUEST]
    for m in inbox:
        if m.kind == DISASTER_NOTICE:
            ev_id = dict(m.payload)["event"]
            notices.append(ev_id)
        elif m.kind == RECOVERY_STATUS:
            info = dict(m.payload)
            if info["event"] in seen:
                continue
            seen.add(info["event"])
            blocked = {(k, u) for k, u in blocked if k not in info.get("platforms", ())}
            for nb in agent.net.neighbors(agent.code):
                if nb != m.sender.ref:
                    out.append(Message(agent.id, station_id(nb), now, RECOVERY_STATUS, m.payload))

    if requests:
        p = agent.net.platforms(agent.code)
        trains = agent.timetable.trains
        pool = []
        for m in requests:
            info = dict(m.payload)
            pool.append((trains[m.sender.ref], info.get("delay", 0), m, info))
        contenders = [(tr, d) for tr, d, _, _ in pool]

        def key(item):
            tr, d, _, info = item
            return priority_key(agent.policy, tr, info["arrival"], d,
                                [c for c in contenders if c[0].number != tr.number])

        for tr, d, m, info in sorted(pool, key=key):
            a, dep = info["arrival"], info["departure"]
            present = sum(1 for n, (ra, rd) in reservations.items()
                          if n != tr.number and (ra <= a < rd or ra == rd == a))
            unusable = sum(1 for _, until in blocked if a < until)
            if present + unusable < p:
                reservations[tr.number] = (a, dep)
                out.append(Message(agent.id, m.sender, now, RESOURCE_GRANT, m.payload))
            else:
                out.append(Message(agent.id, m.sender, now, RESOURCE_DENY, m.payload))
    for m in out:
        check_route(agent.net, m)
    return out, StationState(now, reservations, frozenset(blocked), frozenset(seen), tuple(notices))


@dataclass
class TrainAgent:
    number: str
    net: RailwayNetwork
    lookahead: int = DEFAULT_LOOKAHEAD

    @property
    def id(self) -> AgentId:
        return train_id(self.number)


@dataclass
class TrainState:
    clock: int = 0
    # current plan: (station, x_AT, x_DT, o_AT)
    plan: Tuple[Tuple[str, int, int, int], ...] = ()
    requested: FrozenSet[str] = frozenset()
    mdp: str = "not_started"
    grants: Tuple[str, ...] = ()
    version: int = 0


def train_agent_step(agent: TrainAgent, inbox: Sequence[Message],
                     state: TrainState) -> Tuple[List[Message], TrainState]:
    _check_inbox(agent.id, agent.net, inbox)
    plan, requested, grants, version = state.plan, set(state.requested), list(state.grants), state.version
    for m in inbox:
        if m.kind == SCHEDULE_UPDATE:
            plan = tuple(dict(m.payload)["plan"])
            requested = {st for st, a, _, _ in plan if a <= state.clock}
            version += 1
        elif m.kind == RESOURCE_GRANT:
            grants.append(dict(m.payload)["station"])
    out = []
    # ask the next station ahead of arrival
    for st, a, d, o in plan:
        if st in requested or a < state.clock:
            continue
        send_at = max(state.clock, a - agent.lookahead)
        payload = (("arrival", a), ("delay", max(0, a - o)), ("departure", d), ("station", st),
                   ("train", agent.number))
        out.append(Message(agent.id, station_id(st), send_at, RESOURCE_REQUEST, payload))
        requested.add(st)
        break
    for m in out:
        check_route(agent.net, m)
    return out, TrainState(state.clock, plan, frozenset(requested), state.mdp, tuple(grants), version)


# ----- report ------------------------------------------------------------------

@dataclass
class SimReport:
    per_train_delay: Dict[str, int]
    total_delay: int
    decisions: List[tuple]
    message_log: List[Message]
    horizon: int
    schedule: Optional[Timetable] = None
    recovery: Dict[str, int] = field(default_factory=dict)
    results: List[RescheduleResult] = field(default_factory=list)

    def log_lines(self) -> List[str]:
        return [m.record() for m in self.message_log]

    def serialize(self) -> str:
        doc = {
            "horizon": self.horizon,
            "total_delay": self.total_delay,
            "per_train_delay": self.per_train_delay,
            "recovery": self.recovery,
            "decisions": [list(d) for d in self.decisions],
            "messages": self.log_lines(),
            "schedule": [[e.train, e.station, e.o_AT, e.o_DT, e.x_AT, e.x_DT, e.platform, e.track]
                         for e in (self.schedule.entries if self.schedule else [])],
        }
        return json.dumps(doc, sort_keys=True, separators=(",", ":"))


# ----- event loop --------------------------------------------------------------

def event_seeds(seed: int, n: int) -> List[int]:
    """Independent per-event seeds derived from the scenario seed."""
    return [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(seed).spawn(n)]


class Simulation:
    def __init__(self, net: RailwayNetwork, timetable: Timetable, events: Sequence[DisasterEvent],
                 policy: Optional[PriorityPolicy], seed: int, horizon: int, planner: str = "distributed",
                 lookahead: int = DEFAULT_LOOKAHEAD, headway: int = 5, min_dwell: int = 1,
                 levels: int = 2, latency: int = 3):
        self.net, self.original = net, timetable
        self.plan = timetable.copy()
        self.events = sorted(events, key=lambda e: (e.t_D, e.id))
        self.policy = policy or PriorityPolicy()
        self.seed, self.horizon, self.planner = seed, horizon, planner
        self.kw = dict(headway=headway, min_dwell=min_dwell)
        self.levels, self.latency = levels, latency
        self.queue: List[SimEvent] = []
        self.seq = 0
        self.log: List[Message] = []
        self.stations = {c: StationAgent(c, net, timetable, self.policy) for c in net.stations}
        self.station_states = {c: StationState() for c in net.stations}
        self.trains = {n: TrainAgent(n, net, lookahead) for n in timetable.trains}
        self.train_states = {n: TrainState() for n in timetable.trains}
        self.versions = {n: 0 for n in timetable.trains}
        self.decisions: List[tuple] = []
        self.results: List[RescheduleResult] = []
        self.recovery: Dict[str, int] = {}
        self.done: set = set()
        self.blockages = []

    def push(self, at: int, action: str, data=None):
        heapq.heappush(self.queue, SimEvent(at, self.seq, action, data))
        self.seq += 1

    def _plan_tuple(self, number: str):
        return tuple((e.station, e.x_AT, e.x_DT, e.o_AT) for e in self.plan.itinerary(number))

    def _schedule_movements(self, number: str, after: Optional[int] = None):
        v = self.versions[number]
        for i, e in enumerate(self.plan.itinerary(number)):
            if after is None or e.x_AT >= after:
                self.push(e.x_AT, ARRIVAL, (number, e.station, v))
            if after is None or e.x_DT >= after:
                self.push(e.x_DT, DEPARTURE, (number, e.station, v))

    def send(self, msgs: Iterable[Message]):
        for m in msgs:
            check_route(self.net, m)
            self.push(m.at, DELIVERY, m)

    def _train_step(self, number: str, inbox: List[Message], now: int):
        st = self.train_states[number]
        st = TrainState(now, st.plan, st.requested, st.mdp, st.grants, st.version)
        out, st = train_agent_step(self.trains[number], inbox, st)
        self.train_states[number] = st
        self.send(out)

    def _station_step(self, code: str, inbox: List[Message], now: int):
        st = self.station_states[code]
        st = StationState(now, st.reservations, st.blocked, st.seen_events, st.notices)
        out, st = station_agent_step(self.stations[code], inbox, st)
        self.station_states[code] = st
        self.send(out)

    def run(self) -> SimReport:
        last = max((max(e.x_AT, e.x_DT) for e in self.plan.entries), default=0)
        if last > self.horizon:
            raise HorizonExceeded(f"timetable runs to {last}, past the horizon {self.horizon}")
        seeds = event_seeds(self.seed, len(self.events))
        for n in self.plan.ordered_trains():
            self.train_states[n] = TrainState(plan=self._plan_tuple(n))
            self._schedule_movements(n)
            first = self.plan.itinerary(n)
            if first:
                self.push(max(0, first[0].x_AT - self.trains[n].lookahead), DELIVERY, ("wake", n))
        for ev, s in zip(self.events, seeds):
            self.push(ev.t_D, ONSET, (ev, s))

        while self.queue:
            now = self.queue[0].at
            batch = []
            while self.queue and self.queue[0].at == now:
                batch.append(heapq.heappop(self.queue))
            if now > self.horizon and any(b.action in (ARRIVAL, DEPARTURE) for b in batch):
                raise HorizonExceeded(f"movement at {now} past the horizon {self.horizon}")
            self._process(now, batch)

        final = self.plan
        violations = validate_schedule(self.net, final, blockages=self.blockages)
        if violations:
            raise InfeasibleAfterRecovery(f"final schedule infeasible: {violations[0]}")
        per_train = terminal_delays(self.original, final)
        return SimReport(per_train, sum(per_train.values()), self.decisions, self.log, self.horizon,
                         final, self.recovery, self.results)

    def _process(self, now: int, batch: List[SimEvent]):
        inboxes: Dict[AgentId, List[Message]] = {}
        order: List[AgentId] = []
        for ev in sorted(batch):
            if ev.action == DELIVERY:
                if isinstance(ev.data, tuple) and ev.data and ev.data[0] == "wake":
                    aid = train_id(ev.data[1])
                    inboxes.setdefault(aid, [])
                    if aid not in order:
                        order.append(aid)
                    continue
                m: Message = ev.data
                self.log.append(m)
                inboxes.setdefault(m.to, []).append(m)
                if m.to not in order:
                    order.append(m.to)
            elif ev.action in (ARRIVAL, DEPARTURE):
                number, station, v = ev.data
                if v != self.versions[number]:
                    continue  # superseded by a schedule update
                self._movement(number, station, ev.action, now)
            elif ev.action == ONSET:
                self._onset(*ev.data, now)
            elif ev.action == RECOVERY:
                self._recovered(ev.data, now)
        # deliver batched messages; new zero-latency messages go to the next pass
        for aid in order:
            inbox = inboxes.get(aid, [])
            if aid.kind == STATION:
                self._station_step(aid.ref, inbox, now)
            else:
                self._train_step(aid.ref, inbox, now)

    def _movement(self, number: str, station: str, action: str, now: int):
        st = self.train_states[number]
        legs = self.plan.itinerary(number)
        mdp = AT_STATION if action == ARRIVAL else ON_TRACK
        if action == DEPARTURE and legs and legs[-1].station == station:
            mdp = "done"
            self.done.add(number)
        self.train_states[number] = TrainState(st.clock, st.plan, st.requested, mdp, st.grants, st.version)
        if action == DEPARTURE and mdp != "done":
            self._train_step(number, [], now)

    def _onset(self, event: DisasterEvent, seed: int, now: int):
        event.check(self.net)
        tau_R = sample_recovery(event.recovery, seed)
        t_R = event.t_D + tau_R
        self.recovery[event.id] = t_R
        self.blockages += event.blockages(t_R)
        origin = event.stations(self.net)
        home = origin[0]
        # incoming and outgoing trains of the disaster stations
        told = set()
        for n in self.plan.ordered_trains():
            legs = self.plan.itinerary(n)
            state, k = locate(legs, event.t_D)
            if state in (AT_STATION, ON_TRACK) and legs[k].station in origin and n not in told:
                told.add(n)
                self.send([Message(station_id(legs[k].station), train_id(n), now, DISASTER_NOTICE,
                                   (("event", event.id), ("t_D", event.t_D)))])
        for code in origin:
            for nb in self.net.neighbors(code):
                self.send([Message(station_id(code), station_id(nb), now, DISASTER_NOTICE,
                                   (("event", event.id), ("t_D", event.t_D)))])
            st = self.station_states[code]
            mine = frozenset((k, t_R) for s, k in event.blocked_platforms if s == code)
            self.station_states[code] = StationState(st.clock, st.reservations, st.blocked | mine,
                                                     st.seen_events, st.notices)

        if self.planner == "centralized":
            result = centralized_baseline(self.net, self.plan, event, self.policy, levels=self.levels,
                                          latency=self.latency, horizon=self.horizon, t_R=t_R, **self.kw)
        else:
            result = reschedule(self.net, self.plan, event, self.policy, horizon=self.horizon,
                                t_R=t_R, **self.kw)
        self.results.append(result)
        self.decisions += [(event.id,) + d.as_record() for d in result.decisions]
        self.plan = result.new_schedule
        for d in result.decisions:
            n = d.train
            self.versions[n] += 1
            self._schedule_movements(n, after=now)
            legs = self.plan.itinerary(n)
            state, k = locate(legs, now)
            sender = legs[min(k, len(legs) - 1)].station
            self.send([Message(station_id(sender), train_id(n), now, SCHEDULE_UPDATE,
                               (("event", event.id), ("plan", self._plan_tuple(n))))])
        self.push(t_R, RECOVERY, (event, home))

    def _recovered(self, data, now: int):
        event, home = data
        payload = (("event", event.id), ("platforms", tuple(sorted(k for s, k in event.blocked_platforms
                                                                   if s == home))),
                   ("tracks", tuple(sorted(event.blocked_tracks))), ("t_R", now))
        st = self.station_states[home]
        self.station_states[home] = StationState(st.clock, st.reservations, frozenset(),
                                                 st.seen_events | {event.id}, st.notices)
        for nb in self.net.neighbors(home):
            self.send([Message(station_id(home), station_id(nb), now, RECOVERY_STATUS, payload)])


def run_simulation(net: RailwayNetwork, timetable: Timetable, events: Sequence[DisasterEvent] = (),
                   policy: Optional[PriorityPolicy] = None, seed: int = 0, horizon: Optional[int] = None,
                   **kw) -> SimReport:
    """Run the agents over the whole timetable and return the outcome."""
    if horizon is None:
        horizon = timetable.horizon_end() + 1440
    return Simulation(net, timetable, events, policy, seed, horizon, **kw).run()
