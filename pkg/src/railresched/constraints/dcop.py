"""The distributed constraint model <Ag, X, D, C> for one disruption window.

This is a description of the problem, not a solver: the rescheduler fills
in the variables by its case procedure and ``validate_schedule`` evaluates
the constraints.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from ..network import RailwayNetwork, Timetable, leg_track

CONSTRAINT_FAMILIES = ("EQ1", "EQ2", "EQ3", "EQ4", "EQ5", "EQ6", "EQ7")


@dataclass(frozen=True)
class Constraint:
    family: str
    scope: Tuple[tuple, ...]


@dataclass
class DcopInstance:
    agents: List[str]
    owner: Dict[tuple, str]  # variable -> owning agent
    time_domain: range
    constraints: List[Constraint] = field(default_factory=list)

    @property
    def variables(self) -> List[tuple]:
        return list(self.owner)

    def domain(self, var: tuple):
        return self.time_domain if var[0] in ("x_AT", "x_DT") else (0, 1)

    @property
    def q(self) -> int:
        return len(self.agents)


def station_agent(code: str) -> str:
    return f"station:{code}"


def train_agent(number: str) -> str:
    return f"train:{number}"


def build_dcop(net: RailwayNetwork, timetable: Timetable, t_D: int, tau_R: int) -> DcopInstance:
    """Time variables and track indicators belong to trains, platform indicators to stations."""
    codes = sorted(net.stations, key=lambda c: net.stations[c].id)
    trains = timetable.ordered_trains()
    agents = [station_agent(c) for c in codes] + [train_agent(n) for n in trains]
    owner: Dict[tuple, str] = {}
    cons: List[Constraint] = []
    for n in trains:
        legs = timetable.itinerary(n)
        for e in legs:
            owner[("x_AT", n, e.station)] = train_agent(n)
            owner[("x_DT", n, e.station)] = train_agent(n)
            for k in range(1, net.platforms(e.station) + 1):
                owner[("P", n, e.station, k)] = station_agent(e.station)
            cons.append(Constraint("EQ2", (("x_AT", n, e.station),)))
            cons.append(Constraint("EQ3", tuple(("P", n, e.station, k)
                                                for k in range(1, net.platforms(e.station) + 1))))
        for prev, nxt in zip(legs, legs[1:]):
            tr = leg_track(net, prev, nxt)
            for t in net.tracks_between(prev.station, nxt.station):
                owner[("L", n, nxt.station, t.id)] = train_agent(n)
            cons.append(Constraint("EQ1", (("x_DT", n, prev.station), ("x_AT", n, nxt.station))))
            if tr is not None:
                cons.append(Constraint("EQ7", (("P", n, prev.station), ("L", n, nxt.station, tr.id))))
        held = tuple(v for v in owner if v[0] in ("P", "L") and v[1] == n)
        cons.append(Constraint("EQ6", held))
    for c in codes:
        scope = tuple(v for v in owner if v[0] == "P" and v[2] == c)
        if scope:
            cons.append(Constraint("EQ4", scope))
    for tid in sorted(net.tracks):
        scope = tuple(v for v in owner if v[0] == "L" and v[3] == tid)
        if len({v[1] for v in scope}) > 1:
            cons.append(Constraint("EQ5", scope))
    return DcopInstance(agents, owner, range(t_D, t_D + tau_R + 1), cons)
