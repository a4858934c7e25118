"""Input checks shared by the estimator layer and the command line."""
from __future__ import annotations

from typing import Iterable, List, Sequence, Tuple

from .constraints.checks import validate_schedule
from .exceptions import InvalidNetwork, InvalidTimetable, NotFittedError
from .network import RailwayNetwork, Timetable, validate_timetable
from .rescheduler.recovery import DisasterEvent


def check_network(net) -> RailwayNetwork:
    if not isinstance(net, RailwayNetwork):
        raise TypeError(f"expected a RailwayNetwork, got {type(net).__name__}")
    if not net.stations:
        raise InvalidNetwork("network has no stations")
    return net


def check_timetable(net: RailwayNetwork, timetable, strict: bool = True) -> Timetable:
    """The timetable, after its planned times and (with ``strict``) its feasibility are checked."""
    if not isinstance(timetable, Timetable):
        raise TypeError(f"expected a Timetable, got {type(timetable).__name__}")
    found = validate_timetable(net, timetable)
    if strict and not found:
        found = validate_schedule(net, timetable)
    if found:
        v = found[0]
        more = f" (and {len(found) - 1} more)" if len(found) > 1 else ""
        raise InvalidTimetable(f"{v.rule} violated by train {v.train}: {v.detail}{more}")
    return timetable


def check_events(net: RailwayNetwork, events) -> List[DisasterEvent]:
    """A list of events, each checked against ``net``; a single event is wrapped."""
    if isinstance(events, DisasterEvent):
        events = [events]
    out = list(events)
    for ev in out:
        if not isinstance(ev, DisasterEvent):
            raise TypeError(f"expected DisasterEvent items, got {type(ev).__name__}")
        ev.check(net)
    return out


def check_Xy(X) -> Tuple[RailwayNetwork, Timetable]:
    """Unpack ``X = (network, timetable)``."""
    if not isinstance(X, Sequence) or len(X) != 2:
        raise TypeError("X must be a (network, timetable) pair")
    net, tt = X
    return check_network(net), tt


def check_is_fitted(estimator, attributes: Iterable[str] = ("net_", "timetable_")) -> None:
    missing = [a for a in attributes if not hasattr(estimator, a)]
    if missing:
        raise NotFittedError(f"{type(estimator).__name__} is not fitted yet; call fit first")


def check_positive_int(value, name: str, minimum: int = 0) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise ValueError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return value
