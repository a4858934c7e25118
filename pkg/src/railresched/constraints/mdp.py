"""Occupancy states of one train around a disaster station and their guarded moves."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, FrozenSet, Set, Tuple

from ..exceptions import UnknownState
from .occupancy import OccupancyState


class MdpState(str, Enum):
    ON_TRACK = "on_track"  # L_jil = 1, approaching the disaster station
    AT_DISASTER = "at_disaster"  # P_jik = 1 at the disaster station
    AT_NEIGHBOR = "at_neighbor"  # P_j'i'k = 1 at the neighbouring station


@dataclass(frozen=True)
class MdpModel:
    """Three-state model for the link (neighbor --track--> disaster station)."""

    disaster_station: str
    neighbor_station: str
    track: int
    platforms: int
    neighbor_platforms: int

    @property
    def states(self) -> Tuple[MdpState, ...]:
        return tuple(MdpState)

    def guards(self) -> Dict[str, Callable[[OccupancyState], bool]]:
        return {
            "platform_free@disaster":
                lambda occ: bool(occ.free_platforms(self.disaster_station, self.platforms)),
            "platform_free@neighbor":
                lambda occ: bool(occ.free_platforms(self.neighbor_station, self.neighbor_platforms)),
            "track_free": lambda occ: occ.track_free(self.track),
        }

    def transitions(self) -> Dict[MdpState, Tuple[Tuple[MdpState, FrozenSet[str]], ...]]:
        return {
            MdpState.ON_TRACK: ((MdpState.AT_DISASTER, frozenset({"platform_free@disaster"})),),
            MdpState.AT_DISASTER: ((MdpState.AT_NEIGHBOR,
                                    frozenset({"track_free", "platform_free@neighbor"})),),
            MdpState.AT_NEIGHBOR: ((MdpState.ON_TRACK,
                                    frozenset({"track_free", "platform_free@disaster"})),),
        }

    def state_of(self, occ: OccupancyState, train: str) -> MdpState:
        if any(j == train and l == self.track for j, _, l in occ.track_occ):
            return MdpState.ON_TRACK
        at = {i for j, i, _ in occ.platform_occ if j == train} | {i for j, i in occ.unassigned if j == train}
        if self.disaster_station in at:
            return MdpState.AT_DISASTER
        if self.neighbor_station in at:
            return MdpState.AT_NEIGHBOR
        raise UnknownState(f"train {train} is in none of the modelled states")


def mdp_enabled_transitions(model: MdpModel, occ: OccupancyState,
                            train: str) -> Set[Tuple[MdpState, FrozenSet[str]]]:
    current = model.state_of(occ, train)
    checks = model.guards()
    return {(target, guard) for target, guard in model.transitions()[current]
            if all(checks[g](occ) for g in guard)}
