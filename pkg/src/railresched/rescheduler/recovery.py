"""Disaster events and the random recovery time."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, List, Optional, Tuple

import numpy as np

from ..constraints.occupancy import Blockage
from ..exceptions import InvalidInterval, InvalidNetwork, UnknownStation
from ..network import RailwayNetwork

DENSITIES = ("uniform", "triangular")


@dataclass(frozen=True)
class RecoveryModel:
    tau1: int
    tau2: int
    density: str = "uniform"

    def __post_init__(self):
        if self.tau1 < 0 or self.tau1 > self.tau2:
            raise InvalidInterval(f"recovery interval [{self.tau1}, {self.tau2}] is empty or negative")
        if self.density not in DENSITIES:
            raise ValueError(f"unknown density {self.density!r}")

    def expected(self) -> float:
        # both supported densities are symmetric about the midpoint
        return (self.tau1 + self.tau2) / 2


def sample_recovery(model: RecoveryModel, rng_seed) -> int:
    """Integer recovery duration, deterministic for a given seed."""
    if model.tau1 > model.tau2:
        raise InvalidInterval(f"[{model.tau1}, {model.tau2}]")
    if model.tau1 == model.tau2:
        return model.tau1
    rng = np.random.default_rng(rng_seed)
    if model.density == "uniform":
        value = int(rng.integers(model.tau1, model.tau2 + 1))
    else:
        value = int(round(rng.triangular(model.tau1, model.expected(), model.tau2)))
    return min(max(value, model.tau1), model.tau2)


@dataclass(frozen=True)
class DisasterEvent:
    t_D: int
    blocked_platforms: FrozenSet[Tuple[str, int]] = frozenset()
    blocked_tracks: FrozenSet[int] = frozenset()
    recovery: RecoveryModel = field(default_factory=lambda: RecoveryModel(20, 20))
    id: str = "E1"

    def __post_init__(self):
        object.__setattr__(self, "blocked_platforms", frozenset(self.blocked_platforms))
        object.__setattr__(self, "blocked_tracks", frozenset(self.blocked_tracks))
        if not self.blocked_platforms and not self.blocked_tracks:
            raise ValueError("a disaster must block at least one resource")

    def check(self, net: RailwayNetwork) -> None:
        for st, k in self.blocked_platforms:
            if st not in net.stations:
                raise UnknownStation(st)
            if not 1 <= k <= net.platforms(st):
                raise InvalidNetwork(f"{st} has no platform {k}")
        for tid in self.blocked_tracks:
            net.track(tid)

    def stations(self, net: RailwayNetwork) -> List[str]:
        """Stations touched by the disaster: blocked platforms and blocked-track ends."""
        out = {st for st, _ in self.blocked_platforms}
        for tid in self.blocked_tracks:
            out.update(net.track(tid).endpoints)
        return sorted(out, key=lambda c: net.stations[c].id)

    def blockages(self, t_R: int) -> List[Blockage]:
        out = [Blockage("platform", ref, self.t_D, t_R) for ref in sorted(self.blocked_platforms)]
        out += [Blockage("track", tid, self.t_D, t_R) for tid in sorted(self.blocked_tracks)]
        return out


def buffer_time(event: DisasterEvent) -> int:
    """Absolute buffer horizon: onset plus the expected recovery, rounded down."""
    return event.t_D + math.floor(event.recovery.expected())
