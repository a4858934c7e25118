"""Dynamic train priority.

Levels are the integers 1..5 standing for y1 (Premium) .. y5 (Local).  An
order lists the levels from highest to lowest priority; a rank is the
1-based position of a level in the active order.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Tuple

from ..network import Train

NORMAL = "normal"
BUSY = "busy"
DELAYED = "delayed"

DAY = 1440


@dataclass(frozen=True)
class PriorityPolicy:
    normal_order: Tuple[int, ...] = (1, 2, 4, 5, 3)
    busy_order: Tuple[int, ...] = (1, 4, 5, 2, 3)
    # ties of the delayed order are broken by current delay, then train id
    delayed_order: Tuple[int, ...] = (4, 1, 5, 2, 3)
    busy_windows: Tuple[Tuple[int, int], ...] = ((540, 660), (1020, 1140))
    delay_threshold: int = 30

    def __post_init__(self):
        for order in (self.normal_order, self.busy_order, self.delayed_order):
            if sorted(order) != [1, 2, 3, 4, 5]:
                raise ValueError(f"order {order} is not a permutation of the five levels")
        spans = sorted(self.busy_windows)
        for (s0, e0), (s1, _) in zip(spans, spans[1:]):
            if s1 < e0:
                raise ValueError("busy windows overlap")
        for s, e in spans:
            if not 0 <= s < e <= DAY:
                raise ValueError(f"bad busy window {(s, e)}")

    def is_busy(self, t: int) -> bool:
        tod = t % DAY
        return any(s <= tod < e for s, e in self.busy_windows)

    def mode(self, t: int, delayed_long_distance: bool = False) -> str:
        if delayed_long_distance:
            return DELAYED
        return BUSY if self.is_busy(t) else NORMAL

    def order(self, mode: str) -> Tuple[int, ...]:
        return {NORMAL: self.normal_order, BUSY: self.busy_order, DELAYED: self.delayed_order}[mode]


def _context_delayed(policy: PriorityPolicy, train: Train, delay: int,
                     contenders: Optional[Iterable[Tuple[Train, int]]]) -> bool:
    pool = [(train, delay)]
    if contenders is not None:
        pool += list(contenders)
    return any(tr.long_distance and d > policy.delay_threshold for tr, d in pool)


def priority_rank(policy: PriorityPolicy, train: Train, t: int, delay: int = 0,
                  contenders: Optional[Iterable[Tuple[Train, int]]] = None) -> int:
    """Rank (1 = highest) of ``train`` at time ``t``.

    ``contenders`` are the other ``(train, current delay)`` pairs competing
    for the same station's resources; any long-distance train among them
    delayed beyond the threshold switches the contention set to the delayed
    order.
    """
    if delay < 0:
        raise ValueError("delay must be non-negative")
    mode = policy.mode(t, _context_delayed(policy, train, delay, contenders))
    return policy.order(mode).index(train.level) + 1


def priority_key(policy: PriorityPolicy, train: Train, t: int, delay: int = 0,
                 contenders: Optional[Iterable[Tuple[Train, int]]] = None):
    """Sort key for contention: rank, then smaller delay, then train id."""
    return (priority_rank(policy, train, t, max(delay, 0), contenders), max(delay, 0), train.id)
