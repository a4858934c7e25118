"""Estimator-style wrappers around the rescheduler.

``fit`` takes ``X = (network, timetable)`` and checks it; ``predict`` takes one
or more disaster events and returns one :class:`RescheduleResult` per event,
each planned against the fitted timetable.  ``score`` is the negated mean
total delay so that higher is better.
"""
from __future__ import annotations

from typing import List, Optional

from sklearn.base import BaseEstimator

from .constraints.priority import PriorityPolicy
from .rescheduler.core import RescheduleResult, centralized_baseline, reschedule
from .validation import check_events, check_is_fitted, check_positive_int, check_timetable, check_Xy


class DisasterRescheduler(BaseEstimator):
    """Distributed case-based rescheduling after a disaster."""

    def __init__(self, policy: Optional[PriorityPolicy] = None, seed: int = 0, headway: int = 5,
                 min_dwell: int = 1, horizon: Optional[int] = None, strict: bool = True):
        self.policy = policy
        self.seed = seed
        self.headway = headway
        self.min_dwell = min_dwell
        self.horizon = horizon
        self.strict = strict

    def _check_params(self):
        check_positive_int(self.seed, "seed")
        check_positive_int(self.headway, "headway")
        check_positive_int(self.min_dwell, "min_dwell")
        if self.horizon is not None:
            check_positive_int(self.horizon, "horizon", 1)
        if self.policy is not None and not isinstance(self.policy, PriorityPolicy):
            raise TypeError("policy must be a PriorityPolicy or None")

    def fit(self, X, y=None):
        self._check_params()
        net, tt = check_Xy(X)
        self.timetable_ = check_timetable(net, tt, self.strict)
        self.net_ = net
        self.n_trains_ = len(tt.trains)
        return self

    def _plan_one(self, event, seed) -> RescheduleResult:
        return reschedule(self.net_, self.timetable_, event, self.policy, seed,
                          headway=self.headway, min_dwell=self.min_dwell, horizon=self.horizon)

    def predict(self, events) -> List[RescheduleResult]:
        check_is_fitted(self)
        evs = check_events(self.net_, events)
        return [self._plan_one(ev, self.seed + i) for i, ev in enumerate(evs)]

    def score(self, events, y=None) -> float:
        results = self.predict(events)
        if not results:
            return 0.0
        return -sum(r.total_delay for r in results) / len(results)


class CentralizedRescheduler(DisasterRescheduler):
    """The same plans, decided centrally after a reporting delay of ``levels * latency``."""

    def __init__(self, policy: Optional[PriorityPolicy] = None, seed: int = 0, headway: int = 5,
                 min_dwell: int = 1, horizon: Optional[int] = None, strict: bool = True,
                 levels: int = 2, latency: int = 3):
        super().__init__(policy, seed, headway, min_dwell, horizon, strict)
        self.levels = levels
        self.latency = latency

    def _check_params(self):
        super()._check_params()
        check_positive_int(self.levels, "levels")
        check_positive_int(self.latency, "latency")

    def _plan_one(self, event, seed) -> RescheduleResult:
        return centralized_baseline(self.net_, self.timetable_, event, self.policy, seed,
                                    levels=self.levels, latency=self.latency, headway=self.headway,
                                    min_dwell=self.min_dwell, horizon=self.horizon)
