"""Run a scenario file end to end: distributed agents plus the central baseline."""
from __future__ import annotations

from dataclasses import dataclass

from .agents import SimReport, run_simulation
from .io.formats import ScenarioSpec
from .io.report import DelayReport, build_report
from .network import RailwayNetwork, Timetable


@dataclass
class ScenarioOutcome:
    spec: ScenarioSpec
    net: RailwayNetwork
    timetable: Timetable
    distributed: SimReport
    baseline: SimReport
    report: DelayReport


def run_scenario(spec: ScenarioSpec) -> ScenarioOutcome:
    net, tt = spec.load()
    kw = dict(policy=spec.policy, seed=spec.seed, horizon=spec.horizon,
              headway=spec.headway, min_dwell=spec.min_dwell)
    dist = run_simulation(net, tt, spec.events, **kw)
    base = run_simulation(net, tt, spec.events, planner="centralized", levels=spec.baseline_levels,
                          latency=spec.baseline_latency, **kw)
    report = build_report(spec.id, tt, dist, base, [e.t_D for e in spec.events])
    return ScenarioOutcome(spec, net, tt, dist, base, report)
