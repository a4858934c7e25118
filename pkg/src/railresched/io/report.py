"""Delay reports comparing the distributed planner with the central baseline."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

from .formats import format_hhmm

TABLE, DELIMITED = "table", "delimited"


@dataclass(frozen=True)
class ReportRow:
    train: str
    train_id: int
    delay: int
    baseline_delay: int
    decisions: str
    cases: str
    arrival: Optional[int] = None  # terminal arrival under the distributed plan


@dataclass
class DelayReport:
    scenario: str
    rows: List[ReportRow] = field(default_factory=list)
    distributed_total: int = 0
    baseline_total: int = 0
    disaster_times: List[int] = field(default_factory=list)
    recovery_times: List[int] = field(default_factory=list)

    def __post_init__(self):
        self.rows = sorted(self.rows, key=lambda r: (r.train_id, r.train))
        if self.distributed_total != sum(r.delay for r in self.rows):
            raise ValueError("distributed total differs from the sum of the rows")
        if self.baseline_total != sum(r.baseline_delay for r in self.rows):
            raise ValueError("baseline total differs from the sum of the rows")


def build_report(scenario: str, timetable, sim, baseline, onsets=()) -> DelayReport:
    """Rows for every train that received a decision in either run."""
    def by_train(report):
        out = {}
        for rec in report.decisions:
            out.setdefault(rec[1], []).append(rec)
        return out

    dist, base = by_train(sim), by_train(baseline)
    rows = []
    for number in timetable.ordered_trains():
        if number not in dist and number not in base:
            continue
        recs = dist.get(number, [])
        legs = sim.schedule.itinerary(number)
        rows.append(ReportRow(
            number, timetable.trains[number].id, sim.per_train_delay[number],
            baseline.per_train_delay[number],
            ",".join(r[2] for r in recs) or "-", ",".join(r[3] for r in recs) or "-",
            legs[-1].x_AT if legs else None))
    listed = {r.train for r in rows}
    for number, d in sim.per_train_delay.items():
        if number not in listed and (d or baseline.per_train_delay[number]):
            raise ValueError(f"train {number} is delayed without any decision")
    return DelayReport(scenario, rows, sim.total_delay, baseline.total_delay,
                       sorted(onsets), sorted(sim.recovery.values()))


_HEAD = ("train", "delay", "baseline", "decisions", "cases", "arrival")


def _cells(r: ReportRow):
    return (r.train, str(r.delay), str(r.baseline_delay), r.decisions, r.cases,
            format_hhmm(r.arrival) if r.arrival is not None else "-")


def emit_report(report: DelayReport, format: str = TABLE) -> str:
    body = [_cells(r) for r in report.rows]
    total = ("TOTAL", str(report.distributed_total), str(report.baseline_total), "", "", "")
    if format == DELIMITED:
        lines = ["\t".join(_HEAD)] + ["\t".join(c) for c in body] + ["\t".join(total)]
        return "\n".join(lines) + "\n"
    if format != TABLE:
        raise ValueError(f"unknown report format {format!r}")
    widths = [max(len(row[i]) for row in [_HEAD, total] + body) for i in range(len(_HEAD))]

    def fmt(cells):
        return "  ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip()

    lines = [f"scenario {report.scenario}"]
    for t in report.disaster_times:
        lines.append(f"disaster at {format_hhmm(t)}")
    for t in report.recovery_times:
        lines.append(f"recovery at {format_hhmm(t)}")
    lines += [fmt(_HEAD), fmt(["-" * w for w in widths])] + [fmt(c) for c in body]
    lines += [fmt(["-" * w for w in widths]), fmt(total)]
    lines.append(f"distributed total {report.distributed_total} min, "
                 f"centralized baseline total {report.baseline_total} min")
    return "\n".join(lines) + "\n"
