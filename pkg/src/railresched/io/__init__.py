from .formats import (
    BUNDLED,
    DATA_DIR,
    ScenarioSpec,
    bundled_scenarios,
    find_scenario,
    format_hhmm,
    parse_hhmm,
    parse_network_file,
    parse_network_text,
    parse_petri_file,
    parse_petri_text,
    parse_scenario_file,
    parse_scenario_text,
    parse_timetable_file,
    parse_timetable_text,
    serialize_network,
    serialize_petri,
    serialize_scenario,
    serialize_timetable,
)
from .report import DELIMITED, TABLE, DelayReport, ReportRow, build_report, emit_report

__all__ = [
    "BUNDLED", "DATA_DIR", "ScenarioSpec", "bundled_scenarios", "find_scenario", "format_hhmm",
    "parse_hhmm", "parse_network_file", "parse_network_text", "parse_petri_file",
    "parse_petri_text", "parse_scenario_file", "parse_scenario_text", "parse_timetable_file",
    "parse_timetable_text", "serialize_network", "serialize_petri", "serialize_scenario",
    "serialize_timetable", "DELIMITED", "TABLE", "DelayReport", "ReportRow", "build_report",
    "emit_report",
]
