from .cases import (
    CASE_KINDS,
    NO_CHANGE,
    REORDER,
    REROUTE,
    RETIME,
    RescheduleDecision,
    handle_case1,
    handle_case2,
    handle_case3,
    locate,
    minimize_station_delay,
    minimize_track_delay,
)
from .core import (
    RescheduleResult,
    centralized_baseline,
    classify,
    delay_components,
    reschedule,
    terminal_delays,
    total_delay,
    wait_in_place_baseline,
)
from .dispatch import DispatchConfig, Plan, dispatch
from .recovery import DisasterEvent, RecoveryModel, buffer_time, sample_recovery

__all__ = [
    "CASE_KINDS", "NO_CHANGE", "REORDER", "REROUTE", "RETIME", "RescheduleDecision",
    "handle_case1", "handle_case2", "handle_case3", "locate", "minimize_station_delay",
    "minimize_track_delay", "RescheduleResult", "centralized_baseline", "classify",
    "delay_components", "reschedule", "terminal_delays", "total_delay",
    "wait_in_place_baseline", "DispatchConfig", "Plan", "dispatch", "DisasterEvent",
    "RecoveryModel", "buffer_time", "sample_recovery",
]
