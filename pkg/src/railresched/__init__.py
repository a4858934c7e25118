"""Disaster-aware railway rescheduling with station and train agents."""
from .agents import SimReport, Simulation, run_simulation
from .constraints import PriorityPolicy, validate_schedule
from .estimator import CentralizedRescheduler, DisasterRescheduler
from .exceptions import RailReschedError
from .network import (
    Category,
    Direction,
    RailwayNetwork,
    Route,
    ScheduleEntry,
    Station,
    Timetable,
    TrackSegment,
    Train,
    Violation,
    build_network,
    enumerate_routes,
    validate_timetable,
)
from .petri import (
    Marking,
    PetriNet,
    check_state_equation,
    fire,
    fire_sequence,
    incidence_matrix,
    reachability_analysis,
)
from .presets import PRESETS, build_preset
from .rescheduler import (
    DisasterEvent,
    RecoveryModel,
    RescheduleResult,
    centralized_baseline,
    reschedule,
    wait_in_place_baseline,
)
from .runner import ScenarioOutcome, run_scenario

__version__ = "0.1.0"

__all__ = [
    "SimReport", "Simulation", "run_simulation", "PriorityPolicy", "validate_schedule",
    "CentralizedRescheduler", "DisasterRescheduler", "RailReschedError", "Category", "Direction",
    "RailwayNetwork", "Route", "ScheduleEntry", "Station", "Timetable", "TrackSegment", "Train",
    "Violation", "build_network", "enumerate_routes", "validate_timetable", "Marking", "PetriNet",
    "check_state_equation", "fire", "fire_sequence", "incidence_matrix", "reachability_analysis",
    "PRESETS", "build_preset", "DisasterEvent", "RecoveryModel", "RescheduleResult",
    "centralized_baseline", "reschedule", "wait_in_place_baseline", "ScenarioOutcome",
    "run_scenario", "__version__",
]
