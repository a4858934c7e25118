from .checks import (
    RULES,
    check_continuity,
    check_platform_capacity,
    check_track_exclusivity,
    compute_delay,
    resource_of,
    validate_schedule,
)
from .dcop import DcopInstance, build_dcop
from .mdp import MdpModel, MdpState, mdp_enabled_transitions
from .occupancy import (
    Blockage,
    OccupancyState,
    OccupancyTimeline,
    Resource,
    assign_platforms,
)
from .priority import BUSY, DELAYED, NORMAL, PriorityPolicy, priority_key, priority_rank

__all__ = [
    "RULES", "check_continuity", "check_platform_capacity", "check_track_exclusivity",
    "compute_delay", "resource_of", "validate_schedule", "DcopInstance", "build_dcop",
    "MdpModel", "MdpState", "mdp_enabled_transitions", "Blockage", "OccupancyState",
    "OccupancyTimeline", "Resource", "assign_platforms", "BUSY", "DELAYED", "NORMAL",
    "PriorityPolicy", "priority_key", "priority_rank",
]
