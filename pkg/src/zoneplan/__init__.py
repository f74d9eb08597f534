"""Safe-zone motion planning among moving objects with uncertain motion."""

from .geometry import EuclidPoint, Footprint, PolarPoint, Region
from .planner import Planner, PlanGrid, PlanStep, RobotState, evaluate_objective, shortest_path
from .prediction import ObjectState, StateHistory, predict, update_states
from .safezone import SafeZone, build_safe_zone

__version__ = "0.1.0"

__all__ = [
    "EuclidPoint",
    "Footprint",
    "ObjectState",
    "PlanGrid",
    "PlanStep",
    "Planner",
    "PolarPoint",
    "Region",
    "RobotState",
    "SafeZone",
    "StateHistory",
    "build_safe_zone",
    "evaluate_objective",
    "predict",
    "shortest_path",
    "update_states",
]
