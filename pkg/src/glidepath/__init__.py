"""Emergency glide trajectory planning after loss of thrust.

Dubins-airplane trajectories to candidate runways, ranked by safety
metrics, with glide-ratio estimation from recorded flight data feeding
back into replanning.
"""

from ._accel import backend_name
from .dubins import Configuration2D, GlidePath, shortest_csc
from .estimation import EstimatorConfig, GlideEstimate, SensorSample, estimate
from .geodesy import GeoPosition, LocalFrame, LocalPoint, project, unproject
from .loop import LoopConfig, LoopEvent, replay
from .metrics import CandidateSet, SafetyReport, rank
from .performance import CLEAN, DragConfig, PerformanceModel, glide_ratio, turn_radius
from .planner import AircraftState, PlanRequest, PlanResult, RunwaySpec, generate, generate_all

__version__ = "0.1.0"

__all__ = [
    "AircraftState", "CLEAN", "CandidateSet", "Configuration2D", "DragConfig",
    "EstimatorConfig", "GeoPosition", "GlideEstimate", "GlidePath", "LocalFrame",
    "LocalPoint", "LoopConfig", "LoopEvent", "PerformanceModel", "PlanRequest",
    "PlanResult", "RunwaySpec", "SafetyReport", "SensorSample", "backend_name",
    "estimate", "generate", "generate_all", "glide_ratio", "project", "rank",
    "replay", "shortest_csc", "turn_radius", "unproject",
]
