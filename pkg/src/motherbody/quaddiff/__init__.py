"""Quadratic differentials, their horizontal trajectories and critical graphs."""
from .differential import (QuadraticDifferential, SingularPoint, build_theta,
                           differential_from_factors, singular_points)
from .graph import (GraphEdge, StrebelResult, TrajectoryGraph, build_DK0, check_infinity,
                    spans_all_branch_points, strebel_surrogate)
from .trace import Trajectory, snap_radius, trace_trajectory

__all__ = ["QuadraticDifferential", "SingularPoint", "build_theta", "differential_from_factors",
           "singular_points", "GraphEdge", "StrebelResult", "TrajectoryGraph", "build_DK0",
           "check_infinity", "spans_all_branch_points", "strebel_surrogate", "Trajectory",
           "snap_radius", "trace_trajectory"]
