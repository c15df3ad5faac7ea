from .spline_integration import DiscretePath, spline_path
from .uav_module import (PathSpec, TerrainModel, UavProblem, build_path,
                         collision_penalty, cost_terms, decode, export_waypoints, height_cost,
                         load_waypoints, path_length, smoothness_cost, terrain_height, total_cost)

__all__ = [
    'DiscretePath',
    'PathSpec',
    'TerrainModel',
    'UavProblem',
    'build_path',
    'collision_penalty',
    'cost_terms',
    'decode',
    'export_waypoints',
    'height_cost',
    'load_waypoints',
    'path_length',
    'smoothness_cost',
    'spline_path',
    'terrain_height',
    'total_cost',
]
