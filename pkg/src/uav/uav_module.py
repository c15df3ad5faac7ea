from __future__ import annotations

import logging
import os
from typing import Any, Dict, Optional, Sequence

import numpy as np

from src.engine.engine_module import Bounds, ConfigurationError, Problem
from .spline_integration import DiscretePath, spline_path

logger = logging.getLogger(__name__)

DEFAULT_START = (0.0, 0.0, 20.0)
DEFAULT_GOAL = (200.0, 200.0, 30.0)
DEFAULT_WEIGHTS = (0.5, 0.25, 0.25)
COLLISION_PENALTY = 1e3


def terrain_height(x: Any, y: Any) -> Any:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    r2 = x ** 2 + y ** 2
    z = np.sin(y + 1.0) + np.sin(x) + np.cos(r2) + 2.0 * np.cos(y) + np.sin(r2)
    return float(z) if z.ndim == 0 else z


class TerrainModel:
    """Analytic ground surface; obstacles share the same surface."""

    def __init__(self, safety_margin: float = 1.0):
        if safety_margin < 0:
            raise ConfigurationError(f"safety_margin must be >= 0, got {safety_margin}")
        self.safety_margin = float(safety_margin)

    def height(self, x: Any, y: Any) -> Any:
        return terrain_height(x, y)

    def to_dict(self) -> Dict[str, Any]:
        return {'safety_margin': self.safety_margin}


class PathSpec:
    def __init__(self, start: Sequence[float] = DEFAULT_START, goal: Sequence[float] = DEFAULT_GOAL,
                 n_control: int = 5, n_samples: int = 100,
                 weights: Sequence[float] = DEFAULT_WEIGHTS,
                 penalty_coefficient: float = COLLISION_PENALTY,
                 xy_range: Sequence[float] = (0.0, 200.0), z_range: Sequence[float] = (0.0, 60.0)):
        self.start = np.asarray(start, dtype=float)
        self.goal = np.asarray(goal, dtype=float)
        self.n_control = int(n_control)
        self.n_samples = int(n_samples)
        self.weights = np.asarray(weights, dtype=float)
        self.penalty_coefficient = float(penalty_coefficient)
        self.xy_range = tuple(float(v) for v in xy_range)
        self.z_range = tuple(float(v) for v in z_range)
        self.validate()

    def validate(self) -> None:
        if self.start.shape != (3,) or self.goal.shape != (3,):
            raise ConfigurationError("start and goal must be 3-vectors")
        if self.n_control < 1:
            raise ConfigurationError(f"n_control must be >= 1, got {self.n_control}")
        if self.n_samples < self.n_control + 2:
            raise ConfigurationError(
                f"n_samples must be >= n_control + 2 ({self.n_control + 2}), got {self.n_samples}"
            )
        if self.weights.shape != (3,) or np.any(self.weights < 0) or abs(self.weights.sum() - 1.0) > 1e-9:
            raise ConfigurationError(f"weights must be 3 nonnegative values summing to 1, got {self.weights.tolist()}")
        if self.penalty_coefficient < 0:
            raise ConfigurationError("penalty_coefficient must be >= 0")

    @property
    def dim(self) -> int:
        return 3 * self.n_control

    def bounds(self) -> Bounds:
        low = [self.xy_range[0], self.xy_range[0], self.z_range[0]] * self.n_control
        high = [self.xy_range[1], self.xy_range[1], self.z_range[1]] * self.n_control
        return Bounds(low, high)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'start': self.start.tolist(),
            'goal': self.goal.tolist(),
            'n_control': self.n_control,
            'n_samples': self.n_samples,
            'weights': self.weights.tolist(),
            'penalty_coefficient': self.penalty_coefficient,
        }


def decode(decision: Sequence[float], spec: PathSpec) -> np.ndarray:
    """start, the interior waypoints in decision order, then goal."""
    decision = np.asarray(decision, dtype=float).ravel()
    if decision.size != spec.dim:
        raise ConfigurationError(
            f"Decision vector has {decision.size} values, expected {spec.dim} (3 x {spec.n_control})"
        )
    return np.vstack([spec.start, decision.reshape(spec.n_control, 3), spec.goal])


def build_path(decision: Sequence[float], spec: PathSpec) -> DiscretePath:
    return spline_path(decode(decision, spec), spec.n_samples)


def _points(path: Any) -> np.ndarray:
    return path.points if isinstance(path, DiscretePath) else np.asarray(path, dtype=float)


def path_length(path: Any) -> float:
    points = _points(path)
    return float(np.sum(np.linalg.norm(np.diff(points, axis=0), axis=1)))


def height_cost(path: Any) -> float:
    z = _points(path)[:, 2]
    return float(np.sqrt(np.sum((z - z.mean()) ** 2)))


def smoothness_cost(path: Any) -> float:
    """Sum of (1 - cos) of the turn angle between consecutive segments."""
    segments = np.diff(_points(path), axis=0)
    if segments.shape[0] < 2:
        return 0.0
    norms = np.linalg.norm(segments, axis=1)
    lead, trail = segments[:-1], segments[1:]
    denom = norms[:-1] * norms[1:]
    valid = denom > 0
    cosines = np.ones_like(denom)
    cosines[valid] = np.sum(lead[valid] * trail[valid], axis=1) / denom[valid]
    return float(np.sum(1.0 - np.clip(cosines, -1.0, 1.0)))


def collision_penalty(path: Any, terrain: TerrainModel) -> float:
    points = _points(path)
    ground = terrain.height(points[:, 0], points[:, 1])
    return float(np.sum(np.maximum(0.0, ground + terrain.safety_margin - points[:, 2])))


def cost_terms(decision: Sequence[float], spec: PathSpec, terrain: TerrainModel) -> Dict[str, float]:
    path = build_path(decision, spec)
    terms = {
        'path_length': path_length(path),
        'height': height_cost(path),
        'smoothness': smoothness_cost(path),
        'collision': collision_penalty(path, terrain),
    }
    w1, w2, w3 = spec.weights
    terms['total'] = (w1 * terms['path_length'] + w2 * terms['height'] + w3 * terms['smoothness']
                      + spec.penalty_coefficient * terms['collision'])
    return terms


def total_cost(decision: Sequence[float], spec: PathSpec, terrain: TerrainModel) -> float:
    return float(cost_terms(decision, spec, terrain)['total'])


class UavProblem(Problem):
    def __init__(self, spec: Optional[PathSpec] = None, terrain: Optional[TerrainModel] = None):
        self.spec = spec or PathSpec()
        self.terrain = terrain or TerrainModel()
        self.name = "uav"
        self.bounds = self.spec.bounds()

    def evaluate(self, x: np.ndarray) -> float:
        return total_cost(x, self.spec, self.terrain)

    def is_feasible(self, x: np.ndarray, tolerance: float = 1e-6) -> bool:
        return cost_terms(x, self.spec, self.terrain)['collision'] <= tolerance

    def path(self, x: np.ndarray) -> np.ndarray:
        return build_path(x, self.spec).points

    def describe(self, x: np.ndarray) -> Dict[str, Any]:
        terms = cost_terms(x, self.spec, self.terrain)
        return {
            'fitness': terms['total'],
            'terms': terms,
            'feasible': terms['collision'] <= 1e-6,
            'waypoints': decode(x, self.spec).tolist(),
            'spec': self.spec.to_dict(),
        }


def export_waypoints(points: np.ndarray, filepath: str, weights: Sequence[float] = DEFAULT_WEIGHTS,
                     seed: Optional[int] = None) -> str:
    """One ``x y z`` triple per line; the header carries weights and seed."""
    directory = os.path.dirname(filepath)
    if directory:
        os.makedirs(directory, exist_ok=True)
    header = f"weights={','.join(repr(float(w)) for w in weights)} seed={seed}"
    np.savetxt(filepath, np.asarray(points, dtype=float), header=header, fmt="%.10f")
    logger.info(f"Exported {len(points)} waypoints to {filepath}")
    return filepath


def load_waypoints(filepath: str) -> np.ndarray:
    if not os.path.exists(filepath):
        raise FileNotFoundError(f"Waypoint file not found: {filepath}")
    return np.loadtxt(filepath, ndmin=2)
