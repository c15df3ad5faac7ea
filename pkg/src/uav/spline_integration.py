from __future__ import annotations

import logging
from typing import Sequence

import numpy as np
from scipy.interpolate import CubicSpline

logger = logging.getLogger(__name__)


class DiscretePath:
    def __init__(self, points: np.ndarray):
        self.points = np.asarray(points, dtype=float)

    def __len__(self) -> int:
        return int(self.points.shape[0])


def spline_path(controls: Sequence[Sequence[float]], n_samples: int) -> DiscretePath:
    """Natural cubic spline through the control points on integer knots 0..K-1.

    Returns ``n_samples`` points at equally spaced parameter values; the first
    and last samples are the first and last control points exactly.
    """
    controls = np.asarray(controls, dtype=float)
    if controls.ndim != 2 or controls.shape[1] != 3:
        raise ValueError(f"Control points must be an (K, 3) array, got shape {controls.shape}")
    count = controls.shape[0]
    if count < 3:
        raise ValueError(f"Need at least 3 control points, got {count}")
    if n_samples < count:
        raise ValueError(f"n_samples ({n_samples}) must be >= number of control points ({count})")

    knots = np.arange(count, dtype=float)
    spline = CubicSpline(knots, controls, axis=0, bc_type='natural')
    points = spline(np.linspace(0.0, count - 1.0, n_samples))
    points[0] = controls[0]
    points[-1] = controls[-1]
    return DiscretePath(points)
