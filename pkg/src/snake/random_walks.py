from __future__ import annotations

import logging
import math
from typing import Any, Dict

import numpy as np
from scipy.special import gamma

logger = logging.getLogger(__name__)


def mantegna_sigma(eta: float) -> float:
    num = gamma(1 + eta) * math.sin(math.pi * eta / 2)
    den = gamma((1 + eta) / 2) * eta * 2 ** ((eta - 1) / 2)
    return float((num / den) ** (1 / eta))


class LevyParams:
    def __init__(self, step_scale: float = 0.01, eta: float = 1.5, weight: float = 0.05):
        if not 0 < eta <= 2:
            raise ValueError(f"Levy stability index must lie in (0, 2], got {eta}")
        self.step_scale = step_scale
        self.eta = eta
        self.weight = weight
        self.sigma = mantegna_sigma(eta)

    def to_dict(self) -> Dict[str, Any]:
        return {'step_scale': self.step_scale, 'eta': self.eta, 'weight': self.weight, 'sigma': self.sigma}


class BrownianParams:
    def __init__(self, weight: float = 0.05):
        self.weight = weight
        self.mu = 0.0
        self.sigma = 1.0

    def to_dict(self) -> Dict[str, Any]:
        return {'weight': self.weight, 'mu': self.mu, 'sigma': self.sigma}


def levy_sample(dim: int, params: LevyParams, rng: Any) -> np.ndarray:
    """Weighted Levy step, Mantegna construction: u ~ N(0, sigma^2), v ~ N(0, 1)."""
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    u = np.asarray(rng.standard_normal(dim), dtype=float)
    v = np.asarray(rng.standard_normal(dim), dtype=float)
    zero = np.abs(v) == 0.0
    while np.any(zero):
        v[zero] = rng.standard_normal(int(zero.sum()))
        zero = np.abs(v) == 0.0
    step = params.step_scale * (u * params.sigma) / np.abs(v) ** (1.0 / params.eta)
    return params.weight * step


def brownian_sample(dim: int, params: BrownianParams, rng: Any) -> np.ndarray:
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    z = np.asarray(rng.standard_normal(dim), dtype=float)
    return params.weight * (params.mu + params.sigma * z)
