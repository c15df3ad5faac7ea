from __future__ import annotations

import logging
import os
from typing import Any, Callable, Dict, Optional, Sequence

import numpy as np
from scipy.stats import ortho_group

from src.engine.engine_module import Bounds, ConfigurationError, Problem

logger = logging.getLogger(__name__)

DEFAULT_LOW = -100.0
DEFAULT_HIGH = 100.0
ORTHOGONALITY_TOLERANCE = 1e-9


def sphere(z: np.ndarray) -> float:
    return float(np.sum(z ** 2))


def rastrigin(z: np.ndarray) -> float:
    return float(np.sum(z ** 2 - 10.0 * np.cos(2.0 * np.pi * z) + 10.0))


def rosenbrock(z: np.ndarray) -> float:
    # shifted by one so the optimum sits at z = 0
    y = z + 1.0
    return float(np.sum(100.0 * (y[1:] - y[:-1] ** 2) ** 2 + (y[:-1] - 1.0) ** 2))


def ackley(z: np.ndarray) -> float:
    d = z.size
    first = -20.0 * np.exp(-0.2 * np.sqrt(np.sum(z ** 2) / d))
    second = -np.exp(np.sum(np.cos(2.0 * np.pi * z)) / d)
    return float(first + second + 20.0 + np.e)


def griewank(z: np.ndarray) -> float:
    idx = np.arange(1, z.size + 1)
    return float(np.sum(z ** 2) / 4000.0 - np.prod(np.cos(z / np.sqrt(idx))) + 1.0)


def schwefel(z: np.ndarray) -> float:
    """Schwefel's problem 1.2 (cumulative sums); optimum at the origin."""
    return float(np.sum(np.cumsum(z) ** 2))


def levy(z: np.ndarray) -> float:
    w = 1.0 + z / 4.0
    head = np.sin(np.pi * w[0]) ** 2
    body = np.sum((w[:-1] - 1.0) ** 2 * (1.0 + 10.0 * np.sin(np.pi * w[:-1] + 1.0) ** 2))
    tail = (w[-1] - 1.0) ** 2 * (1.0 + np.sin(2.0 * np.pi * w[-1]) ** 2)
    return float(head + body + tail)


def zakharov(z: np.ndarray) -> float:
    weighted = np.sum(0.5 * np.arange(1, z.size + 1) * z)
    return float(np.sum(z ** 2) + weighted ** 2 + weighted ** 4)


BASE_FUNCTIONS: Dict[str, Callable[[np.ndarray], float]] = {
    'sphere': sphere,
    'rastrigin': rastrigin,
    'rosenbrock': rosenbrock,
    'ackley': ackley,
    'griewank': griewank,
    'schwefel': schwefel,
    'levy': levy,
    'zakharov': zakharov,
}

# Optimum offsets used by generated instances
DEFAULT_BIASES: Dict[str, float] = {
    'sphere': 100.0,
    'schwefel': 200.0,
    'zakharov': 300.0,
    'rosenbrock': 400.0,
    'ackley': 500.0,
    'rastrigin': 600.0,
    'griewank': 700.0,
    'levy': 900.0,
}


def _check_base(base: str) -> str:
    name = str(base).lower()
    if name not in BASE_FUNCTIONS:
        valid = ", ".join(sorted(BASE_FUNCTIONS))
        raise ConfigurationError(f"Unknown benchmark '{base}'. Valid benchmarks: {valid}")
    return name


class BenchmarkSpec:
    """A base function under shift, rotation and bias: f(R(x - shift)) + bias."""

    def __init__(self, base: str, dim: int, shift: Optional[Sequence[float]] = None,
                 rotation: Optional[np.ndarray] = None, domain: Optional[Bounds] = None,
                 bias: float = 0.0):
        self.base = _check_base(base)
        if int(dim) != dim or dim < 1:
            raise ConfigurationError(f"Benchmark dimension must be a positive integer, got {dim}")
        self.dim = int(dim)
        self.shift = np.zeros(self.dim) if shift is None else np.asarray(shift, dtype=float).ravel()
        self.rotation = np.eye(self.dim) if rotation is None else np.asarray(rotation, dtype=float)
        self.domain = domain or Bounds.uniform(DEFAULT_LOW, DEFAULT_HIGH, self.dim)
        self.bias = float(bias)

        if self.shift.size != self.dim:
            raise ConfigurationError(f"Shift has {self.shift.size} entries for dimension {self.dim}")
        if self.rotation.shape != (self.dim, self.dim):
            raise ConfigurationError(f"Rotation must be {self.dim}x{self.dim}, got {self.rotation.shape}")
        residual = np.max(np.abs(self.rotation @ self.rotation.T - np.eye(self.dim)))
        if residual > ORTHOGONALITY_TOLERANCE:
            raise ConfigurationError(f"Rotation is not orthogonal (residual {residual:.3g})")
        if self.domain.dim != self.dim:
            raise ConfigurationError(f"Domain has {self.domain.dim} dimensions, expected {self.dim}")

    @property
    def name(self) -> str:
        return self.base

    def to_dict(self) -> Dict[str, Any]:
        return {
            'base': self.base,
            'dim': self.dim,
            'bias': self.bias,
            'shift': self.shift.tolist(),
            'domain': self.domain.to_dict(),
        }


def evaluate(spec: BenchmarkSpec, x: Sequence[float]) -> float:
    x = np.asarray(x, dtype=float).ravel()
    if x.size != spec.dim:
        raise ConfigurationError(f"{spec.base} expects {spec.dim} coordinates, got {x.size}")
    z = spec.rotation @ (x - spec.shift)
    return BASE_FUNCTIONS[spec.base](z) + spec.bias


def random_instance(base: str, dim: int, seed: int, bias: Optional[float] = None,
                    domain: Optional[Bounds] = None) -> BenchmarkSpec:
    """Shift drawn inside the central 80% of the domain, Haar-random rotation."""
    base = _check_base(base)
    if int(dim) != dim or dim < 2:
        raise ConfigurationError(f"Random instances need dim >= 2, got {dim}")
    dim = int(dim)
    domain = domain or Bounds.uniform(DEFAULT_LOW, DEFAULT_HIGH, dim)
    rng = np.random.default_rng(int(seed))
    shift = domain.lower + (0.1 + 0.8 * rng.random(dim)) * domain.width
    rotation = ortho_group.rvs(dim, random_state=rng)
    if bias is None:
        bias = DEFAULT_BIASES[base]
    logger.debug(f"Generated {base} instance, dim {dim}, seed {seed}")
    return BenchmarkSpec(base, dim, shift=shift, rotation=rotation, domain=domain, bias=bias)


class BenchmarkProblem(Problem):
    def __init__(self, spec: BenchmarkSpec):
        self.spec = spec
        self.name = spec.name
        self.bounds = spec.domain

    def evaluate(self, x: np.ndarray) -> float:
        return evaluate(self.spec, x)

    def describe(self, x: np.ndarray) -> Dict[str, Any]:
        value = evaluate(self.spec, x)
        return {
            'fitness': value,
            'error': value - self.spec.bias,
            'position': np.asarray(x, dtype=float).tolist(),
        }


def as_problem(spec: BenchmarkSpec) -> BenchmarkProblem:
    return BenchmarkProblem(spec)


def save_instance(spec: BenchmarkSpec, path: str) -> str:
    """Write the shift line followed by the rotation rows; metadata goes in the header."""
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    header = (f"base={spec.base} bias={spec.bias!r} "
              f"lower={float(spec.domain.lower[0])!r} upper={float(spec.domain.upper[0])!r}")
    np.savetxt(path, np.vstack([spec.shift, spec.rotation]), header=header, fmt="%.17g")
    logger.info(f"Saved {spec.base} instance to {path}")
    return path


def load_instance(path: str) -> BenchmarkSpec:
    if not os.path.exists(path):
        raise FileNotFoundError(f"Benchmark instance not found: {path}")
    with open(path, 'r', encoding='utf-8') as f:
        header = f.readline().lstrip('#').strip()
    fields = dict(item.split('=', 1) for item in header.split())
    matrix = np.loadtxt(path, ndmin=2)
    dim = matrix.shape[1]
    if matrix.shape[0] != dim + 1:
        raise ConfigurationError(f"Instance file {path} must hold 1 shift row and {dim} rotation rows")
    domain = Bounds.uniform(float(fields.get('lower', DEFAULT_LOW)),
                            float(fields.get('upper', DEFAULT_HIGH)), dim)
    return BenchmarkSpec(fields['base'], dim, shift=matrix[0], rotation=matrix[1:],
                         domain=domain, bias=float(fields.get('bias', 0.0)))
