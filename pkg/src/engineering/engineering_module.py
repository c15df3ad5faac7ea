from __future__ import annotations

import logging
import math
from typing import Any, Callable, Dict, List, Sequence, Tuple

import numpy as np

from src.engine.engine_module import Bounds, ConfigurationError, Problem

logger = logging.getLogger(__name__)

PENALTY_COEFFICIENT = 1e6
REPORT_TOLERANCE = 1e-9
ACCEPTANCE_TOLERANCE = 1e-6
# Stand-in for constraints that cannot be evaluated (zero areas, acos out of range)
MAX_VIOLATION = 1e12


class ConstraintReport:
    def __init__(self, values: Sequence[float], tolerance: float = REPORT_TOLERANCE):
        raw = np.asarray(values, dtype=float).ravel()
        self.values = np.where(np.isfinite(raw), raw, MAX_VIOLATION)
        self.tolerance = tolerance
        self.total_violation = float(np.sum(np.maximum(0.0, self.values)))
        self.feasible = bool(self.values.size == 0 or np.max(self.values) <= tolerance)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'values': self.values.tolist(),
            'feasible': self.feasible,
            'total_violation': self.total_violation,
        }


def penalize(objective: float, report: ConstraintReport, coefficient: float = PENALTY_COEFFICIENT) -> float:
    if coefficient <= 0:
        raise ConfigurationError(f"Penalty coefficient must be positive, got {coefficient}")
    if report.feasible:
        return float(objective)
    return float(objective) + coefficient * report.total_violation


class ConstrainedProblem(Problem):
    """Objective plus g(x) <= 0 constraints behind a static penalty.

    ``constraints`` maps a decision vector to the vector of all g values.
    """

    def __init__(self, name: str, bounds: Bounds, objective: Callable[[np.ndarray], float],
                 constraints: Callable[[np.ndarray], Sequence[float]], constraint_count: int,
                 penalty_coefficient: float = PENALTY_COEFFICIENT,
                 integer_indices: Sequence[int] = (), labels: Sequence[str] = (),
                 maximize_report: bool = False):
        self.name = name
        self.bounds = bounds
        self.objective = objective
        self.constraints = constraints
        self.constraint_count = constraint_count
        self.penalty_coefficient = penalty_coefficient
        self.integer_indices = tuple(integer_indices)
        self.labels = tuple(labels)
        self.maximize_report = maximize_report

    def report(self, x: np.ndarray, tolerance: float = REPORT_TOLERANCE) -> ConstraintReport:
        try:
            with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
                values = self.constraints(np.asarray(x, dtype=float))
        except (ZeroDivisionError, ValueError, OverflowError) as e:
            logger.debug(f"{self.name}: constraints not evaluable at {np.asarray(x).tolist()}: {e}")
            values = [MAX_VIOLATION] * self.constraint_count
        return ConstraintReport(values, tolerance)

    def solve(self, x: np.ndarray) -> Tuple[float, ConstraintReport]:
        x = np.asarray(x, dtype=float)
        return float(self.objective(x)), self.report(x)

    def evaluate(self, x: np.ndarray) -> float:
        objective, report = self.solve(x)
        return penalize(objective, report, self.penalty_coefficient)

    def is_feasible(self, x: np.ndarray, tolerance: float = ACCEPTANCE_TOLERANCE) -> bool:
        return self.report(x, tolerance).feasible

    def describe(self, x: np.ndarray) -> Dict[str, Any]:
        x = np.asarray(x, dtype=float)
        objective, report = self.solve(x)
        rounded = x.copy()
        for index in self.integer_indices:
            rounded[index] = round(rounded[index])
        result = {
            'problem': self.name,
            'objective': objective,
            'penalized': penalize(objective, report, self.penalty_coefficient),
            'feasible': self.is_feasible(x),
            'constraints': report.to_dict(),
            'position': x.tolist(),
            'rounded_position': rounded.tolist(),
        }
        if self.labels:
            result['variables'] = dict(zip(self.labels, rounded.tolist()))
        if self.maximize_report:
            result['capacity'] = -objective
        return result


# Welded beam

WB_P = 6000.0
WB_L = 14.0
WB_E = 30e6
WB_G = 12e6
WB_TAU_MAX = 13600.0
WB_SIGMA_MAX = 30000.0
WB_DELTA_MAX = 0.25


def welded_beam_objective(x: np.ndarray) -> float:
    x1, x2, x3, x4 = x
    return 1.10471 * x1 ** 2 * x2 + 0.04811 * x3 * x4 * (14.0 + x2)


def welded_beam_constraints(x: np.ndarray) -> List[float]:
    x1, x2, x3, x4 = x
    tau_prime = WB_P / (math.sqrt(2.0) * x1 * x2)
    moment = WB_P * (WB_L + x2 / 2.0)
    radius = math.sqrt(x2 ** 2 / 4.0 + ((x1 + x3) / 2.0) ** 2)
    polar = 2.0 * (math.sqrt(2.0) * x1 * x2 * (x2 ** 2 / 4.0 + ((x1 + x3) / 2.0) ** 2))
    tau_double = moment * radius / polar
    tau = math.sqrt(tau_prime ** 2 + 2.0 * tau_prime * tau_double * x2 / (2.0 * radius) + tau_double ** 2)
    sigma = 6.0 * WB_P * WB_L / (x4 * x3 ** 2)
    delta = 6.0 * WB_P * WB_L ** 3 / (WB_E * x3 ** 2 * x4)
    buckling = (4.013 * WB_E * math.sqrt(x3 ** 2 * x4 ** 6 / 30.0) / WB_L ** 2
                * (1.0 - x3 / (2.0 * WB_L) * math.sqrt(WB_E / (4.0 * WB_G))))
    return [
        tau - WB_TAU_MAX,
        sigma - WB_SIGMA_MAX,
        delta - WB_DELTA_MAX,
        x1 - x4,
        WB_P - buckling,
        0.125 - x1,
        0.10471 * x1 ** 2 + 0.04811 * x3 * x4 * (14.0 + x2) - 5.0,
    ]


# Tension/compression spring

def spring_objective(x: np.ndarray) -> float:
    x1, x2, x3 = x
    return (x3 + 2.0) * x2 * x1 ** 2


def spring_constraints(x: np.ndarray) -> List[float]:
    x1, x2, x3 = x
    return [
        1.0 - x2 ** 3 * x3 / (71785.0 * x1 ** 4),
        (4.0 * x2 ** 2 - x1 * x2) / (12566.0 * (x2 * x1 ** 3 - x1 ** 4)) + 1.0 / (5108.0 * x1 ** 2) - 1.0,
        1.0 - 140.45 * x1 / (x2 ** 2 * x3),
        (x1 + x2) / 1.5 - 1.0,
    ]


# Cantilever beam

CANTILEVER_COEFFICIENT = 0.6224
CANTILEVER_WEIGHTS = np.array([60.0, 27.0, 19.0, 7.0, 1.0])


def cantilever_objective(x: np.ndarray, coefficient: float = CANTILEVER_COEFFICIENT) -> float:
    return float(coefficient * np.sum(x))


def cantilever_constraints(x: np.ndarray) -> List[float]:
    return [float(np.sum(CANTILEVER_WEIGHTS / np.asarray(x, dtype=float) ** 3) - 1.0)]


# Rolling element bearing, x = [Dm, Db, fo, fi, Z, e, eps, zeta, KDmax, KDmin]

RB_D = 160.0
RB_d = 90.0
RB_BW = 30.0


def _bearing_fc(x: np.ndarray) -> float:
    dm, db, fo, fi = x[0], x[1], x[2], x[3]
    gamma = db / dm
    curvature = (fi * (2.0 * fo - 1.0)) / (fo * (2.0 * fi - 1.0))
    inner = 1.04 * ((1.0 - gamma) / (1.0 + gamma)) ** 1.72 * curvature ** 0.41
    return 37.91 * (1.0 + inner ** (10.0 / 3.0)) ** -0.3


def rolling_bearing_objective(x: np.ndarray) -> float:
    """Negated dynamic load capacity."""
    db, z = x[1], x[4]
    fc = _bearing_fc(x)
    if db <= 25.4:
        capacity = fc * z ** (2.0 / 3.0) * db ** 1.8
    else:
        capacity = 3.647 * fc * z ** (2.0 / 3.0) * db ** 1.4
    return -float(capacity)


def rolling_bearing_constraints(x: np.ndarray) -> List[float]:
    dm, db, fo, fi, z, e, eps, _zeta, kd_max, kd_min = x
    t = RB_D - RB_d - 2.0 * db
    a = (RB_D - RB_d) / 2.0 - 3.0 * (t / 4.0)
    b = RB_D / 2.0 - t / 4.0 - db
    c = RB_d / 2.0 + t / 4.0
    cosine = (a ** 2 + b ** 2 - c ** 2) / (2.0 * a * b)
    if -1.0 <= cosine <= 1.0:
        phi0 = 2.0 * math.pi - 2.0 * math.acos(cosine)
        g1 = z - phi0 / (2.0 * math.asin(db / dm)) - 1.0
    else:
        g1 = float('nan')
    return [
        g1,
        kd_min * (RB_D - RB_d) - 2.0 * db,
        2.0 * db - kd_max * (RB_D - RB_d),
        db - RB_BW,
        0.5 * (RB_D + RB_d) - dm,
        dm - (0.5 + e) * (RB_D + RB_d),
        eps * db - 0.5 * (RB_D - dm - db),
        0.515 - fi,
        0.515 - fo,
    ]


# Speed reducer

def speed_reducer_objective(x: np.ndarray) -> float:
    x1, x2, x3, x4, x5, x6, x7 = x
    return (0.7854 * x1 * x2 ** 2 * (3.3333 * x3 ** 2 + 14.9334 * x3 - 43.0934)
            - 1.508 * x1 * (x6 ** 2 + x7 ** 2)
            + 7.4777 * (x6 ** 3 + x7 ** 3)
            + 0.7854 * (x4 * x6 ** 2 + x5 * x7 ** 2))


def speed_reducer_constraints(x: np.ndarray) -> List[float]:
    x1, x2, x3, x4, x5, x6, x7 = x
    return [
        27.0 / (x1 * x2 ** 2 * x3) - 1.0,
        397.5 / (x1 * x2 ** 2 * x3 ** 2) - 1.0,
        1.93 * x4 ** 3 / (x2 * x3 * x6 ** 4) - 1.0,
        1.93 * x5 ** 3 / (x2 * x3 * x7 ** 4) - 1.0,
        math.sqrt((745.0 * x4 / (x2 * x3)) ** 2 + 16.9e6) / (110.0 * x6 ** 3) - 1.0,
        math.sqrt((745.0 * x5 / (x2 * x3)) ** 2 + 157.5e6) / (85.0 * x7 ** 3) - 1.0,
        x2 * x3 / 40.0 - 1.0,
        5.0 * x2 / x1 - 1.0,
        x1 / (12.0 * x2) - 1.0,
        (1.5 * x6 + 1.9) / x4 - 1.0,
        (1.1 * x7 + 1.9) / x5 - 1.0,
    ]


# Three-bar truss

TRUSS_LENGTH = 100.0
TRUSS_LOAD = 2.0
TRUSS_STRESS = 2.0
TRUSS_MIN_AREA = 1e-12


def three_bar_truss_objective(x: np.ndarray) -> float:
    x1, x2 = x
    return TRUSS_LENGTH * (2.0 * math.sqrt(2.0) * x1 + x2)


def three_bar_truss_constraints(x: np.ndarray) -> List[float]:
    x1, x2 = x
    if x1 <= TRUSS_MIN_AREA and x2 <= TRUSS_MIN_AREA:
        return [MAX_VIOLATION] * 3
    root2 = math.sqrt(2.0)
    shared = root2 * x1 ** 2 + 2.0 * x1 * x2
    g1 = (root2 * x1 + x2) / shared * TRUSS_LOAD - TRUSS_STRESS if shared > 0 else MAX_VIOLATION
    g2 = x2 / shared * TRUSS_LOAD - TRUSS_STRESS if shared > 0 else MAX_VIOLATION
    g3 = 1.0 / (x1 + root2 * x2) * TRUSS_LOAD - TRUSS_STRESS
    return [g1, g2, g3]


def _bearing_bounds() -> Bounds:
    span, total = RB_D - RB_d, RB_D + RB_d
    return Bounds(
        [0.5 * total, 0.15 * span, 0.515, 0.515, 4.0, 0.02, 0.3, 0.6, 0.6, 0.4],
        [0.6 * total, 0.45 * span, 0.6, 0.6, 50.0, 0.1, 0.4, 0.85, 0.7, 0.5],
    )


def _build(name: str) -> ConstrainedProblem:
    if name == 'wbd':
        return ConstrainedProblem('wbd', Bounds([0.1, 0.1, 0.1, 0.1], [2.0, 10.0, 10.0, 2.0]),
                                  welded_beam_objective, welded_beam_constraints, 7,
                                  labels=('h', 'l', 't', 'b'))
    if name == 'tcsd':
        return ConstrainedProblem('tcsd', Bounds([0.05, 0.25, 2.0], [2.0, 1.3, 15.0]),
                                  spring_objective, spring_constraints, 4, labels=('d', 'D', 'N'))
    if name == 'cbd':
        return ConstrainedProblem('cbd', Bounds.uniform(0.01, 100.0, 5),
                                  cantilever_objective, cantilever_constraints, 1)
    if name == 'rebd':
        return ConstrainedProblem('rebd', _bearing_bounds(), rolling_bearing_objective,
                                  rolling_bearing_constraints, 9, integer_indices=(4,),
                                  labels=('Dm', 'Db', 'fo', 'fi', 'Z', 'e', 'epsilon', 'zeta',
                                          'KDmax', 'KDmin'),
                                  maximize_report=True)
    if name == 'srd':
        return ConstrainedProblem('srd', Bounds([2.6, 0.7, 17.0, 7.3, 7.3, 2.9, 5.0],
                                                [3.6, 0.8, 28.0, 8.3, 8.3, 3.9, 5.5]),
                                  speed_reducer_objective, speed_reducer_constraints, 11,
                                  integer_indices=(2,), labels=('b', 'm', 'z', 'l1', 'l2', 'd1', 'd2'))
    if name == 'tbtd':
        return ConstrainedProblem('tbtd', Bounds([0.0, 0.0], [1.0, 1.0]),
                                  three_bar_truss_objective, three_bar_truss_constraints, 3,
                                  labels=('A1', 'A2'))
    raise ConfigurationError(
        f"Unknown engineering problem '{name}'. Valid problems: {', '.join(ENGINEERING_PROBLEMS)}"
    )


ENGINEERING_PROBLEMS = ('wbd', 'tcsd', 'cbd', 'rebd', 'srd', 'tbtd')


def get_engineering_problem(name: str) -> ConstrainedProblem:
    return _build(str(name).lower())


def _solve(name: str, x: Sequence[float]) -> Tuple[float, ConstraintReport]:
    problem = get_engineering_problem(name)
    x = np.asarray(x, dtype=float).ravel()
    if x.size != problem.dim:
        raise ConfigurationError(f"{name} expects {problem.dim} variables, got {x.size}")
    return problem.solve(x)


def welded_beam(x: Sequence[float]) -> Tuple[float, ConstraintReport]:
    return _solve('wbd', x)


def spring(x: Sequence[float]) -> Tuple[float, ConstraintReport]:
    return _solve('tcsd', x)


def cantilever(x: Sequence[float]) -> Tuple[float, ConstraintReport]:
    return _solve('cbd', x)


def rolling_bearing(x: Sequence[float]) -> Tuple[float, ConstraintReport]:
    return _solve('rebd', x)


def speed_reducer(x: Sequence[float]) -> Tuple[float, ConstraintReport]:
    return _solve('srd', x)


def three_bar_truss(x: Sequence[float]) -> Tuple[float, ConstraintReport]:
    return _solve('tbtd', x)


def describe(name: str, x: Sequence[float]) -> Dict[str, Any]:
    return get_engineering_problem(name).describe(np.asarray(x, dtype=float))
