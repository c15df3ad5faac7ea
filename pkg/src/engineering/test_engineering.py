#!/usr/bin/env python3
"""
Tests for the constrained engineering design problems and the penalty handler.
"""

import math

import numpy as np
import pytest

from src.engine.engine_module import ConfigurationError, optimize
from src.engineering.engineering_module import (CANTILEVER_COEFFICIENT, ENGINEERING_PROBLEMS,
                                                MAX_VIOLATION, ConstraintReport, cantilever,
                                                cantilever_objective, describe,
                                                get_engineering_problem, penalize,
                                                rolling_bearing, speed_reducer, spring,
                                                three_bar_truss, welded_beam)

BEARING_POINT = [125.7227, 21.4233, 0.515, 0.515, 11.0, 0.05, 0.35, 0.7, 0.65, 0.45]
# Dm and Db on the g5/g7 corner, widest fi, tightest eps; Z just inside the g1 limit.
BEARING_CORNER = [125.0, 21.875, 0.515, 0.6, 10.7, 0.1, 0.3, 0.7, 0.7, 0.4]
BEARING_MAX_CAPACITY = 47555.7
WELDED_BEAM_PUBLISHED = [0.198832, 3.337365, 9.192024, 0.198832]
WELDED_BEAM_FEASIBLE = [0.198832, 3.337365, 9.1925, 0.19884]
CANTILEVER_TABULATED = [6.0160, 5.3092, 4.4943, 3.5015, 2.1527]


def test_welded_beam():
    objective, report = welded_beam([0.5, 1.0, 1.0, 0.5])
    assert objective == pytest.approx(0.637003, abs=1e-6)
    assert len(report.values) == 7
    assert report.values[3] == 0.0
    best, rounded = welded_beam(WELDED_BEAM_PUBLISHED)
    assert best == pytest.approx(1.670219, abs=1e-4)
    assert rounded.total_violation < 0.1


def test_welded_beam_optimum_is_feasible():
    objective, report = welded_beam(WELDED_BEAM_FEASIBLE)
    assert report.feasible
    assert get_engineering_problem("wbd").is_feasible(np.array(WELDED_BEAM_FEASIBLE))
    assert objective == pytest.approx(1.670219, abs=5e-4)
    assert objective <= 1.67857


def test_spring():
    objective, report = spring([0.05, 0.25, 2.0])
    assert objective == pytest.approx(0.0025)
    _, boundary = spring([0.5, 1.0, 5.0])
    assert boundary.values[3] == 0.0
    feasible_objective, feasible = spring([0.06, 0.5, 10.0])
    assert feasible.feasible
    assert feasible_objective == pytest.approx(0.0216)
    best, _ = spring([0.051689, 0.356718, 11.288966])
    assert best == pytest.approx(0.012665, abs=1e-5)


def test_spring_singular_point_is_infeasible():
    _, report = spring([0.5, 0.5, 5.0])
    assert not report.feasible
    assert report.values[1] == MAX_VIOLATION


def test_cantilever():
    objective, report = cantilever(np.ones(5))
    assert objective == pytest.approx(3.112)
    assert report.values[0] == pytest.approx(113.0)
    problem = get_engineering_problem("cbd")
    assert problem.evaluate(np.ones(5)) == pytest.approx(1.13000003112e8)
    _, scaled = cantilever(2.0 * np.ones(5))
    assert scaled.values[0] < report.values[0]


def test_rolling_bearing():
    objective, report = rolling_bearing(BEARING_POINT)
    assert objective < 0
    assert len(report.values) == 9
    assert report.values[7] == 0.0
    assert report.values[8] == 0.0


def test_rolling_bearing_ball_diameter_branch():
    small = list(BEARING_POINT)
    small[1] = 25.0
    large = list(BEARING_POINT)
    large[1] = 26.0
    fc_ratio_small = -rolling_bearing(small)[0] / (small[4] ** (2 / 3) * 25.0 ** 1.8)
    fc_ratio_large = -rolling_bearing(large)[0] / (3.647 * large[4] ** (2 / 3) * 26.0 ** 1.4)
    assert fc_ratio_small == pytest.approx(fc_ratio_large, rel=0.05)


def test_rolling_bearing_describe_rounds_ball_count():
    point = list(BEARING_POINT)
    point[4] = 10.6
    report = describe("rebd", point)
    assert report['variables']['Z'] == 11
    assert report['capacity'] == pytest.approx(-report['objective'])


def test_speed_reducer():
    _, report = speed_reducer([4.0, 0.8, 50.0, 7.5, 7.8, 3.0, 5.2])
    assert len(report.values) == 11
    assert report.values[6] == 0.0
    assert report.values[7] == 0.0
    best, _ = speed_reducer([3.5, 0.7, 17.0, 7.3, 7.715320, 3.350215, 5.286654])
    assert best == pytest.approx(2994.4245, rel=1e-4)
    assert describe("srd", [3.5, 0.7, 17.4, 7.3, 7.7, 3.35, 5.29])['variables']['z'] == 17


def test_three_bar_truss():
    objective, _ = three_bar_truss([1.0, 1.0])
    assert objective == pytest.approx(382.842712, abs=1e-6)
    _, report = three_bar_truss([0.5, 0.5])
    assert report.values[2] == pytest.approx(-0.343146, abs=1e-6)
    best, _ = three_bar_truss([0.788675, 0.408248])
    assert best == pytest.approx(263.8958, abs=1e-3)


def test_three_bar_truss_zero_areas():
    _, report = three_bar_truss([0.0, 0.0])
    assert not report.feasible
    assert report.total_violation == pytest.approx(3 * MAX_VIOLATION)
    _, half = three_bar_truss([0.0, 0.5])
    assert not half.feasible
    assert math.isfinite(get_engineering_problem("tbtd").evaluate(np.zeros(2)))


def test_penalize():
    feasible = ConstraintReport([-1.0, -0.5])
    assert penalize(4.2, feasible) == 4.2
    violated = ConstraintReport([1.0, -3.0])
    assert penalize(4.2, violated) == pytest.approx(4.2 + 1e6)
    worse = ConstraintReport([2.0, -3.0])
    assert penalize(4.2, worse) > penalize(4.2, violated)
    with pytest.raises(ConfigurationError):
        penalize(1.0, violated, coefficient=0.0)


def test_constraint_report_non_finite():
    report = ConstraintReport([float("nan"), -1.0])
    assert not report.feasible
    assert report.values[0] == MAX_VIOLATION


def test_registry():
    dims = {'wbd': 4, 'tcsd': 3, 'cbd': 5, 'rebd': 10, 'srd': 7, 'tbtd': 2}
    for name in ENGINEERING_PROBLEMS:
        assert get_engineering_problem(name).dim == dims[name]
    assert get_engineering_problem("WBD").name == "wbd"
    with pytest.raises(ConfigurationError):
        get_engineering_problem("bridge")
    with pytest.raises(ConfigurationError):
        welded_beam([1.0, 2.0])


def test_optimizer_finds_feasible_truss():
    problem = get_engineering_problem("tbtd")
    result = optimize(problem, algorithm="MISO", population_size=20, max_iterations=150, seed=1)
    assert problem.is_feasible(result.best.position)
    assert result.best.fitness < 280.0


def test_cantilever_coefficient():
    assert CANTILEVER_COEFFICIENT == 0.6224
    assert cantilever_objective(np.array(CANTILEVER_TABULATED), 0.0624) == pytest.approx(1.339958, abs=1e-4)
    objective, _ = cantilever(CANTILEVER_TABULATED)
    assert objective == pytest.approx(0.6224 * sum(CANTILEVER_TABULATED))


def test_rolling_bearing_capacity_ceiling():
    objective, report = rolling_bearing(BEARING_CORNER)
    assert report.feasible
    z_limit = BEARING_CORNER[4] - report.values[0]
    assert z_limit == pytest.approx(10.777, abs=1e-3)
    assert -objective == pytest.approx(BEARING_MAX_CAPACITY * (10.7 / z_limit) ** (2.0 / 3.0), rel=1e-3)

    at_limit = list(BEARING_CORNER)
    at_limit[4] = z_limit
    capacity = -rolling_bearing(at_limit)[0]
    assert capacity == pytest.approx(BEARING_MAX_CAPACITY, rel=1e-3)

    more_balls = list(BEARING_CORNER)
    more_balls[4] = 10.9
    assert not rolling_bearing(more_balls)[1].feasible
    larger_balls = list(BEARING_CORNER)
    larger_balls[1] = 22.0
    assert not rolling_bearing(larger_balls)[1].feasible


def best_feasible(name, seeds=(1, 2, 3), population_size=30, max_iterations=300):
    problem = get_engineering_problem(name)
    values = []
    for seed in seeds:
        result = optimize(problem, algorithm="MISO", population_size=population_size,
                          max_iterations=max_iterations, seed=seed)
        if problem.is_feasible(result.best.position):
            values.append(problem.solve(result.best.position)[0])
    assert values, f"no feasible result on {name}"
    return min(values)


def test_miso_reaches_best_known_designs():
    targets = {'wbd': (1.670218, 0.03), 'tcsd': (0.012665, 0.05), 'srd': (2994.4245, 0.01),
               'tbtd': (263.8958, 0.005)}
    for name, (best_known, tolerance) in targets.items():
        assert best_feasible(name) <= best_known * (1.0 + tolerance), name


def test_miso_bearing_capacity_below_ceiling():
    capacity = -best_feasible('rebd')
    assert 0.8 * BEARING_MAX_CAPACITY <= capacity <= BEARING_MAX_CAPACITY * (1.0 + 1e-3)


def run_all_tests():
    tests = [
        test_welded_beam,
        test_welded_beam_optimum_is_feasible,
        test_spring,
        test_spring_singular_point_is_infeasible,
        test_cantilever,
        test_cantilever_coefficient,
        test_rolling_bearing,
        test_rolling_bearing_ball_diameter_branch,
        test_rolling_bearing_describe_rounds_ball_count,
        test_rolling_bearing_capacity_ceiling,
        test_speed_reducer,
        test_three_bar_truss,
        test_three_bar_truss_zero_areas,
        test_penalize,
        test_constraint_report_non_finite,
        test_registry,
        test_optimizer_finds_feasible_truss,
        test_miso_reaches_best_known_designs,
        test_miso_bearing_capacity_below_ceiling,
    ]
    for test in tests:
        test()
        print(f"passed: {test.__name__}")
    return len(tests)


if __name__ == "__main__":
    print("=== Engineering Test Suite ===")
    run_all_tests()
    print("\n=== Test Suite Completed ===")
