#!/usr/bin/env python3
"""
Tests for the snake optimizer update rules and variant dispatch.
Forced-random cases use ScriptedRandom, which replays fixed values.
"""

import itertools
import math

import numpy as np
import pytest

from src.engine.engine_module import (Agent, Bounds, ConfigurationError, Population, Variant,
                                      init_population)
from src.snake.random_walks import (BrownianParams, LevyParams, brownian_sample, levy_sample,
                                    mantegna_sigma)
from src.snake.snake_module import (SnakeParams, SnakeStrategy, convergence_factor,
                                    disturbance_factor, explore_step, fight_step, food_quantity,
                                    food_step, hatch_replace, hunt_ability, mate_step,
                                    miso_late_update, temperature)


class ScriptedRandom:
    """Replays the given uniforms, integers and normals in a loop."""

    def __init__(self, uniforms=(0.5,), integers=(0,), normals=(0.0,)):
        self._uniforms = itertools.cycle(uniforms)
        self._integers = itertools.cycle(integers)
        self._normals = itertools.cycle(normals)

    def _take(self, source, size):
        if size is None:
            return next(source)
        count = int(np.prod(size))
        return np.array([next(source) for _ in range(count)], dtype=float).reshape(size)

    def random(self, size=None):
        return self._take(self._uniforms, size)

    def standard_normal(self, size=None):
        return self._take(self._normals, size)

    def integers(self, high, size=None):
        return int(next(self._integers)) % int(high)


def sphere(x):
    return float(np.sum(np.asarray(x) ** 2))


def sample_population(max_iterations=20, n=12, dim=4, seed=1):
    bounds = Bounds.uniform(-5.0, 5.0, dim)
    return init_population(bounds, n, np.random.default_rng(seed), evaluator=sphere,
                           max_iterations=max_iterations)


def test_temperature_and_food_quantity():
    assert temperature(0, 10) == 1.0
    assert temperature(10, 10) == pytest.approx(0.367879, abs=1e-6)
    assert temperature(5, 10) == pytest.approx(0.606531, abs=1e-6)
    assert food_quantity(10, 10, 0.5) == pytest.approx(0.5)
    assert food_quantity(0, 10, 0.5) == pytest.approx(0.183940, abs=1e-6)


def test_hunt_ability():
    assert hunt_ability(3.0, 3.0) == pytest.approx(math.exp(-1))
    assert hunt_ability(0.0, 5.0) == 1.0
    assert hunt_ability(2.0, 1.0) == pytest.approx(0.135335, abs=1e-6)
    huge = hunt_ability(1e9, 1e-9)
    assert 0 < huge <= 1 and math.isfinite(huge)
    assert hunt_ability(-4.0, 1.0) == 1.0


def test_snake_params_validation():
    with pytest.raises(ConfigurationError):
        SnakeParams(q_threshold=1.5)
    with pytest.raises(ConfigurationError):
        SnakeParams(c3=0)


def test_explore_step():
    bounds = Bounds([0.0], [1.0])
    agent = Agent([0.9], fitness=1.0)
    peer = Agent([0.3], fitness=0.0)
    rng = ScriptedRandom(uniforms=(0.0, 1.0))
    moved = explore_step(agent, peer, bounds, 1.0, SnakeParams(), rng)
    assert moved[0] == pytest.approx(0.35)

    still = explore_step(agent, peer, bounds, 0.0, SnakeParams(), ScriptedRandom())
    assert still[0] == pytest.approx(0.3)


def test_food_step():
    agent = Agent([1.0], fitness=1.0)
    food = Agent([2.0], fitness=0.5)
    rng = ScriptedRandom(uniforms=(0.0, 0.5))
    assert food_step(agent, food, 0.8, 1.0, SnakeParams(), rng)[0] == pytest.approx(2.8)

    same = food_step(food, food, 0.8, 1.0, SnakeParams(), ScriptedRandom())
    assert same[0] == pytest.approx(2.0)


def test_fight_step():
    agent = Agent([1.0], fitness=1.0)
    best = Agent([2.0], fitness=0.0)
    assert fight_step(agent, best, 0.5, 1.0, SnakeParams(), ScriptedRandom(uniforms=(1.0,)))[0] == pytest.approx(1.0)
    assert fight_step(agent, Agent([3.0], 0.0), 0.5, 1.0, SnakeParams(),
                      ScriptedRandom(uniforms=(0.0,)))[0] == pytest.approx(1.0)
    assert fight_step(agent, Agent([3.0], 0.0), 0.5, 0.0, SnakeParams(),
                      ScriptedRandom(uniforms=(1.0,)))[0] == pytest.approx(1.0)


def test_mate_step():
    agent = Agent([0.0], fitness=1.0)
    partner = Agent([2.0], fitness=1.0)
    moved = mate_step(agent, partner, 0.5, 1.0, SnakeParams(), ScriptedRandom(uniforms=(1.0,)))
    assert moved[0] == pytest.approx(0.735759, abs=1e-6)


def test_hatch_replace_worst_to_lower_bound():
    bounds = Bounds.uniform(-1.0, 1.0, 2)
    males = [Agent([0.1, 0.1]), Agent([0.5, 0.5]), Agent([0.5, 0.5])]
    females = [Agent([0.2, 0.2]), Agent([0.9, 0.9])]
    population = Population(males, females, bounds, evaluator=sphere)
    for agent in population.agents():
        agent.fitness = sphere(agent.position)
    population.update_food()

    hatch_replace(population, bounds, ScriptedRandom(uniforms=(0.0,)))

    assert np.allclose(population.males[1].position, [-1.0, -1.0])
    assert np.allclose(population.males[2].position, [0.5, 0.5])
    assert np.allclose(population.females[1].position, [-1.0, -1.0])
    assert len(population.males) == 3 and len(population.females) == 2
    assert population.males[1].fitness == pytest.approx(2.0)


def test_disturbance_factor():
    assert disturbance_factor(0, 10, ScriptedRandom(uniforms=(0.0,))) == pytest.approx(1.0)
    assert disturbance_factor(0, 10, ScriptedRandom(uniforms=(math.pi / 4,))) == pytest.approx(2.0)
    assert disturbance_factor(10, 10, ScriptedRandom(uniforms=(0.7,))) == 0.0
    rng = np.random.default_rng(3)
    for t in range(0, 11):
        df = disturbance_factor(t, 10, rng)
        assert (1 - t / 10) - 1e-12 <= df <= 2 * (1 - t / 10) + 1e-12


def test_convergence_factor():
    assert convergence_factor(0, 10) == 1.0
    assert convergence_factor(10, 10) == 0.0
    assert convergence_factor(5, 10) == pytest.approx(0.353553, abs=1e-6)
    grid = [convergence_factor(t, 200) for t in range(201)]
    assert all(0.0 <= cf <= 1.0 for cf in grid)
    assert all(b <= a + 1e-15 for a, b in zip(grid, grid[1:]))


def test_levy_sample():
    params = LevyParams()
    assert params.sigma == pytest.approx(0.696575, abs=1e-6)
    assert mantegna_sigma(1.5) == pytest.approx(params.sigma)
    assert np.all(levy_sample(3, params, ScriptedRandom(normals=(0.0, 0.0, 0.0, 1.0, 1.0, 1.0))) == 0.0)
    forced = levy_sample(4, params, ScriptedRandom(normals=(1.0,)))
    assert np.allclose(forced, 3.48288e-4, atol=1e-8)


def test_levy_redraws_zero_denominator():
    rng = ScriptedRandom(normals=(1.0, 0.0, 1.0))
    sample = levy_sample(1, LevyParams(), rng)
    assert np.all(np.isfinite(sample))


def test_brownian_sample():
    params = BrownianParams()
    assert np.all(brownian_sample(3, params, ScriptedRandom(normals=(0.0,))) == 0.0)
    assert np.allclose(brownian_sample(3, params, ScriptedRandom(normals=(1.0,))), 0.05)
    draws = brownian_sample(1_000_000, params, np.random.default_rng(11))
    assert abs(np.std(draws) - 0.05) < 0.001
    assert abs(np.mean(draws)) < 0.001


def test_levy_tails_heavier_than_brownian():
    rng = np.random.default_rng(5)
    levy = np.abs(levy_sample(100_000, LevyParams(), rng))
    brownian = np.abs(brownian_sample(100_000, BrownianParams(), rng))
    levy = levy / np.median(levy)
    brownian = brownian / np.median(brownian)
    assert np.percentile(levy, 99.9) > np.percentile(brownian, 99.9)


def test_miso_late_update_lands_on_food_at_final_iteration():
    population = sample_population(max_iterations=10)
    food = population.food.copy()
    miso_late_update(population, 10, np.random.default_rng(2))
    for agent in population.agents():
        assert np.allclose(agent.position, food.position)
    assert population.food.fitness == pytest.approx(food.fitness)


def test_miso_late_update_scalar_rule():
    bounds = Bounds([-2.0], [2.0])
    males = [Agent([0.0]), Agent([0.0])]
    females = [Agent([1.0]), Agent([1.0])]
    population = Population(males, females, bounds, evaluator=lambda x: float((x[0] - 1.0) ** 2),
                             max_iterations=4)
    for agent in population.agents():
        agent.fitness = population.evaluator(agent.position)
    population.update_food()
    # t = 2 of 4: CF = cos(pi/4) * 0.5
    levy = LevyParams()
    scale = levy.weight * levy.step_scale * levy.sigma
    rng = ScriptedRandom(normals=(0.1 / scale, 1.0))
    miso_late_update(population, 2, rng, levy=levy)
    cf = convergence_factor(2, 4)
    expected = 1.0 + cf * (0.1 * (0.1 * 1.0 - 0.0))
    assert population.males[0].position[0] == pytest.approx(expected)


def test_df_one_reduces_to_so():
    reference = sample_population(max_iterations=20)
    for variant in (Variant.MISO, Variant.DSO):
        so_pop = reference.copy()
        other_pop = reference.copy()
        so, other = SnakeStrategy(Variant.SO), SnakeStrategy(variant, df_override=1.0)
        rng_so, rng_other = np.random.default_rng(7), np.random.default_rng(7)
        for t in range(1, 10):
            so.step(so_pop, t, rng_so)
            other.step(other_pop, t, rng_other)
            assert np.array_equal(so_pop.positions(), other_pop.positions())
            assert so_pop.food.fitness == other_pop.food.fitness


def test_miso_late_phase_skips_classic_dispatch():
    population = sample_population(max_iterations=20)
    strategy = SnakeStrategy(Variant.MISO)
    rng = np.random.default_rng(4)
    for t in range(1, 21):
        strategy.step(population, t, rng)
        if t >= 10:
            assert strategy.last_branch == "late"
        else:
            assert strategy.last_branch in ("explore", "food", "fight", "mate")


def test_ablations_keep_other_sex_on_classic_dispatch():
    for variant in (Variant.LSO, Variant.BSO):
        population = sample_population(max_iterations=20)
        strategy = SnakeStrategy(variant)
        rng = np.random.default_rng(8)
        for t in range(1, 21):
            strategy.step(population, t, rng)
            assert strategy.last_branch in ("explore", "food", "fight", "mate")
            assert all(population.bounds.contains(a.position) for a in population.agents())


def test_step_keeps_agents_in_bounds_and_food_monotone():
    for variant in Variant:
        population = sample_population(max_iterations=30, seed=12)
        strategy = SnakeStrategy(variant)
        rng = np.random.default_rng(9)
        previous = population.food.fitness
        for t in range(1, 31):
            strategy.step(population, t, rng)
            assert all(population.bounds.contains(a.position) for a in population.agents())
            assert population.food.fitness <= previous
            previous = population.food.fitness


def test_unknown_variant_rejected():
    with pytest.raises(ConfigurationError):
        SnakeStrategy("GWO")


def run_all_tests():
    tests = [
        test_temperature_and_food_quantity,
        test_hunt_ability,
        test_snake_params_validation,
        test_explore_step,
        test_food_step,
        test_fight_step,
        test_mate_step,
        test_hatch_replace_worst_to_lower_bound,
        test_disturbance_factor,
        test_convergence_factor,
        test_levy_sample,
        test_levy_redraws_zero_denominator,
        test_brownian_sample,
        test_levy_tails_heavier_than_brownian,
        test_miso_late_update_lands_on_food_at_final_iteration,
        test_miso_late_update_scalar_rule,
        test_df_one_reduces_to_so,
        test_miso_late_phase_skips_classic_dispatch,
        test_ablations_keep_other_sex_on_classic_dispatch,
        test_step_keeps_agents_in_bounds_and_food_monotone,
        test_unknown_variant_rejected,
    ]
    for test in tests:
        test()
        print(f"passed: {test.__name__}")
    return len(tests)


if __name__ == "__main__":
    print("=== Snake Optimizer Test Suite ===")
    run_all_tests()
    print("\n=== Test Suite Completed ===")
