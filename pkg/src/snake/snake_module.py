from __future__ import annotations

import logging
import math
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from src.engine.engine_module import Agent, Bounds, ConfigurationError, Population, Variant
from .random_walks import BrownianParams, LevyParams, brownian_sample, levy_sample

logger = logging.getLogger(__name__)

EXPONENT_FLOOR = -700.0


class SnakeParams:
    def __init__(self, q_threshold: float = 0.25, temp_threshold: float = 0.6,
                 mode_rand_threshold: float = 0.6, c1: float = 0.5, c2: float = 0.05, c3: float = 2.0):
        for name, value in (('q_threshold', q_threshold), ('temp_threshold', temp_threshold),
                            ('mode_rand_threshold', mode_rand_threshold)):
            if not 0 < value < 1:
                raise ConfigurationError(f"{name} must lie in (0, 1), got {value}")
        for name, value in (('c1', c1), ('c2', c2), ('c3', c3)):
            if value <= 0:
                raise ConfigurationError(f"{name} must be positive, got {value}")
        self.q_threshold = q_threshold
        self.temp_threshold = temp_threshold
        self.mode_rand_threshold = mode_rand_threshold
        self.c1 = c1
        self.c2 = c2
        self.c3 = c3

    def to_dict(self) -> Dict[str, Any]:
        return {
            'q_threshold': self.q_threshold,
            'temp_threshold': self.temp_threshold,
            'mode_rand_threshold': self.mode_rand_threshold,
            'c1': self.c1,
            'c2': self.c2,
            'c3': self.c3,
        }


def temperature(t: int, T: int) -> float:
    return math.exp(-t / T)


def food_quantity(t: int, T: int, c1: float) -> float:
    return c1 * math.exp((t - T) / T)


def hunt_ability(f_rand: float, f_self: float) -> float:
    """exp(-f_rand / f_self) with the exponent clipped to [-700, 0]."""
    if f_self == 0:
        ratio = 0.0 if f_rand == 0 else math.copysign(math.inf, f_rand)
    else:
        ratio = f_rand / f_self
    exponent = min(0.0, max(EXPONENT_FLOOR, -ratio))
    return math.exp(exponent)


def disturbance_factor(t: int, T: int, rng: Any) -> float:
    return (math.sin(2.0 * float(rng.random())) + 1.0) * (1.0 - t / T)


def convergence_factor(t: int, T: int) -> float:
    ratio = t / T
    return math.cos(math.pi / 2.0 * ratio) * (1.0 - ratio) ** (2.0 * ratio)


def _coin(rng: Any) -> float:
    return 1.0 if float(rng.random()) < 0.5 else -1.0


def explore_step(agent: Agent, rand_peer: Agent, bounds: Bounds, df: float,
                 params: SnakeParams, rng: Any) -> np.ndarray:
    ability = hunt_ability(rand_peer.fitness, agent.fitness)
    sign = _coin(rng)
    r = np.asarray(rng.random(bounds.dim), dtype=float)
    return rand_peer.position + sign * df * params.c2 * ability * (bounds.width * r + bounds.lower)


def food_step(agent: Agent, food: Agent, temp: float, df: float,
              params: SnakeParams, rng: Any) -> np.ndarray:
    sign = _coin(rng)
    r = np.asarray(rng.random(agent.position.size), dtype=float)
    return food.position + sign * df * params.c3 * temp * r * (food.position - agent.position)


def fight_step(agent: Agent, best_opposite: Agent, q: float, df: float,
               params: SnakeParams, rng: Any) -> np.ndarray:
    ability = hunt_ability(best_opposite.fitness, agent.fitness)
    r = np.asarray(rng.random(agent.position.size), dtype=float)
    return agent.position + df * params.c3 * ability * r * (q * best_opposite.position - agent.position)


def mate_step(agent: Agent, partner: Agent, q: float, df: float,
              params: SnakeParams, rng: Any) -> np.ndarray:
    ability = hunt_ability(partner.fitness, agent.fitness)
    r = np.asarray(rng.random(agent.position.size), dtype=float)
    return agent.position + df * params.c3 * ability * r * (q * partner.position - agent.position)


def hatch_replace(population: Population, bounds: Bounds, rng: Any,
                  males: bool = True, females: bool = True) -> Population:
    groups = ([population.males] if males else []) + ([population.females] if females else [])
    for group in groups:
        worst = group[population.worst_index(group)]
        draws = np.asarray(rng.random(bounds.dim), dtype=float)
        population.replace(worst, bounds.lower + draws * bounds.width)
    population.update_food()
    return population


def late_positions(group: List[Agent], food: Agent, cf: float, sampler) -> List[np.ndarray]:
    proposals = []
    for agent in group:
        walk = sampler(agent.position.size)
        proposals.append(food.position + cf * (walk * (walk * food.position - agent.position)))
    return proposals


def miso_late_update(population: Population, t: int, rng: Any,
                     levy: Optional[LevyParams] = None,
                     brownian: Optional[BrownianParams] = None) -> Population:
    levy = levy or LevyParams()
    brownian = brownian or BrownianParams()
    cf = convergence_factor(t, population.max_iterations)
    food = population.food.copy()
    new_males = late_positions(population.males, food, cf, lambda d: levy_sample(d, levy, rng))
    new_females = late_positions(population.females, food, cf, lambda d: brownian_sample(d, brownian, rng))
    return population.commit(new_males, new_females)


class SnakeStrategy:
    """Per-iteration update for SO, MISO and the DSO/LSO/BSO ablations.

    Random draws per iteration, in order: DF (DF variants only), then the
    fight/mate coin (fight-or-mate branch only), then per agent (males
    first): peer index (explore only), sign coin (explore/food only),
    per-dimension uniforms; late-phase walks follow for the late sexes, and
    hatching draws last.
    """

    def __init__(self, variant: Any = Variant.MISO, params: Optional[SnakeParams] = None,
                 levy: Optional[LevyParams] = None, brownian: Optional[BrownianParams] = None,
                 df_override: Optional[float] = None):
        self.variant = Variant.parse(variant)
        self.params = params or SnakeParams()
        self.levy = levy or LevyParams()
        self.brownian = brownian or BrownianParams()
        self.df_override = df_override
        self.last_branch: Optional[str] = None

    def _disturbance(self, t: int, T: int, rng: Any) -> float:
        if self.df_override is not None:
            return float(self.df_override)
        return disturbance_factor(t, T, rng)

    def _dispatch(self, population: Population, t: int, df: float, rng: Any,
                  males: bool, females: bool) -> Tuple[Optional[list], Optional[list], bool]:
        params = self.params
        T = population.max_iterations
        temp = temperature(t, T)
        q = food_quantity(t, T, params.c1)
        bounds = population.bounds
        male_group, female_group = population.males, population.females
        new_males: Optional[list] = None
        new_females: Optional[list] = None
        mated = False

        if q < params.q_threshold:
            self.last_branch = "explore"
            if males:
                new_males = [explore_step(agent, male_group[int(rng.integers(len(male_group)))],
                                          bounds, df, params, rng) for agent in male_group]
            if females:
                new_females = [explore_step(agent, female_group[int(rng.integers(len(female_group)))],
                                            bounds, df, params, rng) for agent in female_group]
        elif temp > params.temp_threshold:
            self.last_branch = "food"
            food = population.food
            if males:
                new_males = [food_step(agent, food, temp, df, params, rng) for agent in male_group]
            if females:
                new_females = [food_step(agent, food, temp, df, params, rng) for agent in female_group]
        elif float(rng.random()) > params.mode_rand_threshold:
            self.last_branch = "fight"
            best_male = male_group[population.best_index(male_group)]
            best_female = female_group[population.best_index(female_group)]
            if males:
                new_males = [fight_step(agent, best_female, q, df, params, rng) for agent in male_group]
            if females:
                new_females = [fight_step(agent, best_male, q, df, params, rng) for agent in female_group]
        else:
            self.last_branch = "mate"
            mated = True
            if males:
                new_males = [mate_step(agent, female_group[i % len(female_group)], q, df, params, rng)
                             for i, agent in enumerate(male_group)]
            if females:
                new_females = [mate_step(agent, male_group[i % len(male_group)], q, df, params, rng)
                               for i, agent in enumerate(female_group)]
        return new_males, new_females, mated

    def step(self, population: Population, t: int, rng: Any) -> Population:
        T = population.max_iterations
        late = t >= T / 2
        variant = self.variant
        late_males = late and variant in (Variant.MISO, Variant.LSO)
        late_females = late and variant in (Variant.MISO, Variant.BSO)
        scaled = variant == Variant.DSO or (variant == Variant.MISO and not late)

        new_males: Optional[list] = None
        new_females: Optional[list] = None
        mated = False
        if not (late_males and late_females):
            df = self._disturbance(t, T, rng) if scaled else 1.0
            new_males, new_females, mated = self._dispatch(population, t, df, rng,
                                                           males=not late_males,
                                                           females=not late_females)
        else:
            self.last_branch = "late"

        if late_males or late_females:
            cf = convergence_factor(t, T)
            food = population.food.copy()
            if late_males:
                new_males = late_positions(population.males, food, cf,
                                           lambda d: levy_sample(d, self.levy, rng))
            if late_females:
                new_females = late_positions(population.females, food, cf,
                                             lambda d: brownian_sample(d, self.brownian, rng))

        population.commit(new_males, new_females)
        if mated:
            hatch_replace(population, population.bounds, rng, males=not late_males, females=not late_females)
        logger.debug(f"{variant.value} t={t}: branch={self.last_branch} best={population.food.fitness:.6g}")
        return population


def step(population: Population, t: int, variant: Any, rng: Any) -> Population:
    return SnakeStrategy(variant).step(population, t, rng)
