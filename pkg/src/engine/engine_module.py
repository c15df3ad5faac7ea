from __future__ import annotations

import logging
import time
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

from src.stats.stats_module import dimension_diversity, inertia_diversity

logger = logging.getLogger(__name__)

MIN_POPULATION = 4


class ConfigurationError(ValueError):
    pass


class EvaluationError(RuntimeError):
    pass


class Variant(str, Enum):
    SO = "SO"
    MISO = "MISO"
    DSO = "DSO"
    LSO = "LSO"
    BSO = "BSO"

    @classmethod
    def parse(cls, name: Any) -> "Variant":
        if isinstance(name, Variant):
            return name
        try:
            return cls(str(name).upper())
        except ValueError:
            valid = ", ".join(v.value for v in cls)
            raise ConfigurationError(f"Unknown algorithm '{name}'. Valid algorithms: {valid}")


class Bounds:
    def __init__(self, lower: Sequence[float], upper: Sequence[float]):
        self.lower = np.asarray(lower, dtype=float).ravel()
        self.upper = np.asarray(upper, dtype=float).ravel()
        if self.lower.size < 1:
            raise ConfigurationError("Bounds need at least one dimension")
        if self.lower.shape != self.upper.shape:
            raise ConfigurationError(
                f"Bounds length mismatch: {self.lower.size} lower vs {self.upper.size} upper"
            )
        if not np.all(np.isfinite(self.lower)) or not np.all(np.isfinite(self.upper)):
            raise ConfigurationError("Bounds must be finite")
        if np.any(self.lower >= self.upper):
            bad = int(np.argmax(self.lower >= self.upper))
            raise ConfigurationError(
                f"Invalid bounds in dimension {bad}: lower {self.lower[bad]} >= upper {self.upper[bad]}"
            )

    @classmethod
    def uniform(cls, low: float, high: float, dim: int) -> "Bounds":
        return cls(np.full(dim, low, dtype=float), np.full(dim, high, dtype=float))

    @property
    def dim(self) -> int:
        return int(self.lower.size)

    @property
    def width(self) -> np.ndarray:
        return self.upper - self.lower

    def contains(self, position: np.ndarray) -> bool:
        position = np.asarray(position, dtype=float)
        return bool(np.all(position >= self.lower) and np.all(position <= self.upper))

    def to_dict(self) -> Dict[str, Any]:
        return {'lower': self.lower.tolist(), 'upper': self.upper.tolist()}


def clamp(position: Sequence[float], bounds: Bounds) -> np.ndarray:
    position = np.asarray(position, dtype=float)
    if position.shape != bounds.lower.shape:
        raise ConfigurationError(
            f"Position has {position.size} coordinates, bounds have {bounds.dim}"
        )
    return np.minimum(np.maximum(position, bounds.lower), bounds.upper)


class Problem:
    """Minimization problem evaluated through a penalized fitness.

    Subclasses set ``name`` and ``bounds`` and implement ``evaluate``. The
    evaluation must be pure: independent runs may share one problem object
    across threads.
    """

    name: str = "problem"
    bounds: Bounds

    @property
    def dim(self) -> int:
        return self.bounds.dim

    def evaluate(self, x: np.ndarray) -> float:
        raise NotImplementedError

    def describe(self, x: np.ndarray) -> Dict[str, Any]:
        return {'fitness': float(self.evaluate(x)), 'position': np.asarray(x, dtype=float).tolist()}

    def is_feasible(self, x: np.ndarray, tolerance: float = 1e-6) -> bool:
        return True


class FunctionProblem(Problem):
    def __init__(self, name: str, function: Callable[[np.ndarray], float], bounds: Bounds):
        self.name = name
        self.function = function
        self.bounds = bounds

    def evaluate(self, x: np.ndarray) -> float:
        return float(self.function(np.asarray(x, dtype=float)))


class Agent:
    def __init__(self, position: np.ndarray, fitness: float = float("inf")):
        self.position = np.asarray(position, dtype=float)
        self.fitness = float(fitness)

    def copy(self) -> "Agent":
        return Agent(self.position.copy(), self.fitness)

    def to_dict(self) -> Dict[str, Any]:
        return {'position': self.position.tolist(), 'fitness': self.fitness}

    def __repr__(self) -> str:
        return f"Agent(fitness={self.fitness:.6g}, position={np.array2string(self.position, precision=4)})"


class Population:
    """Male and female agent groups plus the best-ever agent (food).

    Every position written through ``commit`` or ``replace`` is clamped to
    the bounds and evaluated; the evaluation count includes initialization.
    """

    def __init__(self, males: List[Agent], females: List[Agent], bounds: Bounds,
                 evaluator: Optional[Callable[[np.ndarray], float]] = None,
                 max_iterations: int = 1):
        self.males = males
        self.females = females
        self.bounds = bounds
        self.evaluator = evaluator
        self.iteration = 0
        self.max_iterations = max_iterations
        self.evaluations = 0
        self.food: Optional[Agent] = None

    @property
    def size(self) -> int:
        return len(self.males) + len(self.females)

    def agents(self) -> List[Agent]:
        return self.males + self.females

    def positions(self) -> np.ndarray:
        return np.array([agent.position for agent in self.agents()])

    def fitnesses(self) -> np.ndarray:
        return np.array([agent.fitness for agent in self.agents()])

    def evaluate(self, position: np.ndarray) -> float:
        if self.evaluator is None:
            raise EvaluationError("Population has no evaluator attached")
        try:
            value = float(self.evaluator(position))
        except EvaluationError:
            raise
        except Exception as e:
            raise EvaluationError(f"Objective failed at position {position.tolist()}: {e}") from e
        self.evaluations += 1
        if not np.isfinite(value):
            raise EvaluationError(f"Objective returned {value} at position {position.tolist()}")
        return value

    def update_food(self) -> Agent:
        for agent in self.agents():
            if self.food is None or agent.fitness < self.food.fitness:
                self.food = agent.copy()
        return self.food

    def replace(self, agent: Agent, position: np.ndarray) -> Agent:
        agent.position = clamp(position, self.bounds)
        agent.fitness = self.evaluate(agent.position)
        return agent

    def commit(self, male_positions: Optional[Sequence[np.ndarray]] = None,
               female_positions: Optional[Sequence[np.ndarray]] = None) -> "Population":
        if male_positions is not None:
            for agent, position in zip(self.males, male_positions):
                self.replace(agent, position)
        if female_positions is not None:
            for agent, position in zip(self.females, female_positions):
                self.replace(agent, position)
        self.update_food()
        return self

    def best_index(self, group: List[Agent]) -> int:
        return int(np.argmin([agent.fitness for agent in group]))

    def worst_index(self, group: List[Agent]) -> int:
        return int(np.argmax([agent.fitness for agent in group]))

    def copy(self) -> "Population":
        clone = Population([a.copy() for a in self.males], [a.copy() for a in self.females],
                           self.bounds, self.evaluator, self.max_iterations)
        clone.iteration = self.iteration
        clone.evaluations = self.evaluations
        clone.food = self.food.copy() if self.food is not None else None
        return clone


def split_sizes(n: int) -> tuple:
    n_males = n // 2
    return n_males, n - n_males


def init_population(bounds: Bounds, n: int, rng: Any,
                    evaluator: Optional[Callable[[np.ndarray], float]] = None,
                    max_iterations: int = 1) -> Population:
    if not isinstance(bounds, Bounds):
        raise ConfigurationError("init_population needs a Bounds instance")
    if int(n) != n or n < MIN_POPULATION:
        raise ConfigurationError(f"Population size must be an integer >= {MIN_POPULATION}, got {n}")
    n = int(n)
    n_males, _ = split_sizes(n)
    draws = np.asarray(rng.random((n, bounds.dim)), dtype=float)
    positions = bounds.lower + draws * bounds.width
    agents = [Agent(position) for position in positions]
    population = Population(agents[:n_males], agents[n_males:], bounds, evaluator, max_iterations)
    if evaluator is not None:
        for agent in population.agents():
            agent.fitness = population.evaluate(agent.position)
        population.update_food()
    return population


class RunConfig:
    def __init__(self, population_size: int = 30, max_iterations: int = 500, seed: int = 0,
                 algorithm: Any = Variant.MISO, record_diversity: bool = False):
        self.population_size = population_size
        self.max_iterations = max_iterations
        self.seed = seed
        self.algorithm = Variant.parse(algorithm)
        self.record_diversity = record_diversity
        self.validate()

    def validate(self) -> None:
        if int(self.population_size) != self.population_size or self.population_size < MIN_POPULATION:
            raise ConfigurationError(
                f"population_size must be an integer >= {MIN_POPULATION}, got {self.population_size}"
            )
        if int(self.max_iterations) != self.max_iterations or self.max_iterations < 1:
            raise ConfigurationError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if int(self.seed) != self.seed or self.seed < 0:
            raise ConfigurationError(f"seed must be an unsigned integer, got {self.seed}")

    def to_dict(self) -> Dict[str, Any]:
        return {
            'population_size': int(self.population_size),
            'max_iterations': int(self.max_iterations),
            'seed': int(self.seed),
            'algorithm': self.algorithm.value,
            'record_diversity': bool(self.record_diversity),
        }


class RunResult:
    def __init__(self, best: Agent, best_history: List[float], evaluations: int, wall_time: float,
                 diversity_history: Optional[List[float]] = None,
                 inertia_history: Optional[List[float]] = None,
                 mean_fitness_history: Optional[List[float]] = None,
                 trajectory_history: Optional[List[float]] = None,
                 initial_positions: Optional[np.ndarray] = None):
        self.best = best
        self.best_history = best_history
        self.diversity_history = diversity_history
        self.inertia_history = inertia_history
        self.mean_fitness_history = mean_fitness_history or []
        self.trajectory_history = trajectory_history or []
        self.evaluations = evaluations
        self.wall_time = wall_time
        self.initial_positions = initial_positions

    def to_dict(self) -> Dict[str, Any]:
        return {
            'best': self.best.to_dict(),
            'best_history': list(self.best_history),
            'diversity_history': self.diversity_history,
            'inertia_history': self.inertia_history,
            'mean_fitness_history': list(self.mean_fitness_history),
            'trajectory_history': list(self.trajectory_history),
            'evaluations': self.evaluations,
            'wall_time': self.wall_time,
        }


def run(algorithm: Any, problem: Problem, config: RunConfig) -> RunResult:
    """Run ``algorithm.step(population, t, rng)`` for t = 1..T on ``problem``.

    One ``numpy.random.Generator`` seeded from ``config.seed`` feeds both the
    initialization and every step, so equal seeds give identical results.
    """
    config.validate()
    if problem.bounds.dim < 1:
        raise ConfigurationError(f"Problem '{problem.name}' has no dimensions")
    rng = np.random.default_rng(int(config.seed))
    started = time.perf_counter()
    population = init_population(problem.bounds, config.population_size, rng,
                                 evaluator=problem.evaluate,
                                 max_iterations=config.max_iterations)
    initial_positions = population.positions()

    best_history: List[float] = []
    mean_fitness_history: List[float] = []
    trajectory_history: List[float] = []
    diversity_history: Optional[List[float]] = [] if config.record_diversity else None
    inertia_history: Optional[List[float]] = [] if config.record_diversity else None

    for t in range(1, config.max_iterations + 1):
        population.iteration = t
        algorithm.step(population, t, rng)
        best_history.append(population.food.fitness)
        mean_fitness_history.append(float(np.mean(population.fitnesses())))
        trajectory_history.append(float(population.males[0].position[0]))
        if config.record_diversity:
            positions = population.positions()
            diversity_history.append(dimension_diversity(positions))
            inertia_history.append(inertia_diversity(positions))
        logger.debug(f"{problem.name} t={t}: best={population.food.fitness:.6g}")

    wall_time = time.perf_counter() - started
    logger.info(f"{config.algorithm.value} on {problem.name} (seed {config.seed}): "
                f"best {population.food.fitness:.6g} after {population.evaluations} evaluations "
                f"in {wall_time:.2f}s")
    return RunResult(best=population.food.copy(), best_history=best_history,
                     evaluations=population.evaluations, wall_time=wall_time,
                     diversity_history=diversity_history, inertia_history=inertia_history,
                     mean_fitness_history=mean_fitness_history,
                     trajectory_history=trajectory_history,
                     initial_positions=initial_positions)


def optimize(problem: Problem, algorithm: Any = Variant.MISO, population_size: int = 30,
             max_iterations: int = 500, seed: int = 0, record_diversity: bool = False) -> RunResult:
    from src.snake.snake_module import SnakeStrategy

    config = RunConfig(population_size=population_size, max_iterations=max_iterations, seed=seed,
                       algorithm=algorithm, record_diversity=record_diversity)
    return run(SnakeStrategy(config.algorithm), problem, config)
