from __future__ import annotations

import argparse
import inspect
import json
import logging
import os
import zlib
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from dotenv import load_dotenv
from tqdm import tqdm

from src.benchmarks.benchmark_module import (BASE_FUNCTIONS, BenchmarkProblem, as_problem, random_instance,
                                            save_instance)
from src.engine.engine_module import ConfigurationError, Problem, RunConfig, RunResult, Variant, run
from src.engineering.engineering_module import ENGINEERING_PROBLEMS, get_engineering_problem
from src.snake.snake_module import SnakeStrategy
from src.stats.stats_module import (RankTable, diversity_trace, friedman_test, summarize,
                                    wilcoxon_rank_sum, win_tie_loss)
from src.uav.uav_module import PathSpec, TerrainModel, UavProblem, export_waypoints

logger = logging.getLogger(__name__)

DEFAULT_POPULATION = 30
DEFAULT_ITERATIONS = 500
DEFAULT_RUNS = 30
DEFAULT_BASE_SEED = 2024
DEFAULT_OUTPUT_DIR = "results"
DEFAULT_ALGORITHMS = ("SO", "MISO")
DEFAULT_PROBLEMS = ("rastrigin", "ackley")
DEFAULT_DIMS = (30,)
REFERENCE_ALGORITHM = Variant.MISO.value
SEED_MODULUS = 2 ** 32


def valid_problem_names() -> List[str]:
    return sorted(BASE_FUNCTIONS) + list(ENGINEERING_PROBLEMS) + ["uav"]


class ExperimentConfig:
    def __init__(self, algorithms: Sequence[str] = DEFAULT_ALGORITHMS,
                 problems: Sequence[str] = DEFAULT_PROBLEMS, dims: Sequence[int] = DEFAULT_DIMS,
                 population_size: int = DEFAULT_POPULATION, max_iterations: int = DEFAULT_ITERATIONS,
                 runs: int = DEFAULT_RUNS, base_seed: int = DEFAULT_BASE_SEED,
                 output_dir: str = DEFAULT_OUTPUT_DIR, weights: Optional[Sequence[float]] = None,
                 unpaired: bool = False, record_diversity: bool = False, workers: int = 1):
        self.algorithms = [Variant.parse(a).value for a in algorithms]
        self.problems = [str(p).lower() for p in problems]
        self.dims = [int(d) for d in dims]
        self.population_size = int(population_size)
        self.max_iterations = int(max_iterations)
        self.runs = int(runs)
        self.base_seed = int(base_seed)
        self.output_dir = output_dir
        self.weights = list(weights) if weights is not None else list(PathSpec().weights)
        self.unpaired = bool(unpaired)
        self.record_diversity = bool(record_diversity)
        self.workers = int(workers)
        self.validate()

    def validate(self) -> None:
        if not self.algorithms:
            raise ConfigurationError("At least one algorithm is required")
        valid = valid_problem_names()
        for problem in self.problems:
            if problem not in valid:
                raise ConfigurationError(f"Unknown problem '{problem}'. Valid problems: {', '.join(valid)}")
        if not self.problems:
            raise ConfigurationError("At least one problem is required")
        if any(d < 2 for d in self.dims):
            raise ConfigurationError(f"Benchmark dimensions must be >= 2, got {self.dims}")
        if self.runs < 1:
            raise ConfigurationError(f"runs must be >= 1, got {self.runs}")
        if self.base_seed < 0:
            raise ConfigurationError(f"seed must be an unsigned integer, got {self.base_seed}")
        if self.workers < 1:
            raise ConfigurationError(f"workers must be >= 1, got {self.workers}")
        RunConfig(population_size=self.population_size, max_iterations=self.max_iterations)
        PathSpec(weights=self.weights)

    def problem_keys(self) -> List[str]:
        keys = []
        for problem in self.problems:
            if problem in BASE_FUNCTIONS:
                keys.extend(f"{problem}_d{dim}" for dim in self.dims)
            else:
                keys.append(problem)
        return keys

    def to_dict(self) -> Dict[str, Any]:
        return {
            'algorithms': list(self.algorithms),
            'problems': list(self.problems),
            'dims': list(self.dims),
            'population_size': self.population_size,
            'max_iterations': self.max_iterations,
            'runs': self.runs,
            'base_seed': self.base_seed,
            'weights': list(self.weights),
            'seed_pairing': 'unpaired' if self.unpaired else 'paired',
            'record_diversity': self.record_diversity,
        }


def stable_hash(*parts: Any) -> int:
    return zlib.crc32("|".join(str(p) for p in parts).encode("utf-8"))


def run_seed(config: ExperimentConfig, algorithm: str, problem_key: str, run_index: int) -> int:
    """Seed for one run; paired mode leaves the algorithm out so run r matches across algorithms."""
    if config.unpaired:
        offset = stable_hash(algorithm, problem_key, run_index)
    else:
        offset = stable_hash(problem_key, run_index)
    return (config.base_seed + offset) % SEED_MODULUS


def build_problem(problem_key: str, config: ExperimentConfig) -> Problem:
    if problem_key == "uav":
        return UavProblem(PathSpec(weights=config.weights), TerrainModel())
    if problem_key in ENGINEERING_PROBLEMS:
        return get_engineering_problem(problem_key)
    base, _, dim = problem_key.rpartition("_d")
    if base not in BASE_FUNCTIONS:
        raise ConfigurationError(f"Unknown problem '{problem_key}'. Valid problems: {', '.join(valid_problem_names())}")
    instance_seed = (config.base_seed + stable_hash(base, dim)) % SEED_MODULUS
    problem = as_problem(random_instance(base, int(dim), seed=instance_seed))
    problem.name = problem_key
    return problem


class RunRecord:
    def __init__(self, algorithm: str, problem: str, run_index: int, seed: int,
                 result: Optional[RunResult] = None, feasible: bool = False, error: Optional[str] = None):
        self.algorithm = algorithm
        self.problem = problem
        self.run_index = run_index
        self.seed = seed
        self.result = result
        self.feasible = feasible
        self.error = error

    @property
    def ok(self) -> bool:
        return self.result is not None

    def timing_row(self) -> Dict[str, Any]:
        return {
            'algorithm': self.algorithm,
            'problem': self.problem,
            'run': self.run_index,
            'seed': self.seed,
            'status': 'ok' if self.ok else 'failed',
            'wall_time': self.result.wall_time if self.ok else float('nan'),
            'evaluations': self.result.evaluations if self.ok else 0,
            'best_fitness': self.result.best.fitness if self.ok else float('nan'),
            'feasible': self.feasible,
            'error': self.error or '',
        }


def _write_run_files(record: RunRecord, output_dir: str) -> None:
    result = record.result
    stem = f"{record.algorithm}_{record.problem}_{record.run_index}"
    convergence = pd.DataFrame({
        'iteration': np.arange(1, len(result.best_history) + 1),
        'best_fitness': result.best_history,
    })
    convergence.to_csv(os.path.join(output_dir, "convergence", f"{stem}.csv"), index=False)
    if result.diversity_history is not None:
        trace = diversity_trace(result.diversity_history)
        diversity = pd.DataFrame({
            'iteration': np.arange(1, len(result.diversity_history) + 1),
            'diversity': result.diversity_history,
            'inertia': result.inertia_history,
            'exploration_pct': [pair[0] for pair in trace],
            'exploitation_pct': [pair[1] for pair in trace],
            'mean_fitness': result.mean_fitness_history,
            'trajectory': result.trajectory_history,
        })
        diversity.to_csv(os.path.join(output_dir, "diversity", f"{stem}.csv"), index=False)


def execute_run(algorithm: str, problem: Problem, run_index: int, seed: int,
                config: ExperimentConfig, output_dir: Optional[str] = None) -> RunRecord:
    """One seeded run; failures are logged and recorded instead of raised."""
    record = RunRecord(algorithm, problem.name, run_index, seed)
    try:
        run_config = RunConfig(population_size=config.population_size,
                               max_iterations=config.max_iterations, seed=seed,
                               algorithm=algorithm, record_diversity=config.record_diversity)
        record.result = run(SnakeStrategy(algorithm), problem, run_config)
        record.feasible = problem.is_feasible(record.result.best.position)
        if not record.feasible:
            logger.warning(f"{algorithm} run {run_index} on {problem.name}: best solution is infeasible")
        if output_dir is not None:
            _write_run_files(record, output_dir)
    except Exception as e:
        logger.error(f"{algorithm} run {run_index} on {problem.name} failed: {e}")
        record.result = None
        record.error = str(e)
    return record


def _cell_summary(records: List[RunRecord]) -> Dict[str, Any]:
    ok = [r for r in records if r.ok]
    cell: Dict[str, Any] = {
        'runs': len(records),
        'failed_runs': len(records) - len(ok),
        'feasible_runs': sum(1 for r in ok if r.feasible),
    }
    if ok:
        cell.update(summarize([r.result.best.fitness for r in ok]))
        cell['mean_evaluations'] = float(np.mean([r.result.evaluations for r in ok]))
    return cell


def _json_default(value: Any) -> Any:
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"Cannot serialize {type(value).__name__}")


def _finite_or_none(value: float) -> Optional[float]:
    return None if value is None or not np.isfinite(value) else float(value)


def compare_to_reference(samples: Dict[str, Dict[str, List[float]]], algorithms: List[str],
                         problem_keys: List[str]) -> Dict[str, Any]:
    """Rank-sum p-values and W|T|L labels of every algorithm against MISO."""
    if REFERENCE_ALGORITHM not in algorithms:
        return {}
    comparison: Dict[str, Any] = {}
    for algorithm in algorithms:
        if algorithm == REFERENCE_ALGORITHM:
            continue
        per_problem = {}
        counts = {'+': 0, '=': 0, '-': 0}
        for key in problem_keys:
            candidate = samples[algorithm].get(key, [])
            reference = samples[REFERENCE_ALGORITHM].get(key, [])
            if not candidate or not reference:
                continue
            label = win_tie_loss(candidate, reference)
            counts[label] += 1
            per_problem[key] = {'p_value': wilcoxon_rank_sum(candidate, reference), 'label': label}
        comparison[algorithm] = {
            'problems': per_problem,
            'w_t_l': f"{counts['+']}|{counts['=']}|{counts['-']}",
        }
    return comparison


def friedman_ranks(samples: Dict[str, Dict[str, List[float]]], algorithms: List[str],
                   problem_keys: List[str]) -> Optional[Dict[str, Any]]:
    if len(algorithms) < 2:
        return None
    rows, used = [], []
    for key in problem_keys:
        if all(samples[a].get(key) for a in algorithms):
            rows.append([float(np.mean(samples[a][key])) for a in algorithms])
            used.append(key)
    if not rows:
        return None
    table = RankTable(rows, labels=algorithms, problems=used).to_dict()
    statistic, p_value = friedman_test(rows)
    table['statistic'] = _finite_or_none(statistic)
    table['p_value'] = _finite_or_none(p_value)
    return table


def run_experiment(config: ExperimentConfig) -> Dict[str, Any]:
    output_dir = config.output_dir
    for sub in ("convergence", "diversity", "instances", "uav"):
        if sub == "diversity" and not config.record_diversity:
            continue
        os.makedirs(os.path.join(output_dir, sub), exist_ok=True)

    problem_keys = config.problem_keys()
    problems = {key: build_problem(key, config) for key in problem_keys}
    for key, problem in problems.items():
        if isinstance(problem, BenchmarkProblem):
            save_instance(problem.spec, os.path.join(output_dir, "instances", f"{key}.txt"))

    tasks: List[Tuple[str, str, int]] = [
        (algorithm, key, r)
        for algorithm in config.algorithms
        for key in problem_keys
        for r in range(config.runs)
    ]
    logger.info(f"Running {len(tasks)} runs: {len(config.algorithms)} algorithms x "
                f"{len(problem_keys)} problems x {config.runs} runs on {config.workers} worker(s)")

    records: Dict[Tuple[str, str, int], RunRecord] = {}
    with ThreadPoolExecutor(max_workers=config.workers) as executor:
        futures = {
            executor.submit(execute_run, a, problems[p], r, run_seed(config, a, p, r), config, output_dir): (a, p, r)
            for a, p, r in tasks
        }
        for future in tqdm(as_completed(futures), total=len(futures), desc="Runs"):
            records[futures[future]] = future.result()

    ordered = [records[task] for task in tasks]
    timing = pd.DataFrame([record.timing_row() for record in ordered])
    timing.to_csv(os.path.join(output_dir, "timing.csv"), index=False)

    samples: Dict[str, Dict[str, List[float]]] = {a: {} for a in config.algorithms}
    results: Dict[str, Dict[str, Any]] = {a: {} for a in config.algorithms}
    for algorithm in config.algorithms:
        for key in problem_keys:
            cell_records = [r for r in ordered if r.algorithm == algorithm and r.problem == key]
            cell = _cell_summary(cell_records)
            successes = [r for r in cell_records if r.ok]
            samples[algorithm][key] = [r.result.best.fitness for r in successes]
            if successes:
                best = min(successes, key=lambda r: (r.result.best.fitness, r.run_index))
                cell['best_run'] = best.run_index
                cell['best_solution'] = problems[key].describe(best.result.best.position)
                if key == "uav":
                    export_waypoints(problems[key].path(best.result.best.position),
                                     os.path.join(output_dir, "uav", f"{algorithm}_uav_best.txt"),
                                     weights=config.weights, seed=best.seed)
            else:
                logger.warning(f"No successful runs for {algorithm} on {key}")
            results[algorithm][key] = cell

    summary = {
        'config': config.to_dict(),
        'results': results,
        'versus_reference': compare_to_reference(samples, config.algorithms, problem_keys),
        'friedman': friedman_ranks(samples, config.algorithms, problem_keys),
    }
    summary_path = os.path.join(output_dir, "summary.json")
    with open(summary_path, 'w', encoding='utf-8') as f:
        json.dump(summary, f, indent=2, sort_keys=True, default=_json_default)
        f.write("\n")
    logger.info(f"Summary written to {summary_path}")
    for algorithm in config.algorithms:
        for key in problem_keys:
            cell = results[algorithm][key]
            if 'best' in cell:
                logger.info(f"{algorithm:>5} {key:<16} best={cell['best']:.6g} "
                            f"median={cell['median']:.6g} mean={cell['mean']:.6g} std={cell['std']:.3g}")
    return summary


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Snake optimizer experiment runner")
    parser.add_argument('--mode', choices=['run', 'test'], default='run')
    parser.add_argument('--config', type=str, help="JSON experiment config; flags override its values")
    parser.add_argument('--algorithm', nargs='+', help=f"Variants: {', '.join(v.value for v in Variant)}")
    parser.add_argument('--problem', nargs='+', help="Benchmark, engineering or 'uav' identifiers")
    parser.add_argument('--dim', nargs='+', type=int, help="Benchmark dimensions")
    parser.add_argument('--pop', type=int)
    parser.add_argument('--iters', type=int)
    parser.add_argument('--runs', type=int)
    parser.add_argument('--seed', type=int)
    parser.add_argument('--weights', nargs=3, type=float, help="UAV cost weights w1 w2 w3")
    parser.add_argument('--out', type=str)
    parser.add_argument('--workers', type=int)
    parser.add_argument('--unpaired', action='store_true', default=None)
    parser.add_argument('--record-diversity', dest='record_diversity', action='store_true', default=None)
    parser.add_argument('--verbose', action='store_true')
    return parser


def _split_names(values: Optional[Sequence[str]]) -> Optional[List[str]]:
    if values is None:
        return None
    return [name for value in values for name in str(value).split(',') if name]


def load_config_file(path: str) -> Dict[str, Any]:
    if not os.path.exists(path):
        raise ConfigurationError(f"Config file not found: {path}")
    with open(path, 'r', encoding='utf-8') as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigurationError(f"Config file {path} is not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise ConfigurationError(f"Config file {path} must hold a JSON object")
    return data


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    load_dotenv()
    values: Dict[str, Any] = {
        'output_dir': os.getenv('SNAKE_OUTPUT_DIR', DEFAULT_OUTPUT_DIR),
        'workers': int(os.getenv('SNAKE_WORKERS', '1')),
        'base_seed': int(os.getenv('SNAKE_BASE_SEED', str(DEFAULT_BASE_SEED))),
    }
    if args.config:
        values.update(load_config_file(args.config))

    overrides = {
        'algorithms': _split_names(args.algorithm),
        'problems': _split_names(args.problem),
        'dims': args.dim,
        'population_size': args.pop,
        'max_iterations': args.iters,
        'runs': args.runs,
        'base_seed': args.seed,
        'weights': args.weights,
        'output_dir': args.out,
        'workers': args.workers,
        'unpaired': args.unpaired,
        'record_diversity': args.record_diversity,
    }
    values.update({k: v for k, v in overrides.items() if v is not None})

    known = set(inspect.signature(ExperimentConfig).parameters)
    unknown = sorted(set(values) - known)
    if unknown:
        raise ConfigurationError(f"Unknown config keys: {', '.join(unknown)}")
    return ExperimentConfig(**values)


def parse_config(argv: Optional[Sequence[str]] = None) -> ExperimentConfig:
    return config_from_args(build_parser().parse_args(argv))
