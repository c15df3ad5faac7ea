from .engine_module import (Agent, Bounds, ConfigurationError, EvaluationError, FunctionProblem,
                            Population, Problem, RunConfig, RunResult, Variant, clamp,
                            init_population, optimize, run, split_sizes)

__all__ = [
    'Agent',
    'Bounds',
    'ConfigurationError',
    'EvaluationError',
    'FunctionProblem',
    'Population',
    'Problem',
    'RunConfig',
    'RunResult',
    'Variant',
    'clamp',
    'init_population',
    'optimize',
    'run',
    'split_sizes',
]
