from .benchmark_module import (BASE_FUNCTIONS, DEFAULT_BIASES, BenchmarkProblem, BenchmarkSpec,
                               as_problem, evaluate, load_instance, random_instance, save_instance)

__all__ = [
    'BASE_FUNCTIONS',
    'DEFAULT_BIASES',
    'BenchmarkProblem',
    'BenchmarkSpec',
    'as_problem',
    'evaluate',
    'load_instance',
    'random_instance',
    'save_instance',
]
