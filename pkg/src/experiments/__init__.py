from .experiment_module import (ExperimentConfig, RunRecord, build_parser, build_problem,
                                compare_to_reference, config_from_args, execute_run, friedman_ranks,
                                load_config_file, parse_config, run_experiment, run_seed,
                                valid_problem_names)

__all__ = [
    'ExperimentConfig',
    'RunRecord',
    'build_parser',
    'build_problem',
    'compare_to_reference',
    'config_from_args',
    'execute_run',
    'friedman_ranks',
    'load_config_file',
    'parse_config',
    'run_experiment',
    'run_seed',
    'valid_problem_names',
]
