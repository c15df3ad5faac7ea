from .engineering_module import (ENGINEERING_PROBLEMS, PENALTY_COEFFICIENT, ConstrainedProblem,
                                 ConstraintReport, cantilever, describe, get_engineering_problem,
                                 penalize, rolling_bearing, speed_reducer, spring,
                                 three_bar_truss, welded_beam)

__all__ = [
    'ENGINEERING_PROBLEMS',
    'PENALTY_COEFFICIENT',
    'ConstrainedProblem',
    'ConstraintReport',
    'cantilever',
    'describe',
    'get_engineering_problem',
    'penalize',
    'rolling_bearing',
    'speed_reducer',
    'spring',
    'three_bar_truss',
    'welded_beam',
]
