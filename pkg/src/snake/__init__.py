from .random_walks import BrownianParams, LevyParams, brownian_sample, levy_sample, mantegna_sigma
from .snake_module import (SnakeParams, SnakeStrategy, convergence_factor, disturbance_factor,
                           explore_step, fight_step, food_quantity, food_step, hatch_replace,
                           hunt_ability, mate_step, miso_late_update, step, temperature)

__all__ = [
    'BrownianParams',
    'LevyParams',
    'SnakeParams',
    'SnakeStrategy',
    'brownian_sample',
    'convergence_factor',
    'disturbance_factor',
    'explore_step',
    'fight_step',
    'food_quantity',
    'food_step',
    'hatch_replace',
    'hunt_ability',
    'levy_sample',
    'mantegna_sigma',
    'mate_step',
    'miso_late_update',
    'step',
    'temperature',
]
