from .stats_module import (RankTable, dimension_diversity, diversity_trace, explore_exploit_pct,
                           friedman_mean_rank, friedman_test, inertia_diversity, summarize,
                           wilcoxon_rank_sum, win_tie_loss)

__all__ = [
    'RankTable',
    'dimension_diversity',
    'diversity_trace',
    'explore_exploit_pct',
    'friedman_mean_rank',
    'friedman_test',
    'inertia_diversity',
    'summarize',
    'wilcoxon_rank_sum',
    'win_tie_loss',
]
