from __future__ import annotations

import itertools
import logging
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np
from scipy import stats as scipy_stats

logger = logging.getLogger(__name__)

EXACT_MAX_SIZE = 10
SIGNIFICANCE = 0.05


def _as_positions(population: Any) -> np.ndarray:
    if hasattr(population, "positions"):
        population = population.positions()
    positions = np.asarray(population, dtype=float)
    if positions.ndim == 1:
        positions = positions.reshape(-1, 1)
    if positions.size == 0:
        raise ValueError("Population is empty")
    return positions


def _as_sample(values: Sequence[float]) -> np.ndarray:
    sample = np.asarray(values, dtype=float).ravel()
    if sample.size == 0:
        raise ValueError("Sample set is empty")
    return sample


def rank_sum_distribution(ranks: np.ndarray, n_a: int) -> np.ndarray:
    """Every attainable rank sum for a group of ``n_a`` drawn from ``ranks``."""
    return np.array([sum(c) for c in itertools.combinations(ranks.tolist(), n_a)], dtype=float)


def wilcoxon_rank_sum(a: Sequence[float], b: Sequence[float]) -> float:
    """Two-sided Wilcoxon rank-sum p-value.

    Exact enumeration of all group assignments when both samples have at
    most ten values, otherwise the tie- and continuity-corrected normal
    approximation.
    """
    a = _as_sample(a)
    b = _as_sample(b)
    pooled = np.concatenate([a, b])
    if np.all(pooled == pooled[0]):
        logger.warning("All values identical across both samples; returning p = 1")
        return 1.0

    ranks = scipy_stats.rankdata(pooled)
    n_a, n_b = a.size, b.size
    observed = float(np.sum(ranks[:n_a]))

    if n_a <= EXACT_MAX_SIZE and n_b <= EXACT_MAX_SIZE:
        sums = rank_sum_distribution(ranks, n_a)
        eps = 1e-9
        lower = np.mean(sums <= observed + eps)
        upper = np.mean(sums >= observed - eps)
        return float(min(1.0, 2.0 * min(lower, upper)))

    n = n_a + n_b
    mean = n_a * (n + 1) / 2.0
    _, tie_counts = np.unique(pooled, return_counts=True)
    tie_term = np.sum(tie_counts ** 3 - tie_counts) / (n * (n - 1))
    variance = n_a * n_b / 12.0 * ((n + 1) - tie_term)
    if variance <= 0:
        return 1.0
    deviation = max(abs(observed - mean) - 0.5, 0.0)
    z = deviation / np.sqrt(variance)
    return float(min(1.0, 2.0 * scipy_stats.norm.sf(z)))


class RankTable:
    def __init__(self, scores: Sequence[Sequence[float]], labels: Sequence[str] = None,
                 problems: Sequence[str] = None):
        self.scores = np.asarray(scores, dtype=float)
        if self.scores.ndim != 2 or self.scores.shape[1] < 2 or self.scores.shape[0] < 1:
            raise ValueError("Scores must be a (problems x algorithms) matrix with at least 2 algorithms")
        self.labels = list(labels) if labels is not None else [f"A{i}" for i in range(self.scores.shape[1])]
        self.problems = list(problems) if problems is not None else [f"P{i}" for i in range(self.scores.shape[0])]
        self.ranks = np.vstack([scipy_stats.rankdata(row) for row in self.scores])
        self.mean_ranks = self.ranks.mean(axis=0)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'algorithms': self.labels,
            'problems': self.problems,
            'ranks': self.ranks.tolist(),
            'mean_ranks': dict(zip(self.labels, self.mean_ranks.tolist())),
        }


def friedman_mean_rank(scores: Sequence[Sequence[float]]) -> np.ndarray:
    return RankTable(scores).mean_ranks


def friedman_test(scores: Sequence[Sequence[float]]) -> Tuple[float, float]:
    """Friedman chi-square statistic and p-value over the problem rows."""
    matrix = np.asarray(scores, dtype=float)
    if matrix.shape[0] < 2 or matrix.shape[1] < 3:
        return float("nan"), float("nan")
    statistic, p_value = scipy_stats.friedmanchisquare(*matrix.T)
    return float(statistic), float(p_value)


def win_tie_loss(candidate: Sequence[float], reference: Sequence[float],
                 alpha: float = SIGNIFICANCE) -> str:
    """'+' reference significantly better, '-' candidate significantly better, '=' otherwise.

    Minimization: "better" means a smaller median.
    """
    p_value = wilcoxon_rank_sum(candidate, reference)
    if p_value >= alpha:
        return "="
    return "+" if np.median(reference) < np.median(candidate) else "-"


def dimension_diversity(population: Any) -> float:
    positions = _as_positions(population)
    medians = np.median(positions, axis=0)
    return float(np.mean(np.mean(np.abs(medians - positions), axis=0)))


def explore_exploit_pct(div: float, div_max: float) -> Tuple[float, float]:
    if div_max <= 0:
        return 0.0, 100.0
    exploration = div / div_max * 100.0
    exploitation = abs(div - div_max) / div_max * 100.0
    return float(exploration), float(exploitation)


def diversity_trace(div_history: Sequence[float]) -> List[Tuple[float, float]]:
    history = np.asarray(div_history, dtype=float)
    if history.size == 0:
        return []
    div_max = float(history.max())
    if div_max <= 0:
        logger.warning("Diversity history is identically zero; exploitation reported as 100%")
    return [explore_exploit_pct(float(div), div_max) for div in history]


def inertia_diversity(population: Any) -> float:
    positions = _as_positions(population)
    centroid = positions.mean(axis=0)
    return float(np.sqrt(np.sum((positions - centroid) ** 2)))


def summarize(samples: Sequence[float]) -> Dict[str, float]:
    values = _as_sample(samples)
    std = float(np.std(values, ddof=1)) if values.size > 1 else 0.0
    return {
        'best': float(np.min(values)),
        'median': float(np.median(values)),
        'worst': float(np.max(values)),
        'mean': float(np.mean(values)),
        'std': std,
    }
