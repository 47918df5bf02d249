"""Sentence ranking and content selection.

PageRank over the pairwise cosine-similarity matrix, a cutoff ratio that
drops the lowest-ranked fraction, and greedy maximal-marginal-relevance
selection as the query-biased alternative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .embedding import EmbeddingMatrix, cosine


@dataclass(frozen=True)
class SimilarityMatrix:
    """Symmetric nonnegative sentence-similarity matrix with zero diagonal."""

    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        if vals.ndim != 2 or vals.shape[0] != vals.shape[1]:
            raise ValueError("similarity matrix must be square")
        if not np.allclose(vals, vals.T, atol=1e-12):
            raise ValueError("similarity matrix must be symmetric")
        if np.any(np.diag(vals) != 0):
            raise ValueError("similarity diagonal must be zero")
        if vals.min() < 0 or vals.max() > 1 + 1e-12:
            raise ValueError("similarities must lie in [0, 1]")

    @property
    def n(self) -> int:
        return self.values.shape[0]


def similarity_matrix(embeddings: EmbeddingMatrix) -> SimilarityMatrix:
    """Pairwise cosine similarities, negatives clamped to 0, diagonal zeroed."""
    vectors = embeddings.vectors
    norms = np.linalg.norm(vectors, axis=1)
    safe = np.where(norms > 0, norms, 1.0)
    unit = vectors / safe[:, None]
    sims = unit @ unit.T
    sims = np.clip(sims, 0.0, 1.0)
    np.fill_diagonal(sims, 0.0)
    sims = (sims + sims.T) / 2.0
    return SimilarityMatrix(values=sims)


@dataclass(frozen=True)
class PageRankResult:
    """Stationary scores plus convergence bookkeeping."""

    scores: np.ndarray
    converged: bool
    iterations: int


def pagerank(
    matrix: SimilarityMatrix | np.ndarray,
    damping: float = 0.85,
    tol: float = 1e-6,
    max_iter: int = 100,
) -> PageRankResult:
    """Damped row-stochastic iteration on the similarity matrix.

    Rows with zero total similarity are treated as uniform (dangling rule).
    If the L1 change never falls below `tol`, the last iterate is returned
    with converged=False.
    """
    weights = matrix.values if isinstance(matrix, SimilarityMatrix) else np.asarray(matrix, float)
    n = weights.shape[0]
    if n == 0:
        raise ValueError("empty similarity matrix")
    if n == 1:
        return PageRankResult(scores=np.array([1.0]), converged=True, iterations=0)
    row_sums = weights.sum(axis=1)
    transition = np.where(
        row_sums[:, None] > 0,
        weights / np.where(row_sums[:, None] > 0, row_sums[:, None], 1.0),
        1.0 / n,
    )
    scores = np.full(n, 1.0 / n)
    for iteration in range(1, max_iter + 1):
        updated = (1.0 - damping) / n + damping * (transition.T @ scores)
        if np.abs(updated - scores).sum() < tol:
            return PageRankResult(scores=updated, converged=True, iterations=iteration)
        scores = updated
    return PageRankResult(scores=scores, converged=False, iterations=max_iter)


@dataclass(frozen=True)
class RankResult:
    """Scores plus the kept indices after cutoff removal."""

    scores: np.ndarray
    kept: tuple[int, ...]
    cutoff_ratio: float

    def __post_init__(self) -> None:
        scores = np.asarray(self.scores, dtype=float)
        object.__setattr__(self, "scores", scores)
        total = float(scores.sum())
        if abs(total - 1.0) > 1e-6:
            raise ValueError(f"scores must sum to 1 (got {total})")
        n = scores.size
        expected = n - math.floor(self.cutoff_ratio * n)
        if len(self.kept) != expected:
            raise ValueError(f"kept {len(self.kept)} indices, expected {expected}")


def select_content(
    scores: Sequence[float] | np.ndarray, cutoff_ratio: float
) -> RankResult:
    """Drop the floor(ratio*n) lowest-scoring sentences.

    Ties keep the lower index (the higher-indexed duplicate is removed
    first).  With ratio in [0, 1) at least one sentence always survives.
    """
    if not 0.0 <= cutoff_ratio < 1.0:
        raise ValueError("cutoff_ratio must lie in [0, 1)")
    scores = np.asarray(scores, dtype=float)
    n = scores.size
    n_remove = math.floor(cutoff_ratio * n)
    # Highest score first; equal scores ordered by lower index.
    order = sorted(range(n), key=lambda i: (-scores[i], i))
    kept = tuple(sorted(order[: n - n_remove]))
    return RankResult(scores=scores, kept=kept, cutoff_ratio=cutoff_ratio)


@dataclass(frozen=True)
class MmrConfig:
    """Trade-off weight, word budget, and query vector for MMR selection."""

    lambda_: float
    budget_words: int
    query: np.ndarray

    def __post_init__(self) -> None:
        if not 0.0 <= self.lambda_ <= 1.0:
            raise ValueError("lambda must lie in [0, 1]")
        if self.budget_words <= 0:
            raise ValueError("budget_words must be positive")
        object.__setattr__(self, "query", np.asarray(self.query, dtype=float))


def mmr_select(
    embeddings: EmbeddingMatrix,
    config: MmrConfig,
    word_counts: Sequence[int] | None = None,
) -> list[int]:
    """Greedy MMR: repeatedly take argmax of
    lambda*sim(S_i, Q) - (1-lambda)*max_{j in selected} sim(S_i, S_j).

    The diversity term is 0 while nothing is selected; ties go to the lower
    index.  With `word_counts` given, selection stops as soon as adding the
    next pick would exceed the word budget (the first pick always goes in).
    Without word counts the budget is ignored and all sentences are ordered.
    """
    vectors = embeddings.vectors
    n = vectors.shape[0]
    if config.query.shape != (embeddings.dim,):
        raise ValueError("query dimension does not match embeddings")
    relevance = np.array([cosine(vectors[i], config.query) for i in range(n)])
    pairwise = np.array(
        [[cosine(vectors[i], vectors[j]) for j in range(n)] for i in range(n)]
    )
    lam = config.lambda_
    selected: list[int] = []
    remaining = list(range(n))
    total_words = 0
    while remaining:
        best_idx = None
        best_score = -np.inf
        for i in remaining:
            diversity = max((pairwise[i][j] for j in selected), default=0.0)
            score = lam * relevance[i] - (1.0 - lam) * diversity
            if score > best_score:
                best_score = score
                best_idx = i
        assert best_idx is not None
        if word_counts is not None and selected:
            if total_words + word_counts[best_idx] > config.budget_words:
                break
        selected.append(best_idx)
        remaining.remove(best_idx)
        if word_counts is not None:
            total_words += word_counts[best_idx]
    return selected
