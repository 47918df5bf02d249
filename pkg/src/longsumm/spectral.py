"""Spectral clustering of the sentence graph with length control.

The cluster count is the extended ratio times the number of kept sentences
(round half up, clamped).  Isolated nodes become singleton clusters; the
rest are embedded with the smallest eigenvectors of the normalized Laplacian
(cyclic Jacobi eigensolver) and grouped by seeded k-means.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .sentgraph import SentenceGraph


class EigenConvergenceError(RuntimeError):
    """Jacobi sweeps hit the iteration cap before the off-diagonal vanished."""


def num_clusters(n_kept: int, extended_ratio: float) -> int:
    """clamp(round_half_up(ratio * n_kept), 1, n_kept)."""
    if n_kept < 1:
        raise ValueError("n_kept must be at least 1")
    if not 0.0 < extended_ratio <= 1.0:
        raise ValueError("extended_ratio must lie in (0, 1]")
    k = math.floor(extended_ratio * n_kept + 0.5)
    return max(1, min(n_kept, k))


def normalized_laplacian(adjacency: np.ndarray) -> np.ndarray:
    """L = I - D^{-1/2} A D^{-1/2}; zero-degree rows become identity rows."""
    adj = np.asarray(adjacency, dtype=float)
    if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
        raise ValueError("adjacency must be square")
    if not np.allclose(adj, adj.T, atol=1e-12):
        raise ValueError("adjacency must be symmetric")
    if adj.min() < 0:
        raise ValueError("adjacency must be nonnegative")
    degrees = adj.sum(axis=1)
    inv_sqrt = np.where(degrees > 0, 1.0 / np.sqrt(np.where(degrees > 0, degrees, 1.0)), 0.0)
    lap = -adj * inv_sqrt[:, None] * inv_sqrt[None, :]
    np.fill_diagonal(lap, 1.0)
    return lap


def eig_sym(
    matrix: np.ndarray, max_sweeps: int = 100, rtol: float = 1e-12
) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Returns (eigenvalues ascending, eigenvectors as columns).  Each
    eigenvector's largest-magnitude component is made positive so the basis
    is reproducible.  Raises EigenConvergenceError after `max_sweeps`.
    """
    a = np.array(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    if not np.allclose(a, a.T, atol=1e-10):
        raise ValueError("matrix must be symmetric")
    n = a.shape[0]
    vecs = np.eye(n)
    if n == 1:
        return np.array([a[0, 0]]), vecs
    norm = np.linalg.norm(a)
    if norm == 0.0:
        return np.zeros(n), vecs

    def _off_norm(m: np.ndarray) -> float:
        off_part = m - np.diag(np.diag(m))
        return float(np.linalg.norm(off_part))

    converged = False
    for sweep in range(max_sweeps):
        off = _off_norm(a)
        if off <= rtol * norm:
            converged = True
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                # Flush entries that are negligible against both diagonals;
                # rotating them just re-injects rounding noise elsewhere.
                g = 100.0 * abs(apq)
                if (
                    sweep > 3
                    and abs(a[p, p]) + g == abs(a[p, p])
                    and abs(a[q, q]) + g == abs(a[q, q])
                ):
                    a[p, q] = a[q, p] = 0.0
                    continue
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                row_p, row_q = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                a[p, q] = a[q, p] = 0.0
                vec_p, vec_q = vecs[:, p].copy(), vecs[:, q].copy()
                vecs[:, p] = c * vec_p - s * vec_q
                vecs[:, q] = s * vec_p + c * vec_q
    else:
        converged = _off_norm(a) <= rtol * norm
    if not converged:
        raise EigenConvergenceError(f"no convergence in {max_sweeps} sweeps")

    values = np.diag(a).copy()
    order = np.argsort(values, kind="stable")
    values = values[order]
    vecs = vecs[:, order]
    for col in range(n):
        lead = np.argmax(np.abs(vecs[:, col]))
        if vecs[lead, col] < 0:
            vecs[:, col] = -vecs[:, col]
    return values, vecs


def _kmeans_pp_init(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """k-means++ seeding; degenerate all-zero distances fall back to the
    lowest-index unchosen point."""
    n = points.shape[0]
    chosen = [int(rng.integers(n))]
    d2 = np.sum((points - points[chosen[0]]) ** 2, axis=1)
    while len(chosen) < k:
        total = d2.sum()
        if total <= 0.0:
            candidates = [i for i in range(n) if i not in set(chosen)]
            chosen.append(candidates[0])
        else:
            r = rng.random() * total
            idx = int(np.searchsorted(np.cumsum(d2), r, side="right"))
            idx = min(idx, n - 1)
            chosen.append(idx)
        d2 = np.minimum(d2, np.sum((points - points[chosen[-1]]) ** 2, axis=1))
    return points[chosen].copy()


def kmeans(
    points: np.ndarray,
    k: int,
    rng: np.random.Generator,
    max_iter: int = 50,
    tol: float = 1e-6,
) -> tuple[np.ndarray, list[float]]:
    """Seeded k-means with empty-cluster repair.

    Returns (labels, objective trace).  The within-cluster squared-distance
    objective is checked to be non-increasing across iterations; a violation
    raises RuntimeError since it would mean a broken update step.
    """
    n = points.shape[0]
    if not 1 <= k <= n:
        raise ValueError("k must lie in [1, n]")
    centers = _kmeans_pp_init(points, k, rng)
    objectives: list[float] = []
    labels = np.zeros(n, dtype=int)
    for _ in range(max_iter):
        d2 = ((points[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        labels = np.argmin(d2, axis=1)
        # Revive empty clusters with the point farthest from its center.
        for cid in range(k):
            if np.any(labels == cid):
                continue
            spread = d2[np.arange(n), labels].copy()
            counts = np.bincount(labels, minlength=k)
            spread[counts[labels] <= 1] = -1.0
            thief = int(np.argmax(spread))
            labels[thief] = cid
            centers[cid] = points[thief]
            d2[:, cid] = ((points - centers[cid]) ** 2).sum(axis=1)
        objective = float(((points - centers[labels]) ** 2).sum())
        if objectives and objective > objectives[-1] + 1e-9:
            raise RuntimeError("k-means objective increased")
        objectives.append(objective)
        new_centers = centers.copy()
        for cid in range(k):
            members = points[labels == cid]
            if members.size:
                new_centers[cid] = members.mean(axis=0)
        shift = np.linalg.norm(new_centers - centers)
        scale = np.linalg.norm(centers) or 1.0
        centers = new_centers
        if shift / scale < tol:
            break
    return labels, objectives


@dataclass(frozen=True)
class ClusterSet:
    """Partition of kept sentences; ids are 0..k-1 ordered by the smallest
    member sentence index."""

    k: int
    assignment: dict[int, int]
    extended_ratio: float

    def __post_init__(self) -> None:
        ids = set(self.assignment.values())
        if ids != set(range(self.k)):
            raise ValueError("cluster ids must be exactly 0..k-1")

    def clusters(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.k)]
        for node, cid in sorted(self.assignment.items()):
            out[cid].append(node)
        return out


def spectral_cluster(
    graph: SentenceGraph, extended_ratio: float = 0.3, seed: int = 13
) -> ClusterSet:
    """Cluster the sentence graph into roughly ratio * |kept| groups.

    Isolated nodes are split off as singletons before the spectral step, so
    they cannot distort the Laplacian embedding; the remaining nodes get the
    leftover cluster budget (at least one cluster).  The final ids are
    relabeled by each cluster's smallest sentence index, which keeps the
    output stable under node relabeling.
    """
    nodes = list(graph.nodes)
    if not nodes:
        raise ValueError("graph has no nodes")
    n = len(nodes)
    target = num_clusters(n, extended_ratio)
    adjacency = graph.adjacency()
    degrees = adjacency.sum(axis=1)
    isolated = [nodes[i] for i in range(n) if degrees[i] == 0]
    connected = [i for i in range(n) if degrees[i] > 0]

    groups: list[list[int]] = [[node] for node in isolated]
    if connected:
        k_rest = min(len(connected), max(1, target - len(isolated)))
        if k_rest == len(connected):
            groups.extend([nodes[i]] for i in connected)
        else:
            sub = adjacency[np.ix_(connected, connected)]
            lap = normalized_laplacian(sub)
            _, vecs = eig_sym(lap)
            basis = vecs[:, :k_rest]
            row_norms = np.linalg.norm(basis, axis=1)
            basis = basis / np.where(row_norms > 0, row_norms, 1.0)[:, None]
            rng = np.random.default_rng(seed)
            labels, _ = kmeans(basis, k_rest, rng)
            for cid in range(k_rest):
                members = [nodes[connected[i]] for i in range(len(connected)) if labels[i] == cid]
                groups.append(members)

    groups = [sorted(g) for g in groups if g]
    groups.sort(key=lambda g: g[0])
    assignment = {node: cid for cid, group in enumerate(groups) for node in group}
    return ClusterSet(k=len(groups), assignment=assignment, extended_ratio=extended_ratio)
