import numpy as np
import pytest

from longsumm.sentgraph import Edge, SentenceGraph
from longsumm.spectral import (
    ClusterSet,
    EigenConvergenceError,
    eig_sym,
    kmeans,
    normalized_laplacian,
    num_clusters,
    spectral_cluster,
)


def clique_graph(sizes, weight=1.0):
    """Disjoint cliques over consecutive node ranges."""
    edges = []
    base = 0
    for size in sizes:
        for i in range(size):
            for j in range(i + 1, size):
                edges.append(
                    Edge(i=base + i, j=base + j, weight=weight,
                         reasons=frozenset({"similarity"}))
                )
        base += size
    return SentenceGraph(nodes=tuple(range(base)), edges=tuple(edges))


def random_graph(rng, n, p=0.4):
    """Seeded random weighted graph; returns (graph, component count)."""
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                edges.append(
                    Edge(i=i, j=j, weight=float(rng.uniform(0.2, 1.0)),
                         reasons=frozenset({"similarity"}))
                )
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in edges:
        parent[find(e.i)] = find(e.j)
    components = len({find(i) for i in range(n)})
    return SentenceGraph(nodes=tuple(range(n)), edges=tuple(edges)), components


class TestNumClusters:
    def test_paper_ratio(self):
        assert num_clusters(100, 0.3) == 30

    def test_lower_clamp(self):
        assert num_clusters(1, 0.3) == 1

    def test_plain_case(self):
        assert num_clusters(10, 0.3) == 3

    def test_round_half_up(self):
        assert num_clusters(5, 0.5) == 3
        assert num_clusters(5, 0.3) == 2

    def test_upper_clamp(self):
        assert num_clusters(3, 1.0) == 3

    def test_invalid_ratio(self):
        with pytest.raises(ValueError):
            num_clusters(10, 0.0)


class TestNormalizedLaplacian:
    def test_empty_graph_gives_identity(self):
        assert np.array_equal(normalized_laplacian(np.zeros((3, 3))), np.eye(3))

    def test_single_edge(self):
        lap = normalized_laplacian(np.array([[0.0, 1.0], [1.0, 0.0]]))
        assert np.allclose(lap, [[1.0, -1.0], [-1.0, 1.0]])
        values, _ = eig_sym(lap)
        assert values == pytest.approx([0.0, 2.0], abs=1e-12)

    def test_two_disconnected_edges_zero_multiplicity(self):
        adj = np.zeros((4, 4))
        adj[0, 1] = adj[1, 0] = 1.0
        adj[2, 3] = adj[3, 2] = 1.0
        values, _ = eig_sym(normalized_laplacian(adj))
        assert np.sum(np.abs(values) < 1e-10) == 2

    def test_eigenvalues_in_zero_two(self):
        rng = np.random.default_rng(41)
        raw = rng.uniform(size=(8, 8))
        adj = (raw + raw.T) / 2
        np.fill_diagonal(adj, 0.0)
        values, _ = eig_sym(normalized_laplacian(adj))
        assert values.min() > -1e-10
        assert values.max() < 2 + 1e-10


class TestEigSym:
    def test_identity(self):
        values, _ = eig_sym(np.eye(3))
        assert values == pytest.approx([1.0, 1.0, 1.0])

    def test_diagonal(self):
        values, _ = eig_sym(np.diag([3.0, 1.0, 2.0]))
        assert values == pytest.approx([1.0, 2.0, 3.0])

    def test_closed_form_2x2(self):
        values, _ = eig_sym(np.array([[2.0, 1.0], [1.0, 2.0]]))
        assert values == pytest.approx([1.0, 3.0])

    def test_residual_and_orthonormality(self):
        rng = np.random.default_rng(43)
        for _ in range(25):
            n = int(rng.integers(2, 12))
            raw = rng.normal(size=(n, n))
            sym = (raw + raw.T) / 2
            values, vectors = eig_sym(sym)
            norm = np.linalg.norm(sym)
            assert np.linalg.norm(sym @ vectors - vectors * values) <= 1e-8 * max(norm, 1.0)
            assert np.allclose(vectors.T @ vectors, np.eye(n), atol=1e-8)
            assert np.all(np.diff(values) >= -1e-12)

    def test_rejects_asymmetric(self):
        with pytest.raises(ValueError):
            eig_sym(np.array([[1.0, 2.0], [0.0, 1.0]]))

    def test_convergence_cap(self):
        rng = np.random.default_rng(44)
        raw = rng.normal(size=(6, 6))
        sym = (raw + raw.T) / 2
        with pytest.raises(EigenConvergenceError):
            eig_sym(sym, max_sweeps=0)


class TestKMeans:
    def test_objective_non_increasing(self):
        rng = np.random.default_rng(45)
        points = rng.normal(size=(40, 3))
        _, objectives = kmeans(points, 4, np.random.default_rng(0))
        assert all(b <= a + 1e-9 for a, b in zip(objectives, objectives[1:]))

    def test_deterministic_given_seed(self):
        rng = np.random.default_rng(46)
        points = rng.normal(size=(30, 2))
        labels_a, _ = kmeans(points, 3, np.random.default_rng(5))
        labels_b, _ = kmeans(points, 3, np.random.default_rng(5))
        assert np.array_equal(labels_a, labels_b)

    def test_k_equals_n(self):
        points = np.arange(8.0).reshape(4, 2)
        labels, _ = kmeans(points, 4, np.random.default_rng(1))
        assert len(set(labels.tolist())) == 4

    def test_separated_blobs_recovered(self):
        rng = np.random.default_rng(47)
        blob_a = rng.normal(0.0, 0.05, size=(10, 2))
        blob_b = rng.normal(5.0, 0.05, size=(10, 2))
        points = np.vstack([blob_a, blob_b])
        labels, _ = kmeans(points, 2, np.random.default_rng(2))
        assert len(set(labels[:10].tolist())) == 1
        assert len(set(labels[10:].tolist())) == 1
        assert labels[0] != labels[10]


class TestSpectralCluster:
    def test_two_cliques_any_seed(self):
        graph = clique_graph([5, 5])
        for seed in range(20):
            clusters = spectral_cluster(graph, extended_ratio=0.2, seed=seed)
            assert clusters.k == 2
            groups = sorted(map(sorted, clusters.clusters()))
            assert groups == [[0, 1, 2, 3, 4], [5, 6, 7, 8, 9]]

    def test_single_node(self):
        graph = SentenceGraph(nodes=(0,), edges=())
        clusters = spectral_cluster(graph, extended_ratio=0.3, seed=1)
        assert clusters.k == 1
        assert clusters.assignment == {0: 0}

    def test_ratio_one_gives_singletons(self):
        graph = clique_graph([4])
        clusters = spectral_cluster(graph, extended_ratio=1.0, seed=3)
        assert clusters.k == 4
        assert all(len(g) == 1 for g in clusters.clusters())

    def test_isolated_nodes_become_singletons(self):
        edges = (Edge(i=0, j=1, weight=1.0, reasons=frozenset({"similarity"})),)
        graph = SentenceGraph(nodes=(0, 1, 2, 3), edges=edges)
        clusters = spectral_cluster(graph, extended_ratio=0.75, seed=7)
        singleton_members = {g[0] for g in clusters.clusters() if len(g) == 1}
        assert {2, 3} <= singleton_members

    def test_determinism(self):
        graph = clique_graph([4, 3, 5])
        a = spectral_cluster(graph, extended_ratio=0.4, seed=9)
        b = spectral_cluster(graph, extended_ratio=0.4, seed=9)
        assert a.assignment == b.assignment

    def test_permutation_equivariance_on_cliques(self):
        graph = clique_graph([5, 5])
        base = spectral_cluster(graph, extended_ratio=0.2, seed=11)
        # Relabel nodes with a permutation and rebuild the same structure.
        rng = np.random.default_rng(12)
        perm = {old: int(new) for old, new in enumerate(rng.permutation(10))}
        edges = tuple(
            Edge(
                i=min(perm[e.i], perm[e.j]),
                j=max(perm[e.i], perm[e.j]),
                weight=e.weight,
                reasons=e.reasons,
            )
            for e in graph.edges
        )
        permuted = SentenceGraph(nodes=tuple(range(10)), edges=edges)
        mapped = spectral_cluster(permuted, extended_ratio=0.2, seed=11)
        base_groups = sorted(sorted(perm[i] for i in g) for g in base.clusters())
        assert base_groups == sorted(map(sorted, mapped.clusters()))

    def test_zero_eigenvalues_count_components(self):
        rng = np.random.default_rng(48)
        for _ in range(20):
            n = int(rng.integers(4, 12))
            graph, components = random_graph(rng, n, p=0.3)
            adj = graph.adjacency()
            degrees = adj.sum(axis=1)
            connected = degrees > 0
            isolated = int(np.sum(~connected))
            sub = adj[np.ix_(connected.nonzero()[0], connected.nonzero()[0])]
            if sub.size:
                values, _ = eig_sym(normalized_laplacian(sub))
                zero_count = int(np.sum(np.abs(values) < 1e-8)) + isolated
            else:
                zero_count = isolated
            assert zero_count == components


def test_cluster_set_validates_ids():
    with pytest.raises(ValueError):
        ClusterSet(k=2, assignment={0: 0, 1: 2}, extended_ratio=0.3)
