"""Edge-drop views and symmetric degree normalization."""

import numpy as np
import pytest
import scipy.sparse as sp

from textcl import ConfigError, DataError, build_graph, drop_edges, normalize_adjacency

from conftest import make_corpus


def toy_graph():
    corpus, vocab = make_corpus(
        ["cat dog bird", "cat fish", "dog bird fish", "cat dog"]
    )
    return build_graph(corpus, vocab, window_size=3)


def random_symmetric(rng, n, density=0.3):
    upper = sp.random_array(
        (n, n), density=density, random_state=rng, data_sampler=rng.random
    )
    upper = sp.triu(upper, k=1)
    return sp.csr_array(upper + upper.T + sp.eye_array(n))


class TestDropEdges:
    def test_p_zero_is_identity(self):
        graph = toy_graph()
        view = drop_edges(graph, 0.0, seed=3)
        assert abs(view.adjacency - graph.adjacency).max() == 0

    def test_p_one_keeps_only_self_loops(self):
        graph = toy_graph()
        view = drop_edges(graph, 1.0, seed=3)
        dense = view.adjacency.toarray()
        np.testing.assert_array_equal(dense, np.eye(graph.n_nodes))

    def test_same_seed_same_view(self):
        graph = toy_graph()
        a = drop_edges(graph, 0.5, seed=11).adjacency
        b = drop_edges(graph, 0.5, seed=11).adjacency
        assert abs(a - b).max() == 0

    def test_different_seeds_differ(self):
        rng = np.random.default_rng(5)
        adj = random_symmetric(rng, 40, density=0.4)
        views = [drop_edges(adj, 0.5, seed=s).adjacency.nnz for s in range(8)]
        assert len(set(views)) > 1

    def test_drop_rate_tracks_probability(self):
        # ~10000 undirected edges at p=0.5: survivors within 4 sigma.
        rng = np.random.default_rng(0)
        n = 200
        adj = random_symmetric(rng, n, density=0.5)
        n_edges = sp.triu(adj, k=1).nnz
        view = drop_edges(adj, 0.5, seed=1)
        survivors = sp.triu(view.adjacency, k=1).nnz
        sigma = np.sqrt(n_edges * 0.25)
        assert abs(survivors - n_edges / 2) < 4 * sigma

    def test_surviving_weights_unchanged(self):
        graph = toy_graph()
        view = drop_edges(graph, 0.4, seed=7)
        orig = graph.adjacency.toarray()
        dropped = view.adjacency.toarray()
        kept = dropped != 0
        np.testing.assert_array_equal(dropped[kept], orig[kept])

    def test_view_is_symmetric_with_unit_diagonal(self):
        rng = np.random.default_rng(9)
        adj = random_symmetric(rng, 30)
        view = drop_edges(adj, 0.3, seed=2).adjacency
        assert abs(view - view.T).max() == 0
        np.testing.assert_array_equal(view.diagonal(), np.ones(30))

    @pytest.mark.parametrize("p", [-0.1, 1.5, np.nan])
    def test_bad_probability(self, p):
        with pytest.raises(ConfigError):
            drop_edges(toy_graph(), p, seed=0)


class TestNormalize:
    def test_single_self_loop(self):
        norm = normalize_adjacency(sp.csr_array(np.array([[1.0]])))
        np.testing.assert_array_equal(norm.toarray(), [[1.0]])

    def test_two_node_clique(self):
        a = sp.csr_array(np.array([[1.0, 1.0], [1.0, 1.0]]))
        norm = normalize_adjacency(a).toarray()
        np.testing.assert_allclose(norm, np.full((2, 2), 0.5), atol=1e-15)

    def test_hand_computed_path(self):
        # A = [[1,2],[2,1]]: deg = (3,3), every entry / 3.
        a = sp.csr_array(np.array([[1.0, 2.0], [2.0, 1.0]]))
        norm = normalize_adjacency(a).toarray()
        np.testing.assert_allclose(norm, np.array([[1, 2], [2, 1]]) / 3.0, atol=1e-15)

    def test_symmetry_and_range_preserved(self):
        rng = np.random.default_rng(13)
        for _ in range(10):
            adj = random_symmetric(rng, int(rng.integers(2, 25)))
            norm = normalize_adjacency(adj)
            np.testing.assert_allclose(
                norm.toarray(), norm.T.toarray(), atol=1e-15
            )
            vals = norm.toarray()
            assert np.all(vals >= 0) and np.all(vals <= 1 + 1e-12)

    def test_total_mass_bounded_by_n(self):
        # AM-GM: sum_ij A_ij / sqrt(d_i d_j) <= sum_i (1/d_i) sum_j A_ij = n.
        rng = np.random.default_rng(21)
        adj = random_symmetric(rng, 20)
        norm = normalize_adjacency(adj)
        assert norm.sum() <= 20 + 1e-9

    def test_zero_degree_is_error(self):
        a = sp.csr_array(np.array([[1.0, 0.0], [0.0, 0.0]]))
        with pytest.raises(DataError, match="node 1"):
            normalize_adjacency(a)

    def test_idempotent_on_views(self):
        graph = toy_graph()
        view = drop_edges(graph, 0.3, seed=4)
        norm = normalize_adjacency(view.adjacency)
        assert np.all(np.isfinite(norm.toarray()))
        assert abs(norm - norm.T).max() < 1e-15
