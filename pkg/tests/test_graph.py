import pickle

import numpy as np
import pytest

from spread_config import GraphSpec, GraphKind
from spread_errors import InvalidSpecError, InvalidInputError
from spread_graph import (from_edges, generate, generate_ba, generate_ws, degree_stats, ba_seed_size,
                          attachment_counts, clustering_coefficient, is_connected, fit_degree_exponent,
                          to_networkx)


def ba(n, k=5.0, seed=0):
    return generate_ba(GraphSpec(kind=GraphKind.BA, n=n, target_avg_degree=k, seed=seed))


def ws(n, k, p, seed=0):
    return generate_ws(GraphSpec(kind=GraphKind.WS, n=n, target_avg_degree=k, rewire_prob=p, seed=seed))


def check_simple(g):
    edges = g.edges
    assert np.all(edges[:, 0] < edges[:, 1])
    assert len({tuple(e) for e in edges.tolist()}) == len(edges)
    assert g.degrees.sum() == 2 * g.edge_count


# == NetworkGraph ==

def test_path_degree_stats(path3):
    degrees, avg_degree, max_degree = degree_stats(path3)
    assert degrees.tolist() == [1, 2, 1]
    assert avg_degree == pytest.approx(4.0 / 3.0)
    assert max_degree == 2


def test_complete_graph_degree_stats():
    g = from_edges(4, [(u, v) for u in range(4) for v in range(u + 1, 4)])
    degrees, avg_degree, max_degree = degree_stats(g)
    assert degrees.tolist() == [3, 3, 3, 3]
    assert avg_degree == 3.0
    assert max_degree == 3


def test_from_edges_normalizes_order():
    g = from_edges(4, [(3, 2), (1, 0), (2, 0)])
    assert g.edges.tolist() == [[0, 1], [0, 2], [2, 3]]
    assert sorted(g.neighbors(0).tolist()) == [1, 2]


@pytest.mark.parametrize('edges', [[(0, 0)], [(0, 1), (1, 0)], [(0, 5)]])
def test_from_edges_rejects_invalid(edges):
    with pytest.raises(InvalidSpecError):
        from_edges(3, edges)


def test_graph_is_immutable(path3):
    with pytest.raises(AttributeError):
        path3.node_count = 5
    with pytest.raises(ValueError):
        path3.degrees[0] = 7
    with pytest.raises(ValueError):
        path3.edges[0, 0] = 2


def test_graph_pickles(path3):
    other = pickle.loads(pickle.dumps(path3))
    assert other.edges.tolist() == path3.edges.tolist()
    assert other.degrees.tolist() == path3.degrees.tolist()


def test_networkx_conversion(path3):
    G = to_networkx(path3)
    assert G.number_of_nodes() == 3
    assert sorted(G.edges()) == [(0, 1), (1, 2)]


# == BA ==

def test_attachment_counts_track_target():
    counts = attachment_counts(1000, 5)
    assert set(counts.tolist()) == {2, 3}
    assert counts.sum() == 2500


def test_ba_mean_degree_base_setup():
    g = ba(2000)
    check_simple(g)
    assert 4.8 <= g.avg_degree <= 5.2
    assert is_connected(g)


def test_ba_contains_seed_clique():
    m0 = ba_seed_size(5)
    g = ba(6)
    edges = {tuple(e) for e in g.edges.tolist()}
    assert m0 == 4
    assert all((u, v) in edges for u in range(m0) for v in range(u + 1, m0))
    # two arrivals with 2 and 3 edges
    assert g.edge_count == 6 + 2 + 3


def test_ba_too_small():
    with pytest.raises(InvalidSpecError):
        ba(3)


def test_ba_deterministic():
    assert np.array_equal(ba(500, seed=3).edges, ba(500, seed=3).edges)
    assert not np.array_equal(ba(500, seed=3).edges, ba(500, seed=4).edges)


@pytest.mark.parametrize('seed', range(20))
def test_ba_heavy_tail(seed):
    g = ba(1000, seed=seed)
    assert g.max_degree > 3 * g.avg_degree


@pytest.mark.slow
def test_ba_tail_exponent():
    g = ba(20000, seed=1)
    assert fit_degree_exponent(g, k_min=10) == pytest.approx(3.0, abs=0.5)


def test_tail_fit_needs_tail(path3):
    with pytest.raises(InvalidInputError):
        fit_degree_exponent(path3, k_min=10)


# == WS ==

def test_ws_ring_lattice():
    g = ws(2000, 4, 0.0)
    check_simple(g)
    assert set(g.degrees.tolist()) == {4}
    assert clustering_coefficient(g) == pytest.approx(0.5)


def test_ws_full_rewiring_keeps_edge_count():
    g = ws(2000, 4, 1.0)
    check_simple(g)
    assert g.edge_count == 4000
    assert np.var(g.degrees) > 0


def test_ws_small_world():
    g = ws(2000, 4, 0.1)
    check_simple(g)
    assert g.avg_degree == 4.0
    assert clustering_coefficient(g) < 0.5


@pytest.mark.parametrize('k', [3, 2000])
def test_ws_invalid_degree(k):
    with pytest.raises(InvalidSpecError):
        GraphSpec(kind='ws', n=2000, target_avg_degree=k)


def test_generate_dispatch():
    g = generate(GraphSpec(kind='ws', n=100, target_avg_degree=4, rewire_prob=0.0))
    assert g.edge_count == 200
