'''Spread_Graph

synthetic social networks for the spreading simulator

  - BA (Barabasi-Albert) scale-free networks grown by preferential attachment
  - WS (Watts-Strogatz) small world networks (ring lattice + random rewiring)

Networks are stored as an immutable NetworkGraph: dense integer node ids 0..N-1,
the sorted edge list and a symmetric CSR adjacency matrix A = (a_pq) (scipy.sparse),
from which the degree statistics k_p, <k> and k_max are cached.

Example:

>>> g = from_edges(3, [(0, 1), (1, 2)])
>>> degrees, avg_degree, max_degree = degree_stats(g)
>>> degrees.tolist(), round(avg_degree, 4), max_degree
([1, 2, 1], 1.3333, 2)
'''

import math
import logging

import numpy as np
import networkx as nx
from scipy import sparse
from scipy.sparse.csgraph import connected_components

from spread_config import GraphKind
from spread_errors import InvalidSpecError, InvalidInputError

log = logging.getLogger(__name__)


class NetworkGraph(object):
    '''undirected simple graph with cached degree statistics (read-only after construction)'''

    __slots__ = ('node_count', 'edges', 'adjacency', 'degrees', 'avg_degree', 'max_degree',
                 'edge_src')

    def __init__(self, node_count, edges):
        # edges: (E,2) int array, u < v, unique, sorted lexicographically
        adjacency = sparse.csr_matrix(
            (np.ones(2 * len(edges), dtype=np.int8),
             (np.concatenate((edges[:, 0], edges[:, 1])), np.concatenate((edges[:, 1], edges[:, 0])))),
            shape=(node_count, node_count))
        adjacency.sort_indices()

        degrees = np.diff(adjacency.indptr).astype(np.int64)

        for arr in (edges, degrees):
            arr.flags.writeable = False

        # source node of every entry in adjacency.indices (CSR row index per stored neighbor)
        edge_src = np.repeat(np.arange(node_count, dtype=np.int64), degrees)
        edge_src.flags.writeable = False

        object.__setattr__(self, 'node_count', int(node_count))
        object.__setattr__(self, 'edges', edges)
        object.__setattr__(self, 'adjacency', adjacency)
        object.__setattr__(self, 'degrees', degrees)
        object.__setattr__(self, 'avg_degree', float(degrees.sum()) / node_count)
        object.__setattr__(self, 'max_degree', int(degrees.max()) if node_count > 0 else 0)
        object.__setattr__(self, 'edge_src', edge_src)

    def __setattr__(self, name, value):
        raise AttributeError("NetworkGraph is immutable")

    def __reduce__(self):
        # rebuilt from the edge list when sent to worker processes
        return (NetworkGraph, (self.node_count, np.array(self.edges)))

    @property
    def edge_count(self):
        return len(self.edges)

    @property
    def indptr(self):
        return self.adjacency.indptr

    @property
    def indices(self):
        return self.adjacency.indices

    def neighbors(self, p):
        return self.adjacency.indices[self.adjacency.indptr[p]:self.adjacency.indptr[p + 1]]

    def __repr__(self):
        return "NetworkGraph(N=%d, E=%d, <k>=%.4f, k_max=%d)" % (
            self.node_count, self.edge_count, self.avg_degree, self.max_degree)


def from_edges(n, edges):
    '''build a NetworkGraph on nodes 0..n-1 from an iterable of (u, v) pairs

    pairs are treated as unordered; self-loops and duplicate edges are rejected
    '''
    if n < 1:
        raise InvalidSpecError("graph needs at least one node, got n=%r" % (n,), value=n)

    edges = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
    if edges.size == 0:
        edges = np.empty((0, 2), dtype=np.int64)
    if edges.ndim != 2 or edges.shape[1] != 2:
        raise InvalidSpecError("edges must be a list of node pairs", value=edges.shape)
    if edges.size and (edges.min() < 0 or edges.max() >= n):
        raise InvalidSpecError("edge endpoints must lie in 0..%d" % (n - 1))

    edges = np.sort(edges, axis=1)
    if np.any(edges[:, 0] == edges[:, 1]):
        raise InvalidSpecError("self-loops are not allowed")

    order = np.lexsort((edges[:, 1], edges[:, 0]))
    edges = np.ascontiguousarray(edges[order])
    if len(edges) > 1 and np.any(np.all(edges[1:] == edges[:-1], axis=1)):
        raise InvalidSpecError("duplicate edges are not allowed")

    return NetworkGraph(n, edges)


# == GENERATORS ==

def ba_seed_size(target_avg_degree):
    '''size m0 of the complete seed graph: ceil(<k>/2) + 1'''
    return int(math.ceil(target_avg_degree / 2.0)) + 1


def attachment_counts(n_arrivals, target_avg_degree):
    '''number of edges m_j added by each arriving node

    m_j alternates between floor(<k>/2) and ceil(<k>/2) so that the running total
    tracks j * <k>/2, e.g. <k> = 5 gives 2, 3, 2, 3, ...

    >>> attachment_counts(6, 5).tolist()
    [2, 3, 2, 3, 2, 3]
    >>> attachment_counts(3, 4).tolist()
    [2, 2, 2]
    '''
    half = target_avg_degree / 2.0
    j = np.arange(n_arrivals + 1)
    cumulative = np.floor(j * half + 1e-9).astype(np.int64)
    return np.diff(cumulative)


def generate_ba(spec):
    '''Barabasi-Albert scale-free network

    starts from the complete graph on m0 = ceil(<k>/2) + 1 nodes; every arriving node connects to
    m_j distinct existing nodes chosen with probability proportional to their current degree
    (see attachment_counts for m_j). Deterministic for a given spec (numpy Generator seeded with spec.seed).
    '''
    if spec.kind is not GraphKind.BA:
        raise InvalidSpecError("generate_ba needs a BA spec, got %s" % spec.kind.value, value=spec.kind)
    if spec.target_avg_degree < 2:
        raise InvalidSpecError("BA average degree must be at least 2 to keep the network connected, got %g"
                               % spec.target_avg_degree, value=spec.target_avg_degree)

    m0 = ba_seed_size(spec.target_avg_degree)
    if spec.n < m0:
        raise InvalidSpecError("n=%d too small for the BA seed clique of %d nodes" % (spec.n, m0), value=spec.n)

    rng = np.random.default_rng(spec.seed)
    counts = attachment_counts(spec.n - m0, spec.target_avg_degree)

    n_seed_edges = m0 * (m0 - 1) // 2
    n_edges = n_seed_edges + int(counts.sum())
    edges = np.empty((n_edges, 2), dtype=np.int64)

    # every node appears once per incident edge: uniform sampling from this list
    # is sampling proportional to degree
    repeated = np.empty(2 * n_edges, dtype=np.int64)

    e = 0
    for u in range(m0):
        for v in range(u + 1, m0):
            edges[e] = (u, v)
            repeated[2 * e] = u
            repeated[2 * e + 1] = v
            e += 1
    size = 2 * e

    for j, m in enumerate(counts):
        new = m0 + j
        targets = []
        while len(targets) < m:
            for t in repeated[rng.integers(0, size, m - len(targets))]:
                t = int(t)
                if t not in targets:
                    targets.append(t)
                    if len(targets) == m:
                        break
        for t in targets:
            edges[e] = (t, new)
            repeated[size] = t
            repeated[size + 1] = new
            size += 2
            e += 1

    g = from_edges(spec.n, edges)
    log.debug("generated BA network: %r", g)
    return g


def generate_ws(spec):
    '''Watts-Strogatz small world network

    ring lattice where every node is joined to its k/2 nearest neighbors on each side; each
    lattice edge is rewired with probability rewire_prob to a uniformly chosen node, redrawing
    the new endpoint on self-loop or duplicate (networkx.watts_strogatz_graph), so the edge count
    stays exactly n*k/2.
    '''
    if spec.kind is not GraphKind.WS:
        raise InvalidSpecError("generate_ws needs a WS spec, got %s" % spec.kind.value, value=spec.kind)
    k = int(spec.target_avg_degree)
    if k != spec.target_avg_degree or k % 2 != 0 or k >= spec.n:
        raise InvalidSpecError("WS degree k must be even and smaller than n, got k=%r, n=%d"
                               % (spec.target_avg_degree, spec.n), value=spec.target_avg_degree)

    G = nx.watts_strogatz_graph(spec.n, k, spec.rewire_prob, seed=int(spec.seed))
    g = from_edges(spec.n, np.array(list(G.edges()), dtype=np.int64).reshape(-1, 2))
    log.debug("generated WS network: %r", g)
    return g


def generate(spec):
    '''network for a GraphSpec of either kind'''
    if spec.kind is GraphKind.BA:
        return generate_ba(spec)
    return generate_ws(spec)


# == STATISTICS ==

def degree_stats(g):
    '''(degrees k_p, average degree <k>, maximum degree k_max) of a network'''
    if g.node_count < 1:
        raise InvalidInputError("degree statistics of an empty graph")
    return g.degrees.copy(), g.avg_degree, g.max_degree


def to_networkx(g):
    G = nx.Graph()
    G.add_nodes_from(range(g.node_count))
    G.add_edges_from(g.edges.tolist())
    return G


def clustering_coefficient(g):
    '''mean local clustering coefficient'''
    return nx.average_clustering(to_networkx(g))


def is_connected(g):
    n_components, _ = connected_components(g.adjacency, directed=False)
    return n_components == 1


def fit_degree_exponent(g, k_min=10):
    '''power-law tail exponent gamma of the degree distribution

    least-squares line through the log-log complementary cumulative distribution
    P(K >= k) ~ k^(1 - gamma) over the distinct degrees k >= k_min
    '''
    degrees = np.sort(g.degrees)
    ks = np.unique(degrees[degrees >= k_min])
    if len(ks) < 2:
        raise InvalidInputError("need at least two distinct degrees >= %d for a tail fit" % k_min, value=len(ks))

    ccdf = (len(degrees) - np.searchsorted(degrees, ks, side='left')) / float(len(degrees))
    slope, _ = np.polyfit(np.log(ks), np.log(ccdf), 1)
    return 1.0 - slope
