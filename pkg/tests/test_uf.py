import itertools

import networkx as nx
import numpy as np
import pytest

from snowflake_qec.baseline import BatchWindow, uf_decode
from snowflake_qec.graph import build_template

BACKENDS = ("numba", "numpy")


def window(family, d, c, b):
    return BatchWindow.build(build_template(family, d), c, b)


def residual_syndrome(g, defects, corr):
    """Defects left after applying ``corr``; boundary nodes are ignored."""
    hits = np.zeros(g.n_nodes, dtype=np.int64)
    np.add.at(hits, g.edge_u[corr], 1)
    np.add.at(hits, g.edge_v[corr], 1)
    return (defects ^ (hits % 2 == 1)) & g.is_detector


def brute_force_weight(g, defects):
    """Smallest number of edges annihilating ``defects`` (exhaustive search)."""
    for w in range(g.n_edges + 1):
        for subset in itertools.combinations(range(g.n_edges), w):
            corr = np.zeros(g.n_edges, dtype=bool)
            corr[list(subset)] = True
            if not residual_syndrome(g, defects, corr).any():
                return w
    raise AssertionError("no correction exists")


def contracted_distances(g):
    """All-pairs hop distance with every boundary node merged into ``-1``."""
    G = nx.Graph()
    G.add_nodes_from(np.flatnonzero(g.is_detector).tolist())
    for u, v in zip(g.edge_u.tolist(), g.edge_v.tolist()):
        G.add_edge(-1 if g.is_boundary[u] else u, -1 if g.is_boundary[v] else v)
    return dict(nx.all_pairs_shortest_path_length(G))


@pytest.mark.parametrize("backend", BACKENDS)
def test_adjacent_pair_uses_connecting_edge(backend):
    w = window("repetition", 5, 2, 2)
    g = w.graph
    a, b = g.id_of[(2, 0, 0)], g.id_of[(3, 0, 0)]
    w.defects[[a, b]] = True
    corr = uf_decode(w, backend)
    assert np.flatnonzero(corr).tolist() == [g.edge_between(a, b)]


@pytest.mark.parametrize("backend", BACKENDS)
def test_defect_next_to_boundary(backend):
    w = window("repetition", 5, 2, 2)
    g = w.graph
    a = g.id_of[(1, 0, 0)]
    w.defects[a] = True
    corr = uf_decode(w, backend)
    assert np.flatnonzero(corr).tolist() == [g.edge_between(g.id_of[(0, 0, 0)], a)]


@pytest.mark.parametrize("backend", BACKENDS)
def test_empty_syndrome(backend):
    w = window("surface-circuit", 3, 3, 3)
    assert not uf_decode(w, backend).any()


def test_boundary_defect_rejected():
    w = window("repetition", 3, 1, 1)
    w.defects[0] = True
    with pytest.raises(ValueError):
        uf_decode(w)


@pytest.mark.parametrize("c,b", [(1, 0), (1, 1), (2, 1)])
def test_two_defects_exhaustive_minimum(c, b):
    w = window("repetition", 3, c, b)
    g = w.graph
    det = np.flatnonzero(g.is_detector)
    for pair in itertools.combinations(det, 2):
        w.defects[:] = False
        w.defects[list(pair)] = True
        expected = brute_force_weight(g, w.defects)
        for be in BACKENDS:
            assert uf_decode(w, be).sum() == expected


@pytest.mark.parametrize("family,d", [("repetition", 5), ("surface-phenom", 3), ("surface-circuit", 3)])
def test_two_defects_distance_minimum(family, d):
    w = window(family, d, d, d)
    g = w.graph
    dist = contracted_distances(g)
    det = np.flatnonzero(g.is_detector)
    rng = np.random.default_rng(17)
    pairs = [tuple(rng.choice(det, 2, replace=False)) for _ in range(150)]
    for a, b in pairs:
        w.defects[:] = False
        w.defects[[a, b]] = True
        best = min(dist[a][b], dist[a][-1] + dist[b][-1])
        assert uf_decode(w).sum() == best


@pytest.mark.parametrize("family", ["repetition", "surface-phenom", "surface-circuit"])
def test_random_syndromes_annihilated_and_backends_agree(family):
    w = window(family, 5, 5, 5)
    g = w.graph
    rng = np.random.default_rng(3)
    for density in (0.01, 0.05, 0.2):
        for _ in range(10):
            w.defects[:] = (rng.random(g.n_nodes) < density) & g.is_detector
            a = uf_decode(w, "numba")
            b = uf_decode(w, "numpy")
            assert np.array_equal(a, b)
            assert not residual_syndrome(g, w.defects, a).any()
