from collections import deque

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from snowflake_qec.accounting import (
    CorrectionLedger,
    LogicalCounter,
    ResidualHistory,
    block_of,
    count_logical_bitflips,
    crossing_edges,
    cut_parity,
    fit_scaling,
    logical_error_rate,
    residual_components,
    residual_layers,
    timesteps_per_d_rounds,
)
from snowflake_qec.baseline import BatchWindow, uf_decode
from snowflake_qec.graph import WindowGraph, build_template, opposite_boundaries


def flood_fill_count(template, layers):
    """Independent oracle: BFS over (x, y, t) detector coordinates.

    Each boundary incidence is its own leaf, so chains never join through a
    boundary node. Returns the summed min(west, east) over components.
    """
    west, east = (frozenset((n.x, n.y) for n in side) for side in opposite_boundaries(template))
    adj, leaves = {}, {}
    for t, k in zip(*np.nonzero(layers)):
        e = template.edges[k]
        a = (e.u.x, e.u.y, t + e.u.t)
        b = (e.v.x, e.v.y, t + e.v.t)
        if e.u.is_boundary or e.v.is_boundary:
            det, bnd = (b, a) if e.u.is_boundary else (a, b)
            side = "w" if bnd[:2] in west else "e"
            leaves.setdefault(det, []).append(side)
            adj.setdefault(det, set())
        else:
            adj.setdefault(a, set()).add(b)
            adj.setdefault(b, set()).add(a)
    seen, total = set(), 0
    for start in adj:
        if start in seen:
            continue
        seen.add(start)
        queue, w, e = deque([start]), 0, 0
        while queue:
            v = queue.popleft()
            for side in leaves.get(v, []):
                w += side == "w"
                e += side == "e"
            for u in adj[v]:
                if u not in seen:
                    seen.add(u)
                    queue.append(u)
        total += min(w, e)
    return total


def edge_index(template, x0, x1, dt=0):
    for k, e in enumerate(template.edges):
        if {e.u.x, e.v.x} == {x0, x1} and e.dt == dt and (x0 != x1 or e.u.x == x0):
            return k
    raise KeyError


def spanning_chain(template):
    return np.array([e.dt == 0 for e in template.edges])


REP5 = build_template("repetition", 5)


def test_single_spanning_chain():
    layers = np.zeros((4, REP5.n_edges), dtype=bool)
    layers[2] = spanning_chain(REP5)
    assert count_logical_bitflips(REP5, layers) == 1
    assert flood_fill_count(REP5, layers) == 1


def test_closed_loop_counts_zero():
    layers = np.zeros((3, REP5.n_edges), dtype=bool)
    layers[0, edge_index(REP5, 1, 2)] = True
    layers[1, edge_index(REP5, 1, 2)] = True
    layers[0, edge_index(REP5, 1, 1, 1)] = True
    layers[0, edge_index(REP5, 2, 2, 1)] = True
    assert ResidualHistory(REP5, layers).violations() == 0
    assert count_logical_bitflips(REP5, layers) == 0
    assert flood_fill_count(REP5, layers) == 0


def test_two_spanning_chains():
    layers = np.zeros((6, REP5.n_edges), dtype=bool)
    layers[1] = layers[4] = spanning_chain(REP5)
    assert count_logical_bitflips(REP5, layers) == 2
    assert flood_fill_count(REP5, layers) == 2
    assert len(residual_components(REP5, layers)) == 2


def test_same_side_excursion_counts_zero():
    # boundary, up two layers, back to the same boundary
    layers = np.zeros((3, REP5.n_edges), dtype=bool)
    layers[0, edge_index(REP5, 0, 1)] = True
    layers[0, edge_index(REP5, 1, 1, 1)] = True
    layers[1, edge_index(REP5, 1, 1, 1)] = True
    layers[2, edge_index(REP5, 0, 1)] = True
    comps = residual_components(REP5, layers)
    assert [(c.first_layer, c.last_sheet, c.side_a, c.side_b) for c in comps] == [(0, 2, 2, 0)]
    assert count_logical_bitflips(REP5, layers) == 0


def test_surface_spanning_chain():
    t = build_template("surface-phenom", 3)
    # shortest boundary-to-boundary path in the primal graph
    import networkx as nx

    g = nx.Graph()
    for k, e in enumerate(t.edges):
        if e.dt == 0:
            g.add_edge((e.u.x, e.u.y), (e.v.x, e.v.y), k=k)
    a, b = opposite_boundaries(t)
    path = nx.shortest_path(g, (next(iter(a)).x, next(iter(a)).y), (next(iter(b)).x, next(iter(b)).y))
    layers = np.zeros((2, t.n_edges), dtype=bool)
    for u, v in zip(path, path[1:]):
        layers[1, g.edges[u, v]["k"]] = True
    assert count_logical_bitflips(t, layers) == flood_fill_count(t, layers)
    assert cut_parity(t, layers) == count_logical_bitflips(t, layers) % 2


def random_closed_residual(template, n_layers, p, rng):
    """Random flips plus a UF correction of their syndrome: a syndrome-free residual."""
    # no temporal boundary: every defect must pair in space or time
    w = BatchWindow(WindowGraph(template, n_layers), n_layers, 0)
    g = w.graph
    flips = rng.random((n_layers, template.n_edges)) < p
    flips[-1, template.edge_dt == 1] = False
    from snowflake_qec.noise import SheetSyndrome

    w.set_sheet_defects(SheetSyndrome(template).many(flips))
    corr = uf_decode(w)
    out = flips.copy()
    out[g.edge_t[corr], g.edge_k[corr]] ^= True
    return out


@settings(max_examples=150, deadline=None)
@given(st.sampled_from([3, 5]), st.integers(1, 10), st.floats(0.02, 0.4), st.integers(0, 2**32 - 1))
def test_count_matches_oracle_and_cut_parity(d, n_layers, p, seed):
    t = build_template("repetition", d)
    layers = random_closed_residual(t, n_layers, p, np.random.default_rng(seed))
    assert ResidualHistory(t, layers).violations() == 0
    count = count_logical_bitflips(t, layers)
    assert count == flood_fill_count(t, layers)
    for cut in range(0, d):
        assert cut_parity(t, layers, cut) == count % 2


def test_crossing_edges_default_cut():
    assert np.flatnonzero(crossing_edges(REP5)).tolist() == [edge_index(REP5, 2, 3)]


def test_block_attribution():
    layers = np.zeros((20, REP5.n_edges), dtype=bool)
    layers[7] = spanning_chain(REP5)
    counter = LogicalCounter(REP5, 5, 4)
    counter.feed(layers)
    assert counter.finish().tolist() == [0, 1, 0, 0]
    assert [block_of(x, 5, 4) for x in (0, 4, 5, 19, 40)] == [0, 0, 1, 3, 3]


@pytest.mark.parametrize("chunk", [1, 7, 64])
def test_streaming_counter_matches_full_count(chunk):
    t = build_template("repetition", 3)
    rng = np.random.default_rng(chunk)
    layers = random_closed_residual(t, 300, 0.08, rng)
    counter = LogicalCounter(t, 3, 100)
    for a in range(0, 300, chunk):
        counter.feed(layers[a:a + chunk])
    counts = counter.finish()
    assert counts.sum() == count_logical_bitflips(t, layers)
    for blk in range(100):
        assert counts[blk] == count_logical_bitflips(t, layers, 3 * blk, 3 * blk + 3)


def test_horizon_flag():
    t = REP5
    n = 40
    layers = np.zeros((n, t.n_edges), dtype=bool)
    layers[0, edge_index(t, 0, 1)] = True
    layers[: n - 1, edge_index(t, 1, 1, 1)] = True
    layers[n - 1, edge_index(t, 0, 1)] = True
    counter = LogicalCounter(t, 5, 8, horizon=4)
    for a in range(0, n, 2):
        counter.feed(layers[a:a + 2])
    assert counter.finish().sum() == 0
    assert counter.horizon_exceeded
    quiet = LogicalCounter(t, 5, 8, horizon=4)
    quiet.feed(np.zeros((n, t.n_edges), dtype=bool))
    quiet.finish()
    assert not quiet.horizon_exceeded


def test_correction_ledger():
    ledger = CorrectionLedger(3)
    ledger.commit(0, [False, False, False])
    ledger.commit(2, [True, False, True])
    ledger.commit_many(5, [[False, True, False]])
    assert ledger.entries() == [(2, 0), (2, 2), (5, 1)]
    assert len(ledger) == 3
    arr = ledger.as_array(6)
    assert arr.sum() == 3 and arr[5, 1]
    with pytest.raises(ValueError):
        ledger.commit(1, [True, False, False])


def test_residual_layers_pads():
    flips = np.array([[True, False]])
    committed = np.array([[True, False], [False, True]])
    assert residual_layers(flips, committed).tolist() == [[False, False], [False, True]]


def test_logical_error_rate_examples():
    assert logical_error_rate(0, 100) == (0.0, 0.0)
    assert logical_error_rate(5, 1000)[0] == pytest.approx(0.005)
    rate, se = logical_error_rate([0, 1, 0, 2])
    assert rate == pytest.approx(0.75)
    assert se == pytest.approx(np.std([0, 1, 0, 2], ddof=1) / 2)
    with pytest.raises(ValueError):
        logical_error_rate(3, 0)


def test_fit_scaling_exact_quadratic():
    pts = [(d, 7.0 * d**2, 0.0) for d in (5, 9, 13)]
    fit = fit_scaling(pts)
    assert fit.slope == pytest.approx(2.0, abs=1e-12)
    assert not fit.weighted


def test_fit_scaling_constant():
    fit = fit_scaling([(d, 42.0, 1.0) for d in (5, 7, 9, 11)])
    assert fit.slope == pytest.approx(0.0, abs=1e-12)
    assert fit.weighted


def test_fit_scaling_weights_matter():
    pts = [(5, 100.0, 1.0), (7, 200.0, 1.0), (9, 250.0, 100.0)]
    assert fit_scaling(pts).slope != pytest.approx(fit_scaling([(d, t, 0.0) for d, t, _ in pts]).slope)


def test_fit_scaling_rejects_bad_input():
    with pytest.raises(ValueError):
        fit_scaling([(5, 1.0, 0.1), (7, 2.0, 0.1)])
    with pytest.raises(ValueError):
        fit_scaling([(5, 1.0, 0.1)] * 3)


def test_timesteps_per_d_rounds():
    mean, se, blocks = timesteps_per_d_rounds([3] * 20, 5)
    assert mean == 15 and se == 0 and blocks.tolist() == [15] * 4
    mean, _, _ = timesteps_per_d_rounds([4, 6, 7, 7], 2)
    assert mean == 12
    with pytest.raises(ValueError):
        timesteps_per_d_rounds([3] * 7, 5)
