"""Cluster invariants that must hold whenever merging has quiesced.

The checks recompute clusters from scratch with scipy rather than trusting
the automaton's own variables.
"""

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components


def clusters(graph, growth):
    """Component label per node over fully grown edges."""
    full = growth == 2
    n = graph.n_nodes
    adj = coo_matrix(
        (np.ones(int(full.sum())), (graph.edge_u[full], graph.edge_v[full])), shape=(n, n)
    )
    return connected_components(adj, directed=False)[1]


def check_quiescent(graph, state):
    """Return a list of human-readable violations (empty when all invariants hold)."""
    problems = []
    n = graph.n_nodes
    labels = clusters(graph, state.growth)
    ids = np.arange(n)
    root_of = np.full(labels.max() + 1, n, dtype=np.int64)
    np.minimum.at(root_of, labels, ids)
    expected = root_of[labels]

    if np.any(state.defect & graph.is_boundary):
        problems.append(f"boundary defect at {np.flatnonzero(state.defect & graph.is_boundary).tolist()}")
    if state.busy.any():
        problems.append("busy node after quiescence")
    bad = np.flatnonzero(state.cid != expected)
    if bad.size:
        problems.append(f"CID differs from cluster minimum at nodes {bad[:10].tolist()}")
    is_root = state.pointer == 0
    bad = np.flatnonzero(is_root != (ids == expected))
    if bad.size:
        problems.append(f"pointer C does not mark exactly the cluster minimum at {bad[:10].tolist()}")

    # pointer chase: every node must reach its root along fully grown edges
    cur = ids.copy()
    for _ in range(n):
        moving = state.pointer[cur] != 0
        if not moving.any():
            break
        nxt = graph.nbr_dir[cur[moving], state.pointer[cur[moving]]]
        eid = graph.eid_dir[cur[moving], state.pointer[cur[moving]]]
        broken = (nxt < 0) | (eid < 0)
        if broken.any():
            problems.append("pointer leads outside the window")
            break
        if np.any(state.growth[eid] != 2):
            problems.append("pointer crosses an edge that is not fully grown")
            break
        cur[moving] = nxt
    else:
        problems.append("pointer cycle")
    if "pointer cycle" not in problems:
        bad = np.flatnonzero(cur != expected)
        if bad.size:
            problems.append(f"pointer path does not end at the cluster root for {bad[:10].tolist()}")

    defects_per = np.bincount(labels, weights=state.defect, minlength=len(root_of)).astype(np.int64)
    if np.any(defects_per > 1):
        problems.append(f"{int((defects_per > 1).sum())} clusters hold more than one defect")
    off_root = state.defect & (ids != expected)
    if off_root.any():
        problems.append(f"defect away from the root at {np.flatnonzero(off_root)[:10].tolist()}")

    root_active = graph.is_detector[root_of] & state.defect[root_of]
    if np.any(state.active != root_active[labels]):
        problems.append("active flag differs from root defect status")
    touches_boundary = np.bincount(labels, weights=graph.is_boundary, minlength=len(root_of)) > 0
    should_be_active = (defects_per % 2 == 1) & ~touches_boundary
    if np.any(root_active != should_be_active):
        problems.append("cluster activity disagrees with odd-parity/no-boundary rule")
    return problems
