import numpy as np
from scipy.sparse import coo_matrix, csr_matrix
from scipy.sparse.csgraph import breadth_first_order, connected_components


def _components(n, edge_u, edge_v, full):
    adj = coo_matrix((np.ones(int(full.sum())), (edge_u[full], edge_v[full])), shape=(n, n))
    return connected_components(adj, directed=False)


def grow(edge_u, edge_v, is_boundary, defects, growth):
    n = defects.shape[0]
    rounds = 0
    while True:
        n_comp, labels = _components(n, edge_u, edge_v, growth == 2)
        parity = np.bincount(labels, weights=defects, minlength=n_comp).astype(np.int64) & 1
        bnd = np.bincount(labels, weights=is_boundary, minlength=n_comp) > 0
        act = ((parity == 1) & ~bnd)[labels]
        if not act.any():
            return rounds
        rounds += 1
        inc = act[edge_u].astype(np.int8) + act[edge_v].astype(np.int8)
        np.minimum(growth + inc, 2, out=growth)


def peel(edge_u, edge_v, nbr_sorted, eid_sorted, growth, is_boundary, defects, corr):
    n = defects.shape[0]
    full = growth == 2
    n_comp, labels = _components(n, edge_u, edge_v, full)
    ids = np.arange(n)
    rep = np.full(n_comp, n, dtype=np.int64)
    np.minimum.at(rep, labels, ids)
    rep_def = np.full(n_comp, n, dtype=np.int64)
    np.minimum.at(rep_def, labels[defects], ids[defects])
    has_bnd = np.bincount(labels, weights=is_boundary, minlength=n_comp) > 0
    chosen = np.where(rep_def < n, rep_def, rep)[~has_bnd]
    starts = np.union1d(ids[is_boundary], chosen)

    # virtual root is node n; CSR rows are sorted so the traversal visits
    # neighbours in ascending index order
    fu, fv = edge_u[full], edge_v[full]
    rows = np.concatenate([fu, fv, np.full(len(starts), n), starts])
    cols = np.concatenate([fv, fu, starts, np.full(len(starts), n)])
    adj = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n + 1, n + 1))
    adj.sort_indices()
    order, pred = breadth_first_order(adj, n, directed=True, return_predecessors=True)
    pred = pred.astype(np.int64)
    pred[n] = n

    # depth by pointer doubling
    jump = pred.copy()
    depth = np.ones(n + 1, dtype=np.int64)
    depth[n] = 0
    while np.any(jump != n):
        depth += depth[jump]
        jump = jump[jump]

    # edge from each node to its predecessor (none for children of the virtual root)
    nodes = order[1:]
    parents = pred[nodes]
    inner = parents < n
    pedge = np.full(n + 1, -1, dtype=np.int64)
    col = np.argmax(nbr_sorted[nodes[inner]] == parents[inner, None], axis=1)
    pedge[nodes[inner]] = eid_sorted[nodes[inner], col]

    parity = np.zeros(n + 1, dtype=np.int64)
    parity[:n] = defects
    for level in range(int(depth.max()), 0, -1):
        at = nodes[depth[nodes] == level]
        odd = at[(parity[at] & 1) == 1]
        real = odd[pedge[odd] >= 0]
        corr[pedge[real]] ^= True
        parity += np.bincount(pred[real], minlength=n + 1)
    return len(order) - 1
