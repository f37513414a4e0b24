import numpy as np

from .._accel import njit


@njit
def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


@njit
def grow(edge_u, edge_v, is_boundary, defects, growth):
    """Grow all active clusters in lock-step until none is active; edits ``growth`` in place."""
    n = defects.shape[0]
    m = edge_u.shape[0]
    parent = np.arange(n)
    size = np.ones(n, dtype=np.int64)
    parity = defects.astype(np.int8)
    bnd = is_boundary.copy()
    act = np.zeros(n, dtype=np.bool_)
    rounds = 0
    while True:
        any_active = False
        for v in range(n):
            r = _find(parent, v)
            act[v] = parity[r] == 1 and not bnd[r]
            any_active = any_active or act[v]
        if not any_active:
            return rounds
        rounds += 1
        for e in range(m):
            if growth[e] < 2:
                inc = np.int8(act[edge_u[e]]) + np.int8(act[edge_v[e]])
                if inc:
                    growth[e] = min(2, growth[e] + inc)
        for e in range(m):
            if growth[e] == 2:
                a = _find(parent, edge_u[e])
                b = _find(parent, edge_v[e])
                if a != b:
                    if size[a] < size[b]:
                        a, b = b, a
                    parent[b] = a
                    size[a] += size[b]
                    parity[a] ^= parity[b]
                    bnd[a] = bnd[a] or bnd[b]


@njit
def peel(nbr_sorted, eid_sorted, growth, is_boundary, defects, corr):
    """Spanning-forest peeling over fully grown edges; toggles ``corr`` in place.

    A virtual root joins every boundary node and one representative per
    boundary-free cluster (its lowest defect, else its lowest node). The
    forest is the breadth-first tree from that root with neighbours taken in
    ascending index order.
    """
    n = defects.shape[0]
    k_max = nbr_sorted.shape[1]
    # component representatives
    comp = np.full(n, -1, dtype=np.int64)
    stack = np.empty(n, dtype=np.int64)
    has_bnd = np.zeros(n, dtype=np.bool_)
    rep = np.full(n, -1, dtype=np.int64)
    rep_def = np.full(n, -1, dtype=np.int64)
    n_comp = 0
    for s in range(n):
        if comp[s] >= 0:
            continue
        comp[s] = n_comp
        top = 0
        stack[top] = s
        top += 1
        while top > 0:
            top -= 1
            u = stack[top]
            if is_boundary[u]:
                has_bnd[n_comp] = True
            if rep[n_comp] < 0 or u < rep[n_comp]:
                rep[n_comp] = u
            if defects[u] and (rep_def[n_comp] < 0 or u < rep_def[n_comp]):
                rep_def[n_comp] = u
            for k in range(k_max):
                w = nbr_sorted[u, k]
                if w < 0:
                    break
                if growth[eid_sorted[u, k]] == 2 and comp[w] < 0:
                    comp[w] = n_comp
                    stack[top] = w
                    top += 1
        n_comp += 1
    start = np.zeros(n, dtype=np.bool_)
    for v in range(n):
        if is_boundary[v]:
            start[v] = True
    for c in range(n_comp):
        if not has_bnd[c]:
            start[rep_def[c] if rep_def[c] >= 0 else rep[c]] = True

    order = np.empty(n, dtype=np.int64)
    parent = np.full(n, -1, dtype=np.int64)
    parent_edge = np.full(n, -1, dtype=np.int64)
    seen = np.zeros(n, dtype=np.bool_)
    head = 0
    tail = 0
    for v in range(n):
        if start[v]:
            seen[v] = True
            order[tail] = v
            tail += 1
    while head < tail:
        u = order[head]
        head += 1
        for k in range(k_max):
            w = nbr_sorted[u, k]
            if w < 0:
                break
            e = eid_sorted[u, k]
            if growth[e] == 2 and not seen[w]:
                seen[w] = True
                parent[w] = u
                parent_edge[w] = e
                order[tail] = w
                tail += 1
    parity = defects.copy()
    for i in range(tail - 1, -1, -1):
        v = order[i]
        if parity[v] and parent[v] >= 0:
            corr[parent_edge[v]] = not corr[parent_edge[v]]
            parity[parent[v]] = not parity[parent[v]]
    return tail
