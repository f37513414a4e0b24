"""numba kernels for the Snowflake node automaton.

Every node reads the start-of-timestep snapshot and writes its own slot of
the next state, so loop order over nodes never matters.
"""

import numpy as np

from .._accel import njit

RESET = -1
C = 0

OK = 0
BAD_TOP_SHEET = 1
MERGE_CAP = 2


@njit
def drop(st, g, top_ids, top_defects, committed):
    active, cid, defect, pointer, unrooted, busy, growth, corr = st
    (nbr_dir, eid_dir, nbr_sorted, dir_sorted, eid_sorted, is_det, node_above, node_below,
     is_bottom, edge_above, commit_edges, downward, sentinel) = g
    n = active.shape[0]
    bottom_defects = 0
    for v in range(n):
        if is_bottom[v] and defect[v]:
            bottom_defects += 1
    for j in range(commit_edges.shape[0]):
        committed[j] = corr[commit_edges[j]]
    # top-sheet nodes must still be singleton roots: they are never rewritten
    for j in range(top_ids.shape[0]):
        v = top_ids[j]
        if cid[v] != v or pointer[v] != C:
            return BAD_TOP_SHEET, bottom_defects
    for v in range(n):
        unrooted[v] = False
    # for a fixed sheet position, IDs fall as t rises: descending IDs read
    # every source before it is overwritten
    for v in range(n - 1, -1, -1):
        a = node_above[v]
        if a < 0:
            continue
        active[v] = active[a]
        defect[v] = defect[a]
        pointer[v] = pointer[a]
        c = cid[a]
        if c >= 0 and c < n and node_below[c] >= 0:
            cid[v] = node_below[c]
        else:
            cid[v] = sentinel
    m = growth.shape[0]
    for e in range(m):
        # edge_above[e] > e for every shifted edge, so ascending order is safe
        a = edge_above[e]
        if a >= 0:
            growth[e] = growth[a]
            corr[e] = corr[a]
        else:
            growth[e] = 0
            corr[e] = False
    for j in range(top_ids.shape[0]):
        v = top_ids[j]
        defect[v] = top_defects[j]
        active[v] = False
    return OK, bottom_defects


@njit
def grow(st, g, edge_u, edge_v):
    active, cid, defect, pointer, unrooted, busy, growth, corr = st
    (nbr_dir, eid_dir, nbr_sorted, dir_sorted, eid_sorted, is_det, node_above, node_below,
     is_bottom, edge_above, commit_edges, downward, sentinel) = g
    for e in range(growth.shape[0]):
        if growth[e] < 2:
            inc = np.int8(active[edge_u[e]]) + np.int8(active[edge_v[e]])
            growth[e] = min(2, growth[e] + inc)
    for v in range(active.shape[0]):
        if is_bottom[v] and downward[pointer[v]]:
            cid[v] = RESET
            pointer[v] = C


@njit
def merging_tick(st, g, scratch):
    active, cid, defect, pointer, unrooted, busy, growth, corr = st
    (nbr_dir, eid_dir, nbr_sorted, dir_sorted, eid_sorted, is_det, node_above, node_below,
     is_bottom, edge_above, commit_edges, downward, sentinel) = g
    active_n, cid_n, pointer_n, unrooted_n, pushed, incoming = scratch
    n = active.shape[0]
    k_max = nbr_sorted.shape[1]
    any_busy = False
    for v in range(n):
        incoming[v] = 0
    for v in range(n):
        b = False
        # Syncing, with the previous timestep's pointer
        x = is_det[v] and defect[v]
        p = pointer[v]
        pushed[v] = False
        if p == C:
            new_active = x
        else:
            u = nbr_dir[v, p]
            new_active = active[u]
            if x:
                b = True
                e = eid_dir[v, p]
                corr[e] = not corr[e]
                pushed[v] = True
                incoming[u] += 1
        if new_active != active[v]:
            b = True
        active_n[v] = new_active
        # Flooding
        c = cid[v]
        ptr = p
        unr = unrooted[v]
        if c == RESET:
            b = True
            c = v
            unr = True
        else:
            for k in range(k_max):
                u = nbr_sorted[v, k]
                if u < 0:
                    break
                if growth[eid_sorted[v, k]] != 2:
                    continue
                cu = cid[u]
                if cu == RESET:
                    if not unrooted[v]:
                        b = True
                        c = RESET
                        ptr = C
                        break
                elif cu < c:
                    b = True
                    ptr = dir_sorted[v, k]
                    c = cu
        cid_n[v] = c
        pointer_n[v] = ptr
        unrooted_n[v] = unr
        busy[v] = b
        any_busy = any_busy or b
    for v in range(n):
        keep = defect[v] and not pushed[v]
        arrived = (incoming[v] & 1) == 1
        defect[v] = (keep != arrived) and is_det[v]
        active[v] = active_n[v]
        cid[v] = cid_n[v]
        pointer[v] = pointer_n[v]
        unrooted[v] = unrooted_n[v]
    return any_busy


@njit
def decode_cycle(st, g, edge_u, edge_v, scratch, top_ids, top_defects, committed, merge_cap):
    """drop, grow, then merging until quiescent; returns (status, timesteps, bottom_defects)."""
    status, bottom = drop(st, g, top_ids, top_defects, committed)
    if status != OK:
        return status, 1, bottom
    grow(st, g, edge_u, edge_v)
    steps = 2
    ticks = 0
    while True:
        steps += 1
        ticks += 1
        if not merging_tick(st, g, scratch):
            break
        if ticks >= merge_cap:
            return MERGE_CAP, steps, bottom
    return OK, steps, bottom


@njit
def decode_stream(st, g, edge_u, edge_v, scratch, top_ids, top_defects, committed, merge_cap,
                  timesteps, bottom_defects):
    """Run one cycle per row of ``top_defects``; stops early on a non-OK status."""
    for r in range(top_defects.shape[0]):
        status, steps, bottom = decode_cycle(
            st, g, edge_u, edge_v, scratch, top_ids, top_defects[r], committed[r], merge_cap
        )
        timesteps[r] = steps
        bottom_defects[r] = bottom
        if status != OK:
            return status, r
    return OK, top_defects.shape[0]
