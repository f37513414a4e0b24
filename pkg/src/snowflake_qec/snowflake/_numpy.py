"""Vectorised numpy versions of the Snowflake kernels.

Same signatures and results as the numba loops; every update is a whole-array
expression over the start-of-timestep snapshot.
"""

import numpy as np

RESET = -1
C = 0

OK = 0
BAD_TOP_SHEET = 1
MERGE_CAP = 2


def drop(st, g, top_ids, top_defects, committed):
    active, cid, defect, pointer, unrooted, busy, growth, corr = st
    (nbr_dir, eid_dir, nbr_sorted, dir_sorted, eid_sorted, is_det, node_above, node_below,
     is_bottom, edge_above, commit_edges, downward, sentinel) = g
    n = active.shape[0]
    bottom_defects = int(np.count_nonzero(defect & is_bottom))
    committed[:] = corr[commit_edges]
    if np.any(cid[top_ids] != top_ids) or np.any(pointer[top_ids] != C):
        return BAD_TOP_SHEET, bottom_defects
    unrooted[:] = False
    has = node_above >= 0
    src = node_above[has]
    c = cid[src]
    inside = (c >= 0) & (c < n)
    below = np.where(inside, node_below[np.where(inside, c, 0)], -1)
    new_cid = np.where(below >= 0, below, sentinel)
    active[has] = active[src]
    defect[has] = defect[src]
    pointer[has] = pointer[src]
    cid[has] = new_cid
    ehas = edge_above >= 0
    esrc = edge_above[ehas]
    g_new = np.zeros_like(growth)
    c_new = np.zeros_like(corr)
    g_new[ehas] = growth[esrc]
    c_new[ehas] = corr[esrc]
    growth[:] = g_new
    corr[:] = c_new
    defect[top_ids] = top_defects
    active[top_ids] = False
    return OK, bottom_defects


def grow(st, g, edge_u, edge_v):
    active, cid, defect, pointer, unrooted, busy, growth, corr = st
    downward, is_bottom = g[11], g[8]
    inc = active[edge_u].astype(np.int8) + active[edge_v].astype(np.int8)
    np.minimum(growth + inc, 2, out=growth)
    unroot = is_bottom & downward[pointer]
    cid[unroot] = RESET
    pointer[unroot] = C


def merging_tick(st, g, scratch=None):
    active, cid, defect, pointer, unrooted, busy, growth, corr = st
    (nbr_dir, eid_dir, nbr_sorted, dir_sorted, eid_sorted, is_det, node_above, node_below,
     is_bottom, edge_above, commit_edges, downward, sentinel) = g
    n = active.shape[0]
    rows = np.arange(n)

    # Syncing, with the previous timestep's pointer
    x = is_det & defect
    root = pointer == C
    pointee = nbr_dir[rows, pointer]
    new_active = np.where(root, x, active[pointee])
    push = x & ~root
    pushed_edges = eid_dir[rows[push], pointer[push]]
    flips = np.bincount(pushed_edges, minlength=corr.shape[0]) & 1
    corr ^= flips.astype(np.bool_)
    incoming = np.bincount(pointee[push], minlength=n) & 1
    new_defect = ((defect & ~push) ^ incoming.astype(np.bool_)) & is_det
    b = push | (new_active != active)

    # Flooding
    valid = nbr_sorted >= 0
    full = valid & (growth[np.where(valid, eid_sorted, 0)] == 2)
    ncid = cid[np.where(valid, nbr_sorted, 0)]
    saw_reset = full & (ncid == RESET)
    breaks = saw_reset.any(axis=1) & ~unrooted & (cid != RESET)
    cand = np.where(full & ~saw_reset, ncid, np.iinfo(np.int64).max)
    k = np.argmin(cand, axis=1)  # first occurrence of the minimum
    best = cand[rows, k]
    adopt = (best < cid) & ~breaks & (cid != RESET)
    finish = cid == RESET

    new_cid = cid.copy()
    new_ptr = pointer.copy()
    new_unr = unrooted.copy()
    new_cid[adopt] = best[adopt]
    new_ptr[adopt] = dir_sorted[rows[adopt], k[adopt]]
    new_cid[breaks] = RESET
    new_ptr[breaks] = C
    new_cid[finish] = rows[finish]
    new_unr[finish] = True
    b |= adopt | breaks | finish

    busy[:] = b
    active[:] = new_active
    defect[:] = new_defect
    cid[:] = new_cid
    pointer[:] = new_ptr
    unrooted[:] = new_unr
    return bool(b.any())


def decode_cycle(st, g, edge_u, edge_v, scratch, top_ids, top_defects, committed, merge_cap):
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


def decode_stream(st, g, edge_u, edge_v, scratch, top_ids, top_defects, committed, merge_cap,
                  timesteps, bottom_defects):
    for r in range(top_defects.shape[0]):
        status, steps, bottom = decode_cycle(
            st, g, edge_u, edge_v, scratch, top_ids, top_defects[r], committed[r], merge_cap
        )
        timesteps[r] = steps
        bottom_defects[r] = bottom
        if status != OK:
            return status, r
    return OK, top_defects.shape[0]
