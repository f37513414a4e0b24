"""Residual tracking, exact logical-bitflip counting and run metrics."""

from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .noise import SheetSyndrome


class CorrectionLedger:
    """Append-only Pauli frame: committed edges keyed by absolute layer."""

    def __init__(self, n_edges):
        self.n_edges = n_edges
        self._layers = []
        self._rows = []

    def commit(self, layer, row):
        row = np.asarray(row, dtype=np.bool_)
        if row.shape != (self.n_edges,):
            raise ValueError("row must hold one flag per template edge")
        if self._layers and layer <= self._layers[-1]:
            raise ValueError("ledger layers must be committed in increasing order")
        if row.any():
            self._layers.append(int(layer))
            self._rows.append(row.copy())

    def commit_many(self, first_layer, rows):
        for i, row in enumerate(rows):
            self.commit(first_layer + i, row)

    def entries(self):
        """``(layer, template edge)`` pairs in commit order."""
        return [(t, int(k)) for t, row in zip(self._layers, self._rows) for k in np.flatnonzero(row)]

    def __len__(self):
        return sum(int(r.sum()) for r in self._rows)

    def as_array(self, n_layers):
        out = np.zeros((n_layers, self.n_edges), dtype=np.bool_)
        for t, row in zip(self._layers, self._rows):
            if t >= n_layers:
                raise ValueError(f"ledger holds layer {t} beyond {n_layers}")
            out[t] = row
        return out


def residual_layers(flips, committed):
    """``flips XOR committed``, padding the shorter array with clean layers."""
    n = max(len(flips), len(committed))
    width = flips.shape[1] if len(flips) else committed.shape[1]
    out = np.zeros((n, width), dtype=np.bool_)
    out[: len(flips)] ^= flips
    out[: len(committed)] ^= committed
    return out


class ResidualHistory:
    """Residual edges per absolute layer, with syndrome queries."""

    def __init__(self, template, layers):
        self.template = template
        self.layers = np.asarray(layers, dtype=np.bool_)

    @classmethod
    def from_stream(cls, template, flips, committed):
        return cls(template, residual_layers(flips, committed))

    def syndrome(self):
        """Defect rows for sheets ``0 .. len(layers)`` (the last sheet sees only up-edges)."""
        padded = np.concatenate([self.layers, np.zeros((1, self.layers.shape[1]), dtype=np.bool_)])
        return SheetSyndrome(self.template).many(padded)

    def violations(self, upto=None):
        """Number of finalized detectors with odd residual parity."""
        syn = self.syndrome()
        if upto is not None:
            syn = syn[:upto]
        return int(syn.sum())


@dataclass(frozen=True)
class Component:
    first_layer: int
    last_sheet: int
    side_a: int
    side_b: int

    @property
    def logical_flips(self):
        # each crossing chain uses one end on each side; even remainders are
        # same-side loops
        return min(self.side_a, self.side_b)


def _label_edges(template, layers):
    """Component index of every residual edge plus its layer, span and boundary side."""
    t_idx, k_idx = np.nonzero(layers)
    nd = template.n_detector
    det_index = np.cumsum(template.is_detector) - 1
    u, v, dt = template.edge_u[k_idx], template.edge_v[k_idx], template.edge_dt[k_idx]
    u_det, v_det = template.is_detector[u], template.is_detector[v]
    n_nodes = (len(layers) + 1) * nd
    node_u = np.where(u_det, t_idx * nd + det_index[u], -1)
    node_v = np.where(v_det, (t_idx + dt) * nd + det_index[v], -1)
    both = u_det & v_det
    adj = coo_matrix(
        (np.ones(int(both.sum())), (node_u[both], node_v[both])), shape=(n_nodes, n_nodes)
    )
    _, labels = connected_components(adj, directed=False)
    lab = labels[np.where(u_det, node_u, node_v)]
    comp = np.unique(lab, return_inverse=True)[1] if lab.size else lab
    side = template.side_code
    bside = np.where(u_det, np.where(v_det, -1, side[v]), side[u])
    return t_idx, k_idx, comp, dt, bside


def residual_components(template, layers, offset=0):
    """Connected residual components over detectors.

    Boundary nodes are split per incidence, so chains sharing a boundary
    node stay separate. ``offset`` is the absolute index of ``layers[0]``.
    """
    layers = np.asarray(layers, dtype=np.bool_)
    t_idx, _, comp, dt, bside = _label_edges(template, layers)
    if t_idx.size == 0:
        return []
    n_comp = int(comp.max()) + 1
    first = np.full(n_comp, np.iinfo(np.int64).max, dtype=np.int64)
    np.minimum.at(first, comp, t_idx)
    last = np.full(n_comp, -1, dtype=np.int64)
    np.maximum.at(last, comp, t_idx + dt)
    a = np.bincount(comp, weights=bside == 0, minlength=n_comp).astype(np.int64)
    b = np.bincount(comp, weights=bside == 1, minlength=n_comp).astype(np.int64)
    return [
        Component(int(first[i]) + offset, int(last[i]) + offset, int(a[i]), int(b[i]))
        for i in range(n_comp)
    ]


def count_logical_bitflips(template, layers, first=0, last=None):
    """Logical bitflips among residual components whose first layer lies in ``[first, last)``."""
    comps = residual_components(template, layers)
    last = len(layers) if last is None else last
    return sum(c.logical_flips for c in comps if first <= c.first_layer < last)


def crossing_edges(template, cut=None):
    """Template edges crossing the spatial cut between cut coordinates ``cut`` and ``cut + 1``."""
    coord = template.cut_coordinate
    if cut is None:
        cut = int((coord.min() + coord.max()) // 2)
    cu, cv = coord[template.edge_u], coord[template.edge_v]
    return (np.minimum(cu, cv) <= cut) & (np.maximum(cu, cv) > cut)


def cut_parity(template, layers, cut=None):
    """Parity of residual edges crossing a fixed spatial cut."""
    return int(np.asarray(layers)[:, crossing_edges(template, cut)].sum()) & 1


def block_of(first_layer, d, n_blocks):
    return min(max(first_layer // d, 0), n_blocks - 1)


class LogicalCounter:
    """Streaming logical-bitflip counter over finalized residual layers.

    Keeps a rolling buffer of roughly ``horizon`` layers. Components are
    counted once no later layer can touch them and attributed to the
    ``d``-round block holding their first layer. ``horizon_exceeded`` is set
    when an unfinished component reaches further back than the horizon, in
    which case the buffer is extended rather than truncated.
    """

    def __init__(self, template, d, n_blocks, horizon=None):
        self.template = template
        self.d = d
        self.n_blocks = n_blocks
        self.horizon = 4 * d if horizon is None else int(horizon)
        self.counts = np.zeros(n_blocks, dtype=np.int64)
        self.horizon_exceeded = False
        self._base = 0
        self._buf = np.zeros((0, template.n_edges), dtype=np.bool_)

    def feed(self, rows):
        rows = np.asarray(rows, dtype=np.bool_)
        self._buf = np.concatenate([self._buf, rows])
        if len(self._buf) >= 2 * self.horizon:
            self._settle(final=False)

    def finish(self):
        self._settle(final=True)
        return self.counts

    def _settle(self, final):
        frontier = self._base + len(self._buf)
        cut = frontier - self.horizon
        keep_from = frontier if final else cut
        comps = residual_components(self.template, self._buf, self._base)
        if not comps:
            self._drop_below(keep_from)
            return
        t_idx, k_idx, labels, _, _ = _label_edges(self.template, self._buf)
        done = np.zeros(len(comps), dtype=np.bool_)
        for i, c in enumerate(comps):
            if final or c.last_sheet <= frontier - 1:
                done[i] = True
                self.counts[block_of(c.first_layer, self.d, self.n_blocks)] += c.logical_flips
            elif c.first_layer < cut:
                self.horizon_exceeded = True
                keep_from = min(keep_from, c.first_layer)
        gone = done[labels]
        self._buf[t_idx[gone], k_idx[gone]] = False
        self._drop_below(keep_from)

    def _drop_below(self, layer):
        n = max(0, min(layer - self._base, len(self._buf)))
        self._buf = self._buf[n:]
        self._base += n


def logical_error_rate(counts, n=None):
    """Mean logical bitflips per block and its standard error.

    ``counts`` is either the per-block counts, or a total ``m`` with ``n``
    blocks (Poisson error ``sqrt(m) / n``).
    """
    if n is not None:
        if n <= 0:
            raise ValueError("need at least one block")
        m = float(counts)
        return m / n, float(np.sqrt(m)) / n
    counts = np.asarray(counts, dtype=np.float64)
    if counts.size == 0:
        raise ValueError("need at least one block")
    stderr = counts.std(ddof=1) / np.sqrt(counts.size) if counts.size > 1 else 0.0
    return float(counts.mean()), float(stderr)


def timesteps_per_d_rounds(cycle_timesteps, d):
    """Mean and standard error of timesteps summed over consecutive ``d``-round blocks."""
    ts = np.asarray(cycle_timesteps, dtype=np.int64)
    if ts.size % d:
        raise ValueError(f"{ts.size} cycles do not split into blocks of {d}")
    blocks = ts.reshape(-1, d).sum(axis=1)
    stderr = blocks.std(ddof=1) / np.sqrt(blocks.size) if blocks.size > 1 else 0.0
    return float(blocks.mean()), float(stderr), blocks


@dataclass(frozen=True)
class ScalingFit:
    slope: float
    slope_stderr: float
    intercept: float
    weighted: bool


def fit_scaling(points):
    """Weighted least squares of ``log t`` on ``log d``.

    ``points`` holds ``(d, mean timesteps, stderr)``. Weights are inverse
    variances propagated to log space (``(stderr / t)^2``); ordinary least
    squares is used when any stderr is zero.
    """
    import statsmodels.api as sm

    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[0] < 3:
        raise ValueError("need at least three (d, t, stderr) points")
    d, t, se = pts[:, 0], pts[:, 1], pts[:, 2]
    if np.unique(d).size < 2:
        raise ValueError("all points share the same d")
    if np.any(d <= 0) or np.any(t <= 0):
        raise ValueError("d and t must be positive")
    x = sm.add_constant(np.log(d))
    y = np.log(t)
    weighted = bool(np.all(se > 0))
    if weighted:
        res = sm.WLS(y, x, weights=1.0 / (se / t) ** 2).fit()
    else:
        res = sm.OLS(y, x).fit()
    slope_se = float(res.bse[1]) if np.isfinite(res.bse[1]) else 0.0
    return ScalingFit(float(res.params[1]), slope_se, float(res.params[0]), weighted)
