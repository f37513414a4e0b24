"""Batch Union-Find decoding of one window."""

from dataclasses import dataclass, field

import numpy as np

from .._accel import resolve_backend
from ..graph import WindowGraph
from . import _uf_numpy


@dataclass
class BatchWindow:
    """A window of ``c + b`` sheets capped by a temporal boundary.

    ``defects`` is a bool per window node; boundary entries must stay false.
    """

    graph: WindowGraph
    c: int
    b: int
    defects: np.ndarray = field(default=None)

    @classmethod
    def build(cls, template, c, b):
        return cls(WindowGraph(template, c + b, temporal=True), c, b)

    def __post_init__(self):
        if self.defects is None:
            self.defects = np.zeros(self.graph.n_nodes, dtype=np.bool_)

    def set_sheet_defects(self, rows):
        """Fill defects from one bool row per sheet (template detector order)."""
        g = self.graph
        self.defects[:] = False
        det = g.template.is_detector
        for t, row in enumerate(rows):
            self.defects[g.sheet_ids[t][det]] = row


def uf_decode(window, backend=None):
    """Tentative correction (bool per window edge) annihilating every defect of ``window``."""
    g = window.graph
    defects = np.asarray(window.defects, dtype=np.bool_)
    if np.any(defects & g.is_boundary):
        raise ValueError("boundary nodes cannot hold defects")
    growth = np.zeros(g.n_edges, dtype=np.int8)
    corr = np.zeros(g.n_edges, dtype=np.bool_)
    if not defects.any():
        return corr
    if resolve_backend(backend) == "numba":
        from . import _uf_numba
        _uf_numba.grow(g.edge_u, g.edge_v, g.is_boundary, defects, growth)
        _uf_numba.peel(g.nbr_sorted, g.eid_sorted, growth, g.is_boundary, defects, corr)
    else:
        _uf_numpy.grow(g.edge_u, g.edge_v, g.is_boundary, defects, growth)
        _uf_numpy.peel(g.edge_u, g.edge_v, g.nbr_sorted, g.eid_sorted, growth, g.is_boundary, defects, corr)
    return corr
