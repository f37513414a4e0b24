"""Snowflake window state, controller and per-cycle driver."""

from dataclasses import dataclass

import numpy as np

from .._accel import resolve_backend
from ..graph import DIRECTIONS, DOWNWARD_CODE, WindowGraph, b_min, build_template
from . import _numpy

RESET = -1
STAGES = ("drop", "grow", "merging")


class SnowflakeError(RuntimeError):
    """A decoding cycle could not complete; ``state`` holds the window at the failure."""

    def __init__(self, message, state=None):
        super().__init__(message)
        self.state = state


class MergeCapExceeded(SnowflakeError):
    pass


class TopSheetError(SnowflakeError):
    pass


def _kernels(backend):
    if backend == "numba":
        from . import _numba
        return _numba
    return _numpy


class WindowState:
    """Per-node and per-edge automaton variables of one window.

    ``growth`` is stored in halves (0, 1, 2), ``cid`` uses ``-1`` for the
    ``reset`` sentinel and ``n_nodes`` for a root that has left the window.
    """

    FIELDS = ("active", "cid", "defect", "pointer", "unrooted", "busy", "growth", "corr")

    def __init__(self, graph):
        n, m = graph.n_nodes, graph.n_edges
        self.active = np.zeros(n, dtype=np.bool_)
        self.cid = np.arange(n, dtype=np.int64)
        self.defect = np.zeros(n, dtype=np.bool_)
        self.pointer = np.zeros(n, dtype=np.int8)
        self.unrooted = np.zeros(n, dtype=np.bool_)
        self.busy = np.zeros(n, dtype=np.bool_)
        self.growth = np.zeros(m, dtype=np.int8)
        self.corr = np.zeros(m, dtype=np.bool_)

    def as_tuple(self):
        return tuple(getattr(self, f) for f in self.FIELDS)

    def copy(self):
        out = object.__new__(WindowState)
        for f in self.FIELDS:
            setattr(out, f, getattr(self, f).copy())
        return out

    def __eq__(self, other):
        return all(np.array_equal(getattr(self, f), getattr(other, f)) for f in self.FIELDS)


@dataclass
class CycleResult:
    committed: np.ndarray  # bool per template edge, absolute layer ``round - n_sheets``
    timesteps: int
    bottom_defects: int


@dataclass(frozen=True)
class TraceEvent:
    timestep: int
    stage: str
    node: tuple  # (x, y, t) inside the window, or an edge as ((x, y, t), (x, y, t))
    variable: str
    old: object
    new: object

    def format(self):
        return f"{self.timestep} {self.stage} {self.node} {self.variable} {self.old}->{self.new}"


class SnowflakeDecoder:
    """Emulates the controller and one automaton per window node.

    The window holds ``1 + b`` sheets (``b`` defaults to ``2 * (d // 2)``)
    and commits one layer per decoding cycle. ``decode_round`` ingests the
    top-sheet defects of one measurement round; the layer it commits lies
    ``n_sheets`` rounds in the past.
    """

    def __init__(self, family, d, b=None, backend=None, merge_cap=None, template=None):
        self.template = template if template is not None else build_template(family, d)
        self.d = self.template.d
        self.b = b_min(self.d) if b is None else int(b)
        if self.b < 1:
            raise ValueError("the window needs a buffer of at least one sheet")
        self.n_sheets = 1 + self.b
        self.graph = g = WindowGraph(self.template, self.n_sheets)
        self.backend = resolve_backend(backend)
        self.kernels = _kernels(self.backend)
        self.merge_cap = 10 * g.n_nodes if merge_cap is None else int(merge_cap)
        self.state = WindowState(g)
        self.static = (
            g.nbr_dir, g.eid_dir, g.nbr_sorted, g.dir_sorted, g.eid_sorted,
            g.is_detector, g.node_above, g.node_below, g.is_bottom,
            g.edge_above, g.commit_edges, DOWNWARD_CODE, np.int64(g.n_nodes),
        )
        top = g.sheet_ids[self.n_sheets - 1]
        self.top_ids = np.ascontiguousarray(top[self.template.is_detector])
        n = g.n_nodes
        self.scratch = (
            np.zeros(n, dtype=np.bool_), np.zeros(n, dtype=np.int64), np.zeros(n, dtype=np.int8),
            np.zeros(n, dtype=np.bool_), np.zeros(n, dtype=np.bool_), np.zeros(n, dtype=np.int64),
        )
        self.rounds_ingested = 0
        self.timestep = 0
        self.stage = "drop"
        self.wait = 0
        self.trace = None
        self.last_committed = None

    @property
    def sentinel(self):
        return self.graph.n_nodes

    def reset(self):
        self.state = WindowState(self.graph)
        self.rounds_ingested = 0
        self.timestep = 0
        self.stage = "drop"
        self.wait = 0

    def _empty_defects(self, top_defects):
        if top_defects is None:
            return np.zeros(len(self.top_ids), dtype=np.bool_)
        out = np.asarray(top_defects, dtype=np.bool_)
        if out.shape != (len(self.top_ids),):
            raise ValueError(f"expected {len(self.top_ids)} top-sheet defects, got shape {out.shape}")
        return out

    def _raise(self, status, where):
        if status == _numpy.BAD_TOP_SHEET:
            raise TopSheetError(f"top-sheet node left its initial CID/pointer before {where}", self.state.copy())
        if status == _numpy.MERGE_CAP:
            raise MergeCapExceeded(
                f"merging did not quiesce within {self.merge_cap} ticks at {where}", self.state.copy()
            )

    # whole-cycle API

    def decode_round(self, top_defects=None):
        """One drop/grow/merging cycle; returns the committed layer and its timestep cost."""
        defects = self._empty_defects(top_defects)
        committed = np.zeros(self.template.n_edges, dtype=np.bool_)
        g = self.graph
        status, steps, bottom = self.kernels.decode_cycle(
            self.state.as_tuple(), self.static, g.edge_u, g.edge_v, self.scratch,
            self.top_ids, defects, committed, self.merge_cap,
        )
        self._raise(status, f"round {self.rounds_ingested}")
        self.rounds_ingested += 1
        self.timestep += int(steps)
        return CycleResult(committed, int(steps), int(bottom))

    def decode_rounds(self, defect_rows):
        """Run one cycle per row; returns (committed rows, timesteps, bottom-sheet defect counts)."""
        rows = np.ascontiguousarray(defect_rows, dtype=np.bool_)
        r = rows.shape[0]
        committed = np.zeros((r, self.template.n_edges), dtype=np.bool_)
        timesteps = np.zeros(r, dtype=np.int64)
        bottom = np.zeros(r, dtype=np.int64)
        g = self.graph
        status, done = self.kernels.decode_stream(
            self.state.as_tuple(), self.static, g.edge_u, g.edge_v, self.scratch,
            self.top_ids, rows, committed, self.merge_cap, timesteps, bottom,
        )
        self.rounds_ingested += int(done) + (1 if status != _numpy.OK else 0)
        self.timestep += int(timesteps.sum())
        self._raise(status, f"round {self.rounds_ingested - 1}")
        return committed, timesteps, bottom

    # timestep API

    def controller_tick(self):
        """Controller decision for the coming timestep: ``"drop"`` or ``None`` (idle)."""
        if self.wait > 0:
            self.wait -= 1
            return None
        if self.state.busy.any():
            return None
        self.stage = "drop"
        self.wait = 2
        return "drop"

    def tick(self, top_defects=None):
        """Advance every node by one timestep; returns the stage that executed.

        ``top_defects`` feeds the drop stage and is ignored otherwise. The
        committed layer of the latest drop is left in ``last_committed``.
        """
        stage = self.stage
        before = self.state.copy() if self.trace is not None else None
        st, g = self.state.as_tuple(), self.graph
        if stage == "drop":
            self.last_committed = np.zeros(self.template.n_edges, dtype=np.bool_)
            status, _ = self.kernels.drop(
                st, self.static, self.top_ids, self._empty_defects(top_defects), self.last_committed
            )
            self._raise(status, f"timestep {self.timestep}")
            self.state.busy[:] = False
            self.rounds_ingested += 1
            self.stage = "grow"
        elif stage == "grow":
            self.kernels.grow(st, self.static, g.edge_u, g.edge_v)
            self.stage = "merging"
        else:
            self.kernels.merging_tick(st, self.static, self.scratch)
        self.timestep += 1
        if before is not None:
            self._record(stage, before)
        return stage

    def run_cycle(self, top_defects=None):
        """Timestep-by-timestep cycle driven by the controller; returns the number of timesteps."""
        start = self.timestep
        self.controller_tick()
        if self.stage != "drop":
            raise SnowflakeError("previous cycle is not quiescent")
        self.tick(top_defects)
        self.controller_tick()
        self.tick()
        while True:
            self.controller_tick()
            self.tick()
            if not self.state.busy.any():
                break
            if self.timestep - start - 2 >= self.merge_cap:
                raise MergeCapExceeded("merging did not quiesce", self.state.copy())
        return self.timestep - start

    # tracing

    def enable_trace(self):
        self.trace = []

    def _node_label(self, v):
        n = self.graph.nodes[v]
        return (n.x, n.y, n.t)

    def _fmt(self, name, value):
        if name == "pointer":
            return DIRECTIONS[int(value)]
        if name == "cid":
            value = int(value)
            return "reset" if value == RESET else ("out" if value == self.sentinel else value)
        if name == "growth":
            return int(value) / 2
        return bool(value)

    def _record(self, stage, before):
        g = self.graph
        for name in ("active", "cid", "defect", "pointer", "unrooted", "busy"):
            old, new = getattr(before, name), getattr(self.state, name)
            for v in np.flatnonzero(old != new):
                self.trace.append(TraceEvent(
                    self.timestep, stage, self._node_label(v), name,
                    self._fmt(name, old[v]), self._fmt(name, new[v]),
                ))
        for name in ("growth", "corr"):
            old, new = getattr(before, name), getattr(self.state, name)
            for e in np.flatnonzero(old != new):
                label = (self._node_label(g.edge_u[e]), self._node_label(g.edge_v[e]))
                self.trace.append(TraceEvent(
                    self.timestep, stage, label, name, self._fmt(name, old[e]), self._fmt(name, new[e]),
                ))
