"""Decoding-graph layer templates and their stacked window form.

A *sheet* is the set of nodes sharing a time coordinate; a *layer* is the
periodic unit: the intra-sheet edges of one sheet together with the edges
that connect it to the sheet above. Stacking layers gives the spacetime
decoding graph.

Coordinates: ``x`` grows east, ``y`` grows north, ``t`` grows upward.
"""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

DIRECTIONS = ("C", "N", "W", "E", "S", "D", "U", "NU", "WD", "EU", "SD", "NWD", "SEU")
DIR_INDEX = {name: i for i, name in enumerate(DIRECTIONS)}
DISPLACEMENT = {
    "C": (0, 0, 0),
    "N": (0, 1, 0),
    "W": (-1, 0, 0),
    "E": (1, 0, 0),
    "S": (0, -1, 0),
    "D": (0, 0, -1),
    "U": (0, 0, 1),
    "NU": (0, 1, 1),
    "WD": (-1, 0, -1),
    "EU": (1, 0, 1),
    "SD": (0, -1, -1),
    "NWD": (-1, 1, -1),
    "SEU": (1, -1, 1),
}
_BY_DISPLACEMENT = {v: k for k, v in DISPLACEMENT.items()}
OPPOSITE = {k: _BY_DISPLACEMENT[tuple(-c for c in v)] for k, v in DISPLACEMENT.items()}
DOWNWARD = frozenset(k for k, v in DISPLACEMENT.items() if v[2] < 0)

OPPOSITE_CODE = np.array([DIR_INDEX[OPPOSITE[name]] for name in DIRECTIONS], dtype=np.int8)
DOWNWARD_CODE = np.array([name in DOWNWARD for name in DIRECTIONS], dtype=np.bool_)

DETECTOR = "detector"
BOUNDARY = "boundary"

FAMILIES = ("repetition", "surface-phenom", "surface-circuit")
_ALIASES = {
    "repetition": "repetition",
    "repetition-phenom": "repetition",
    "repetition-phenomenological": "repetition",
    "surface": "surface-phenom",
    "surface-phenom": "surface-phenom",
    "surface-phenomenological": "surface-phenom",
    "surface-circuit": "surface-circuit",
    "surface-circuit-style": "surface-circuit",
    "surface-circuit-level-style": "surface-circuit",
}
_CIRCUIT_DIAGONALS = ("NU", "EU", "SEU")


def canonical_family(family):
    try:
        return _ALIASES[family]
    except KeyError:
        raise ValueError(f"unsupported family {family!r}; expected one of {FAMILIES}") from None


@dataclass(frozen=True)
class NodeDescriptor:
    x: int
    y: int
    t: int
    kind: str
    side: str | None = None

    @property
    def is_detector(self):
        return self.kind == DETECTOR

    @property
    def is_boundary(self):
        return self.kind == BOUNDARY

    def id_key(self):
        # boundary < detector; higher sheet first; then (x, y)
        return (0 if self.kind == BOUNDARY else 1, -self.t, self.x, self.y)

    def shifted(self, dt):
        return NodeDescriptor(self.x, self.y, self.t + dt, self.kind, self.side)


@dataclass(frozen=True)
class EdgeDescriptor:
    u: NodeDescriptor
    v: NodeDescriptor
    direction: str  # from u to v

    @property
    def is_boundary(self):
        return self.u.is_boundary or self.v.is_boundary

    @property
    def dt(self):
        return self.v.t - self.u.t

    def flip_probability(self, p):
        return p


def id_order(a, b):
    """Three-way comparison of node IDs: -1 if ``a`` ranks first, 0 if equal, 1 otherwise."""
    ka, kb = a.id_key(), b.id_key()
    return (ka > kb) - (ka < kb)


def node_below(n):
    if n.t <= 0:
        return None
    return n.shifted(-1)


@dataclass(frozen=True, eq=False)
class LayerTemplate:
    """Periodic unit of a decoding graph.

    ``nodes`` are the sheet nodes at ``t = 0`` in ID order. Every edge has
    ``u`` on sheet 0 and ``v`` on sheet 0 (intra-sheet) or sheet 1 (the edge
    to the sheet above).
    """

    family: str
    d: int
    nodes: tuple
    edges: tuple
    cut_axis: tuple = field(default=(1, 0))

    @cached_property
    def local_index(self):
        return {(n.x, n.y): i for i, n in enumerate(self.nodes)}

    @cached_property
    def n_boundary(self):
        return sum(n.is_boundary for n in self.nodes)

    @cached_property
    def n_detector(self):
        return len(self.nodes) - self.n_boundary

    @cached_property
    def is_detector(self):
        return np.array([n.is_detector for n in self.nodes], dtype=np.bool_)

    @cached_property
    def edge_u(self):
        return np.array([self.local_index[(e.u.x, e.u.y)] for e in self.edges], dtype=np.int64)

    @cached_property
    def edge_v(self):
        return np.array([self.local_index[(e.v.x, e.v.y)] for e in self.edges], dtype=np.int64)

    @cached_property
    def edge_dt(self):
        return np.array([e.dt for e in self.edges], dtype=np.int64)

    @cached_property
    def side_code(self):
        """0 / 1 for the two opposite spatial boundaries, -1 for detectors."""
        a, b = self.side_names
        return np.array(
            [-1 if n.is_detector else (0 if n.side == a else 1) for n in self.nodes], dtype=np.int64
        )

    @cached_property
    def side_names(self):
        return ("W", "E") if self.family == "repetition" else ("SW", "NE")

    @cached_property
    def cut_coordinate(self):
        ax, ay = self.cut_axis
        return np.array([ax * n.x + ay * n.y for n in self.nodes], dtype=np.int64)

    @property
    def n_edges(self):
        return len(self.edges)

    def flip_probabilities(self, p):
        return np.array([e.flip_probability(p) for e in self.edges], dtype=np.float64)

    def stack(self, n_layers):
        """Nodes and edges of ``n_layers`` stacked sheets (top sheet's upward edges dropped)."""
        nodes = [n.shifted(t) for t in range(n_layers) for n in self.nodes]
        edges = [
            EdgeDescriptor(e.u.shifted(t), e.v.shifted(t), e.direction)
            for t in range(n_layers)
            for e in self.edges
            if t + e.dt < n_layers
        ]
        return nodes, edges


def opposite_boundaries(template):
    a, b = template.side_names
    side_a = frozenset(n for n in template.nodes if n.is_boundary and n.side == a)
    side_b = frozenset(n for n in template.nodes if n.is_boundary and n.side == b)
    if not side_a or not side_b:
        raise ValueError(f"family {template.family!r} has no pair of opposite boundaries")
    return side_a, side_b


def _direction(u, v):
    key = (v.x - u.x, v.y - u.y, v.t - u.t)
    try:
        return _BY_DISPLACEMENT[key]
    except KeyError:
        raise ValueError(f"no direction label for displacement {key}") from None


def _repetition_sheet(d):
    nodes = [NodeDescriptor(0, 0, 0, BOUNDARY, "W"), NodeDescriptor(d, 0, 0, BOUNDARY, "E")]
    nodes += [NodeDescriptor(x, 0, 0, DETECTOR) for x in range(1, d)]
    by_x = {n.x: n for n in nodes}
    pairs = [(by_x[x], by_x[x + 1]) for x in range(d)]
    return nodes, pairs


def _surface_sheet(d):
    # Rotated code: data qubit (i, j), Z plaquette labelled by its lower-left
    # corner (a, b) with a + b even. Mapped to a frame where every data
    # qubit is a unit N/E/S/W step: x = (a + b) / 2, y = (b - a) / 2.
    def real(a, b):
        return (a + b) % 2 == 0 and -1 <= a <= d - 1 and 0 <= b <= d - 2

    def coords(a, b):
        return (a + b) // 2, (b - a) // 2

    detectors, boundary, pairs = {}, {}, []
    for a in range(-1, d):
        for b in range(0, d - 1):
            if real(a, b):
                detectors[coords(a, b)] = NodeDescriptor(*coords(a, b), 0, DETECTOR)
    for i in range(d):
        for j in range(d):
            cands = [(i - 1, j - 1), (i, j)] if (i + j) % 2 == 0 else [(i, j - 1), (i - 1, j)]
            reals = [c for c in cands if real(*c)]
            if len(reals) == 2:
                pairs.append((detectors[coords(*reals[0])], detectors[coords(*reals[1])]))
            elif len(reals) == 1:
                (virtual,) = [c for c in cands if not real(*c)]
                side = "SW" if virtual[1] == -1 else "NE"
                assert virtual[1] in (-1, d - 1)
                xy = coords(*virtual)
                node = boundary.setdefault(xy, NodeDescriptor(*xy, 0, BOUNDARY, side))
                pairs.append((detectors[coords(*reals[0])], node))
            else:  # pragma: no cover - impossible for d >= 2
                raise AssertionError(f"data qubit {(i, j)} touches no Z plaquette")
    return list(boundary.values()) + list(detectors.values()), pairs


def build_template(family, d):
    family = canonical_family(family)
    if not isinstance(d, (int, np.integer)) or d < 2:
        raise ValueError(f"distance must be an integer >= 2, got {d!r}")
    d = int(d)
    if family == "repetition":
        nodes, pairs = _repetition_sheet(d)
        cut_axis = (1, 0)
    else:
        nodes, pairs = _surface_sheet(d)
        cut_axis = (1, 1)
    nodes = sorted(nodes, key=NodeDescriptor.id_key)
    position = {(n.x, n.y): n for n in nodes}

    edges = []
    for u, v in pairs:
        if v.id_key() < u.id_key():
            u, v = v, u
        edges.append(EdgeDescriptor(u, v, _direction(u, v)))
    for n in nodes:
        if n.is_detector:
            edges.append(EdgeDescriptor(n, n.shifted(1), "U"))
    if family == "surface-circuit":
        for n in nodes:
            for name in _CIRCUIT_DIAGONALS:
                dx, dy, _ = DISPLACEMENT[name]
                m = position.get((n.x + dx, n.y + dy))
                if m is not None and (n.is_detector or m.is_detector):
                    edges.append(EdgeDescriptor(n, m.shifted(1), name))
    edges.sort(key=lambda e: (e.dt, e.u.id_key(), DIR_INDEX[e.direction]))
    return LayerTemplate(family, d, tuple(nodes), tuple(edges), cut_axis)


def dump_template(template):
    """Text adjacency dump: one edge per line, ``x,y,t x,y,t DIR kind``."""
    lines = [f"# family={template.family} d={template.d}"]
    for e in template.edges:
        kind = "boundary" if e.is_boundary else "bulk"
        lines.append(f"{e.u.x},{e.u.y},{e.u.t} {e.v.x},{e.v.y},{e.v.t} {e.direction} {kind}")
    return "\n".join(lines) + "\n"


def b_min(d):
    return 2 * (d // 2)


class WindowGraph:
    """Array form of ``n_sheets`` stacked sheets, nodes numbered by ID.

    Sheet ``0`` is the bottom of the window. With ``temporal=True`` every
    top-sheet detector gets its own boundary node above it, joined by a
    ``U`` edge.
    """

    def __init__(self, template, n_sheets, temporal=False):
        if n_sheets < 1:
            raise ValueError("window needs at least one sheet")
        self.template = template
        self.n_sheets = L = int(n_sheets)
        self.temporal = temporal
        nodes = [n.shifted(t) for t in range(L) for n in template.nodes]
        local = [i for t in range(L) for i in range(len(template.nodes))]
        if temporal:
            for i, n in enumerate(template.nodes):
                if n.is_detector:
                    nodes.append(NodeDescriptor(n.x, n.y, L, BOUNDARY, "T"))
                    local.append(-1)
        order = sorted(range(len(nodes)), key=lambda i: nodes[i].id_key())
        self.nodes = [nodes[i] for i in order]
        self.n_nodes = N = len(self.nodes)
        self.node_local = np.array([local[i] for i in order], dtype=np.int64)
        self.node_t = np.array([n.t for n in self.nodes], dtype=np.int64)
        self.is_boundary = np.array([n.is_boundary for n in self.nodes], dtype=np.bool_)
        self.is_detector = ~self.is_boundary
        self.id_of = {(n.x, n.y, n.t): i for i, n in enumerate(self.nodes)}

        sheet_ids = np.full((L, len(template.nodes)), -1, dtype=np.int64)
        for i, n in enumerate(self.nodes):
            if n.t < L:
                sheet_ids[n.t, self.node_local[i]] = i
        self.sheet_ids = sheet_ids

        self.node_below = np.full(N, -1, dtype=np.int64)
        self.node_above = np.full(N, -1, dtype=np.int64)
        for t in range(1, L):
            self.node_below[sheet_ids[t]] = sheet_ids[t - 1]
            self.node_above[sheet_ids[t - 1]] = sheet_ids[t]
        self.is_top = (self.node_t == L - 1)
        self.is_bottom = (self.node_t == 0)

        eu, ev, edir, et, ek = [], [], [], [], []
        index = {}
        for t in range(L):
            for k, e in enumerate(template.edges):
                if t + e.dt >= L:
                    continue
                a = sheet_ids[t, template.edge_u[k]]
                b = sheet_ids[t + e.dt, template.edge_v[k]]
                name = e.direction
                if b < a:
                    a, b, name = b, a, OPPOSITE[name]
                index[(t, k)] = len(eu)
                eu.append(a), ev.append(b), edir.append(DIR_INDEX[name]), et.append(t), ek.append(k)
        if temporal:
            for i, n in enumerate(self.nodes):
                if n.t == L:
                    a = self.id_of[(n.x, n.y, L - 1)]
                    eu.append(min(a, i)), ev.append(max(a, i))
                    edir.append(DIR_INDEX["U"] if a < i else DIR_INDEX["D"])
                    et.append(L - 1), ek.append(-1)
        self.edge_u = np.array(eu, dtype=np.int64)
        self.edge_v = np.array(ev, dtype=np.int64)
        self.edge_dir = np.array(edir, dtype=np.int8)
        self.edge_t = np.array(et, dtype=np.int64)
        self.edge_k = np.array(ek, dtype=np.int64)
        self.n_edges = E = len(eu)
        self.edge_index = index

        self.edge_above = np.full(E, -1, dtype=np.int64)
        for (t, k), e in index.items():
            self.edge_above[e] = index.get((t + 1, k), -1)
        # -1 marks up-edges of a single-sheet window, which leave the window
        self.commit_edges = np.array([index.get((0, k), -1) for k in range(template.n_edges)], dtype=np.int64)

        # per-direction neighbour tables; column C points at the node itself
        self.nbr_dir = np.full((N, len(DIRECTIONS)), -1, dtype=np.int64)
        self.eid_dir = np.full((N, len(DIRECTIONS)), -1, dtype=np.int64)
        self.nbr_dir[:, 0] = np.arange(N)
        for e in range(E):
            a, b, dcode = self.edge_u[e], self.edge_v[e], self.edge_dir[e]
            self.nbr_dir[a, dcode], self.eid_dir[a, dcode] = b, e
            self.nbr_dir[b, OPPOSITE_CODE[dcode]], self.eid_dir[b, OPPOSITE_CODE[dcode]] = a, e

        # neighbours in ascending ID order, padded with -1
        adj = [[] for _ in range(N)]
        for e in range(E):
            a, b, dcode = self.edge_u[e], self.edge_v[e], self.edge_dir[e]
            adj[a].append((b, dcode, e))
            adj[b].append((a, OPPOSITE_CODE[dcode], e))
        K = max((len(a) for a in adj), default=0)
        self.max_degree = K
        self.nbr_sorted = np.full((N, max(K, 1)), -1, dtype=np.int64)
        self.dir_sorted = np.zeros((N, max(K, 1)), dtype=np.int8)
        self.eid_sorted = np.full((N, max(K, 1)), -1, dtype=np.int64)
        for v, items in enumerate(adj):
            for j, (u, dcode, e) in enumerate(sorted(items)):
                self.nbr_sorted[v, j], self.dir_sorted[v, j], self.eid_sorted[v, j] = u, dcode, e
        self.csr_indptr = np.zeros(N + 1, dtype=np.int64)
        self.csr_indptr[1:] = np.cumsum([len(a) for a in adj])
        valid = self.nbr_sorted >= 0
        self.csr_indices = self.nbr_sorted[valid]
        self.csr_edges = self.eid_sorted[valid]

    def node_id(self, x, y, t):
        return self.id_of[(x, y, t)]

    def edge_between(self, a, b):
        for j in range(self.max_degree):
            if self.nbr_sorted[a, j] == b:
                return int(self.eid_sorted[a, j])
        raise KeyError((a, b))
