"""Seeded, counter-based source of per-round edge bitflips.

Round ``r`` owns layer ``r``: the intra-sheet edges of sheet ``r`` and the
edges from sheet ``r`` up to sheet ``r + 1``. Its uniforms come from a
Philox stream keyed by the seed with the round index in the counter, so any
round can be regenerated without replaying the ones before it.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .graph import build_template


def seed_key(seed):
    """Two 64-bit words of Philox key material from an integer seed."""
    return np.random.SeedSequence(int(seed)).generate_state(2, dtype=np.uint64)


@dataclass(frozen=True)
class NoiseConfig:
    p: float
    seed: int
    family: str
    d: int

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"noise level p must lie in [0, 1], got {self.p}")

    @cached_property
    def template(self):
        return build_template(self.family, self.d)

    @cached_property
    def probabilities(self):
        return self.template.flip_probabilities(self.p)

    @cached_property
    def key(self):
        return seed_key(self.seed)


@dataclass(frozen=True)
class RoundSample:
    round_index: int
    flips: np.ndarray  # bool per template edge of the new layer

    @property
    def flipped_edges(self):
        return frozenset(np.flatnonzero(self.flips).tolist())


def _uniforms(key, round_index, n):
    counter = np.array([0, int(round_index) & 0xFFFFFFFFFFFFFFFF, 0, 0], dtype=np.uint64)
    gen = np.random.Generator(np.random.Philox(key=key, counter=counter))
    return gen.random(n)


def sample_round(config, round_index):
    probs = config.probabilities
    if config.p == 0.0:
        return RoundSample(round_index, np.zeros(len(probs), dtype=np.bool_))
    return RoundSample(round_index, _uniforms(config.key, round_index, len(probs)) < probs)


def sample_rounds(config, start, stop):
    """Flip arrays for rounds ``start .. stop - 1``; row ``i`` equals ``sample_round(start + i)``."""
    probs = config.probabilities
    out = np.zeros((max(stop - start, 0), len(probs)), dtype=np.bool_)
    if config.p == 0.0:
        return out
    for i, r in enumerate(range(start, stop)):
        out[i] = _uniforms(config.key, r, len(probs)) < probs
    return out


class SheetSyndrome:
    """Incidence of one sheet's detectors on the edges of its own layer and the layer below."""

    def __init__(self, template):
        nd = template.n_detector
        det_index = np.cumsum(template.is_detector) - 1
        self.own = np.zeros((template.n_edges, nd), dtype=np.int64)
        self.below = np.zeros((template.n_edges, nd), dtype=np.int64)
        for k in range(template.n_edges):
            u, v, dt = template.edge_u[k], template.edge_v[k], template.edge_dt[k]
            if template.is_detector[u]:
                self.own[k, det_index[u]] += 1
            if template.is_detector[v]:
                (self.own if dt == 0 else self.below)[k, det_index[v]] += 1

    def __call__(self, layer, layer_below):
        """Defects (bool per detector) of a sheet from its layer's flips and the layer below."""
        return ((layer.astype(np.int64) @ self.own + layer_below.astype(np.int64) @ self.below) & 1).astype(
            np.bool_
        )

    def many(self, layers, previous=None):
        """Defect rows for consecutive layers; ``previous`` is the layer preceding ``layers[0]``."""
        below = np.empty_like(layers)
        below[1:] = layers[:-1]
        below[0] = previous if previous is not None else False
        return ((layers.astype(np.int64) @ self.own + below.astype(np.int64) @ self.below) & 1).astype(np.bool_)


def defects_from_flips(template, flips, region=None):
    """Detectors touching an odd number of flipped edges.

    ``flips`` is an iterable of global edges ``(t, k)`` (template edge ``k``
    whose lower endpoint sits on sheet ``t``); ``region`` optionally restricts
    the answer to a set of global nodes ``(t, local)``. Boundary nodes are
    never reported.
    """
    parity = {}
    for t, k in flips:
        u, v, dt = int(template.edge_u[k]), int(template.edge_v[k]), int(template.edge_dt[k])
        for node in ((t, u), (t + dt, v)):
            parity[node] = parity.get(node, 0) ^ 1
    out = {n for n, odd in parity.items() if odd and template.is_detector[n[1]]}
    if region is not None:
        out &= set(region)
    return out
