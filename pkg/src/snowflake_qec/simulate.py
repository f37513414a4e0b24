"""One Monte Carlo trial: noise stream, decoder, residual accounting."""

from dataclasses import dataclass, field

import numpy as np

from .accounting import LogicalCounter, residual_layers
from .baseline import ForwardUFDecoder
from .graph import build_template, canonical_family
from .noise import NoiseConfig, SheetSyndrome, sample_rounds
from .snowflake import MergeCapExceeded, SnowflakeDecoder, check_quiescent

DECODERS = ("snowflake", "forward-uf")


def trial_seed(master_seed, trial_index):
    """Seed for one trial; shared across (d, p) so points use common random numbers."""
    ss = np.random.SeedSequence(int(master_seed), spawn_key=(int(trial_index),))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


@dataclass
class TrialResult:
    decoder: str
    family: str
    d: int
    p: float
    seed: int
    n_blocks: int
    logical_bitflips: np.ndarray
    timesteps: np.ndarray | None = None  # per block, Snowflake only
    syndrome_violations: int = 0
    commit_region_defects: int = 0
    quiescence_violations: int = 0
    horizon_exceeded: bool = False
    status: str = "ok"
    detail: list = field(default_factory=list)


class _StreamChecker:
    """Feeds finalized residual layers to the logical counter and a syndrome check."""

    def __init__(self, template, d, n_blocks, horizon):
        self.counter = LogicalCounter(template, d, n_blocks, horizon)
        self.syndrome = SheetSyndrome(template)
        self.last = None
        self.violations = 0

    def feed(self, rows):
        if len(rows) == 0:
            return
        self.violations += int(self.syndrome.many(rows, self.last).sum())
        self.last = rows[-1]
        self.counter.feed(rows)

    def finish(self):
        if self.last is not None:
            # the sheet above the last layer only sees that layer's up-edges
            tail = np.zeros((1, len(self.last)), dtype=np.bool_)
            self.violations += int(self.syndrome.many(tail, self.last).sum())
        return self.counter.finish()


def _run_snowflake(template, cfg, n_rounds, b, backend, merge_cap, check, flush_cap):
    dec = SnowflakeDecoder(template.family, template.d, b=b, backend=backend, merge_cap=merge_cap,
                           template=template)
    flips = sample_rounds(cfg, 0, n_rounds)
    padded = np.concatenate([flips, np.zeros((1, template.n_edges), dtype=np.bool_)])
    rows = SheetSyndrome(template).many(padded)
    L = dec.n_sheets
    committed_rows, timesteps, bottom = [], [], []
    quiescence = []
    if check:
        for r in range(n_rounds):
            res = dec.decode_round(rows[r])
            committed_rows.append(res.committed)
            timesteps.append(res.timesteps)
            bottom.append(res.bottom_defects)
            problems = check_quiescent(dec.graph, dec.state)
            if problems:
                quiescence.append((r, problems))
        committed = np.array(committed_rows).reshape(-1, template.n_edges)
        timesteps = np.array(timesteps, dtype=np.int64)
        bottom = np.array(bottom, dtype=np.int64)
    else:
        committed, timesteps, bottom = dec.decode_rounds(rows[:n_rounds])
    # noiseless flush: the first flush round still sees the last layer's up-edges
    flush = [dec.decode_round(rows[n_rounds])]
    while dec.rounds_ingested < n_rounds + L or dec.state.defect.any() or dec.state.corr.any():
        if len(flush) > flush_cap:
            raise MergeCapExceeded("window failed to drain after the stream ended", dec.state.copy())
        flush.append(dec.decode_round())
    bottom = np.concatenate([bottom, [f.bottom_defects for f in flush]])
    all_committed = np.concatenate([committed, [f.committed for f in flush]])
    if all_committed[:L].any():
        raise AssertionError("commit before the first real layer reached the bottom of the window")
    return flips, all_committed[L:], timesteps, int((bottom > 0).sum()), quiescence


def _run_forward(template, cfg, n_rounds, backend):
    dec = ForwardUFDecoder(template.family, template.d, backend=backend, template=template)
    flips = sample_rounds(cfg, 0, n_rounds)
    committed = dec.run(flips)
    return flips, committed


def run_trial(decoder, family, d, p, seed, n_blocks, *, b=None, backend=None, merge_cap=None,
              horizon=None, check_invariants=False, template=None):
    """Decode ``n_blocks * d`` noisy rounds and account for the residual."""
    if decoder not in DECODERS:
        raise ValueError(f"unknown decoder {decoder!r}; expected one of {DECODERS}")
    family = canonical_family(family)
    template = template if template is not None else build_template(family, d)
    cfg = NoiseConfig(float(p), int(seed), family, int(d))
    n_rounds = n_blocks * d
    result = TrialResult(decoder, family, d, float(p), int(seed), n_blocks, np.zeros(n_blocks, dtype=np.int64))
    try:
        if decoder == "snowflake":
            flips, committed, ts, leaks, quiescence = _run_snowflake(
                template, cfg, n_rounds, b, backend, merge_cap, check_invariants, 100 * (d + 2)
            )
            result.timesteps = ts.reshape(n_blocks, d).sum(axis=1)
            result.commit_region_defects = leaks
            result.quiescence_violations = len(quiescence)
            result.detail = quiescence[:5]
        else:
            flips, committed = _run_forward(template, cfg, n_rounds, backend)
    except MergeCapExceeded as exc:
        result.status = "merge-cap"
        result.detail = [str(exc)]
        return result
    residual = residual_layers(flips, committed)
    checker = _StreamChecker(template, d, n_blocks, horizon)
    step = max(256, 8 * d)
    for a in range(0, len(residual), step):
        checker.feed(residual[a:a + step])
    result.logical_bitflips = checker.finish()
    result.syndrome_violations = checker.violations
    result.horizon_exceeded = checker.counter.horizon_exceeded
    return result
