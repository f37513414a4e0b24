"""Trial scheduling, CSV output and run manifests."""

import csv
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .. import __version__
from ..accounting import fit_scaling, logical_error_rate
from ..simulate import run_trial, trial_seed

BLOCK_HEADER = ["decoder", "family", "d", "p", "trial", "seed", "block", "logical_bitflips", "timesteps"]
SUMMARY_HEADER = [
    "decoder", "family", "d", "p", "blocks", "logical_bitflips", "rate", "rate_stderr",
    "timesteps_mean", "timesteps_stderr", "syndrome_violations", "commit_region_defects",
    "tainted_trials", "horizon_flags",
]
SLOPE_HEADER = ["decoder", "family", "p", "slope", "slope_stderr", "weighted", "points"]


@dataclass(frozen=True)
class Task:
    decoder: str
    family: str
    d: int
    p: float
    trial: int
    seed: int
    blocks: int
    merge_cap: int | None
    horizon: int | None
    backend: str | None


def plan(config):
    """Tasks in the fixed (d, p, trial) order used for aggregation."""
    n_trials = math.ceil(config.blocks / config.blocks_per_trial)
    tasks = []
    for d in config.distances:
        for p in config.noise_levels:
            for i in range(n_trials):
                blocks = min(config.blocks_per_trial, config.blocks - i * config.blocks_per_trial)
                tasks.append(Task(config.decoder, config.family, d, p, i, trial_seed(config.seed, i),
                                  blocks, config.merge_cap, config.horizon, config.backend))
    return tasks


def _execute(task):
    start = time.perf_counter()
    res = run_trial(task.decoder, task.family, task.d, task.p, task.seed, task.blocks,
                    backend=task.backend, merge_cap=task.merge_cap, horizon=task.horizon)
    return res, time.perf_counter() - start


def execute(tasks, workers):
    if workers <= 1 or len(tasks) <= 1:
        return [_execute(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_execute, tasks, chunksize=1))


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(x) for x in row])


def _tainted(res):
    return res.status != "ok" or res.syndrome_violations > 0


def summarise(tasks, results):
    """One summary row per (d, p); tainted trials are excluded from the statistics."""
    groups = {}
    for task, (res, _) in zip(tasks, results):
        groups.setdefault((task.d, task.p), []).append((task, res))
    rows = []
    for (d, p), items in groups.items():
        good = [r for _, r in items if not _tainted(r)]
        counts = np.concatenate([r.logical_bitflips for r in good]) if good else np.zeros(0, dtype=np.int64)
        task = items[0][0]
        if counts.size:
            rate, se = logical_error_rate(counts)
            m = int(counts.sum())
        else:
            rate = se = m = None
        ts_mean = ts_se = None
        if good and good[0].timesteps is not None:
            ts = np.concatenate([r.timesteps for r in good]).astype(np.float64)
            ts_mean = float(ts.mean())
            ts_se = float(ts.std(ddof=1) / np.sqrt(ts.size)) if ts.size > 1 else 0.0
        rows.append([
            task.decoder, task.family, d, p, int(counts.size), m, rate, se, ts_mean, ts_se,
            sum(r.syndrome_violations for _, r in items), sum(r.commit_region_defects for _, r in items),
            sum(_tainted(r) for _, r in items), sum(r.horizon_exceeded for _, r in items),
        ])
    return rows


def block_rows(tasks, results):
    for task, (res, _) in zip(tasks, results):
        if _tainted(res):
            continue
        for j, m in enumerate(res.logical_bitflips):
            ts = None if res.timesteps is None else int(res.timesteps[j])
            yield [task.decoder, task.family, task.d, task.p, task.trial, task.seed, j, int(m), ts]


def slope_rows(summary):
    by_p = {}
    for row in summary:
        if row[8] is not None:
            by_p.setdefault((row[0], row[1], row[3]), []).append((row[2], row[8], row[9]))
    rows = []
    for (decoder, family, p), pts in by_p.items():
        if len({d for d, _, _ in pts}) < 3:
            continue
        fit = fit_scaling(pts)
        rows.append([decoder, family, p, fit.slope, fit.slope_stderr, fit.weighted, len(pts)])
    return rows


def _manifest(kind, config, tasks, results, outputs, wall):
    tainted = any(_tainted(r) for r, _ in results)
    return {
        "artifact": "snowflake-qec",
        "artifact_version": __version__,
        "command": kind,
        "config": config.to_dict(),
        "trials": [
            {
                "d": t.d, "p": t.p, "trial": t.trial, "seed": t.seed, "blocks": t.blocks,
                "status": r.status, "syndrome_violations": r.syndrome_violations,
                "commit_region_defects": r.commit_region_defects, "horizon_exceeded": bool(r.horizon_exceeded),
                "wall_seconds": round(w, 3), "detail": [str(x) for x in r.detail],
            }
            for t, (r, w) in zip(tasks, results)
        ],
        "outputs": outputs,
        "wall_clock_seconds": round(wall, 3),
        "status": "tainted" if tainted else "complete",
    }


@dataclass
class RunOutcome:
    summary: list
    slopes: list
    paths: dict
    tainted: bool


def run_experiment(kind, config):
    """Run ``accuracy`` or ``runtime``; writes CSVs and a manifest under ``config.out_dir``."""
    if kind == "runtime" and config.decoder != "snowflake":
        from .config import ConfigError
        raise ConfigError("runtime is only modelled for the snowflake decoder")
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    start = time.perf_counter()
    tasks = plan(config)
    results = execute(tasks, config.workers)
    summary = summarise(tasks, results)
    paths = {
        "blocks": str(out / f"{kind}_blocks.csv"),
        "summary": str(out / f"{kind}_summary.csv"),
    }
    _write_csv(paths["blocks"], BLOCK_HEADER, block_rows(tasks, results))
    _write_csv(paths["summary"], SUMMARY_HEADER, summary)
    slopes = []
    if kind == "runtime":
        slopes = slope_rows(summary)
        paths["slopes"] = str(out / "runtime_slopes.csv")
        _write_csv(paths["slopes"], SLOPE_HEADER, slopes)
    paths["manifest"] = str(out / f"{kind}_manifest.json")
    manifest = _manifest(kind, config, tasks, results, paths, time.perf_counter() - start)
    Path(paths["manifest"]).write_text(json.dumps(manifest, indent=2) + "\n")
    return RunOutcome(summary, slopes, paths, manifest["status"] == "tainted")
