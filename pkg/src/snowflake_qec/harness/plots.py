"""SVG renderings of accuracy and runtime summaries."""

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


class PlotError(ValueError):
    pass


def read_summary(path):
    try:
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
    except OSError as exc:
        raise PlotError(f"cannot read {path}: {exc}") from None
    if not rows:
        raise PlotError(f"{path} holds no data rows")
    needed = {"decoder", "family", "d", "p", "rate", "rate_stderr", "timesteps_mean", "timesteps_stderr"}
    missing = needed - set(rows[0])
    if missing:
        raise PlotError(f"{path} is missing columns {sorted(missing)}")
    return rows


def _num(x):
    return float(x) if x not in ("", None) else None


def _series(rows, value, err, key):
    out = {}
    for r in rows:
        y = _num(r[value])
        if y is None:
            continue
        out.setdefault(key(r), []).append((float(r["p"]), int(r["d"]), y, _num(r[err]) or 0.0))
    return out


def threshold_plot(rows, path):
    """Logical error rate against p, one curve per (decoder, d), log-log axes."""
    series = _series(rows, "rate", "rate_stderr", lambda r: (r["decoder"], int(r["d"])))
    # zero rates have no place on a log axis
    series = {k: [q for q in pts if q[2] > 0] for k, pts in series.items()}
    series = {k: pts for k, pts in series.items() if pts}
    if not series:
        raise PlotError("no logical error rates to plot")
    fig, ax = plt.subplots(figsize=(6, 4.5))
    for (decoder, d), pts in sorted(series.items()):
        pts.sort()
        ax.errorbar([p for p, *_ in pts], [y for *_, y, _ in pts], yerr=[e for *_, e in pts],
                    marker="o", capsize=3, label=f"{decoder} d={d}")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("noise level p")
    ax.set_ylabel("logical bitflips per d rounds")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)
    return path


def runtime_plots(rows, lin_path, log_path):
    """Timesteps per d rounds against d, one curve per p, on linear and log-log axes."""
    series = _series(rows, "timesteps_mean", "timesteps_stderr", lambda r: float(r["p"]))
    if not series:
        raise PlotError("no timestep data to plot")
    for path, log in ((lin_path, False), (log_path, True)):
        fig, ax = plt.subplots(figsize=(6, 4.5))
        for p, pts in sorted(series.items()):
            pts.sort(key=lambda t: t[1])
            ax.errorbar([d for _, d, _, _ in pts], [y for *_, y, _ in pts], yerr=[e for *_, e in pts],
                        marker="o", capsize=3, label=f"p={p:g}")
        if log:
            ax.set_xscale("log")
            ax.set_yscale("log")
        ax.set_xlabel("distance d")
        ax.set_ylabel("timesteps per d rounds")
        ax.legend(fontsize=8)
        fig.tight_layout()
        fig.savefig(path, format="svg")
        plt.close(fig)
    return lin_path, log_path


def emit_plots(summary_csv, out_dir=None):
    """Render every applicable plot for a summary CSV; returns the written paths."""
    rows = read_summary(summary_csv)
    out = Path(out_dir) if out_dir is not None else Path(summary_csv).parent
    out.mkdir(parents=True, exist_ok=True)
    stem = Path(summary_csv).stem.replace("_summary", "")
    written = []
    if any((_num(r["rate"]) or 0) > 0 for r in rows) and len({r["p"] for r in rows}) > 1:
        written.append(str(threshold_plot(rows, out / f"{stem}_threshold.svg")))
    if any(_num(r["timesteps_mean"]) is not None for r in rows):
        written.extend(str(p) for p in runtime_plots(rows, out / f"{stem}_runtime.svg",
                                                     out / f"{stem}_runtime_loglog.svg"))
    if not written:
        raise PlotError("summary has nothing plottable")
    return written
