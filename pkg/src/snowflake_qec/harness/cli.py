"""``snowflake-qec`` command line.

Exit codes: 0 success, 2 configuration error, 3 tainted run.
"""

import argparse
import logging
import sys

import numpy as np

from ..graph import FAMILIES
from ..noise import NoiseConfig, SheetSyndrome, sample_rounds
from ..simulate import DECODERS
from .config import ConfigError, load_config
from .plots import PlotError, emit_plots
from .runner import run_experiment

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_TAINTED = 3

log = logging.getLogger("snowflake_qec")


def _add_experiment_flags(p):
    p.add_argument("--config", help="YAML experiment config")
    p.add_argument("--decoder", choices=DECODERS)
    p.add_argument("--family", help=f"one of {', '.join(FAMILIES)}")
    p.add_argument("--distances", help="comma-separated code distances")
    p.add_argument("--noise-levels", dest="noise_levels", help="comma-separated noise levels")
    p.add_argument("--blocks", type=int, help="number of d-round blocks per point")
    p.add_argument("--blocks-per-trial", dest="blocks_per_trial", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--out-dir", dest="out_dir")
    p.add_argument("--merge-cap", dest="merge_cap", type=int)
    p.add_argument("--horizon", type=int, help="logical-count history horizon in rounds")
    p.add_argument("--backend", choices=("numba", "numpy"))


def build_parser():
    parser = argparse.ArgumentParser(prog="snowflake-qec", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    acc = sub.add_parser("accuracy", help="logical error rate per (d, p)")
    _add_experiment_flags(acc)
    rt = sub.add_parser("runtime", help="timesteps per d rounds and WLS slopes")
    _add_experiment_flags(rt)

    pl = sub.add_parser("plot", help="render SVG plots from a summary CSV")
    pl.add_argument("summary_csv")
    pl.add_argument("--out-dir", dest="out_dir")

    tr = sub.add_parser("trace", help="timestep trace of a short Snowflake run")
    tr.add_argument("--family", default="repetition")
    tr.add_argument("--d", type=int, default=3)
    tr.add_argument("--p", type=float, default=0.05)
    tr.add_argument("--seed", type=int, default=0)
    tr.add_argument("--rounds", type=int, default=3)
    tr.add_argument("--backend", choices=("numba", "numpy"))
    tr.add_argument("--output", help="write the trace here instead of stdout")
    return parser


def _experiment(kind, args):
    keys = ("decoder", "family", "distances", "noise_levels", "blocks", "blocks_per_trial", "seed",
            "workers", "out_dir", "merge_cap", "horizon", "backend")
    overrides = {k: getattr(args, k) for k in keys}
    if kind == "runtime" and overrides["decoder"] is None:
        overrides["decoder"] = "snowflake"
    blocks = {"accuracy": 10_000, "runtime": 100}[kind]
    cfg = load_config(args.config, overrides, defaults={"blocks": blocks})
    outcome = run_experiment(kind, cfg)
    for name, path in outcome.paths.items():
        print(f"{name}: {path}")
    for row in outcome.slopes:
        print(f"slope p={row[2]:g}: {row[3]:.3f} +/- {row[4]:.3f}")
    if outcome.tainted:
        log.error("run tainted: see %s", outcome.paths["manifest"])
        return EXIT_TAINTED
    return EXIT_OK


def _trace(args):
    from ..snowflake import SnowflakeDecoder

    dec = SnowflakeDecoder(args.family, args.d, backend=args.backend)
    cfg = NoiseConfig(args.p, args.seed, dec.template.family, dec.d)
    flips = sample_rounds(cfg, 0, args.rounds)
    rows = SheetSyndrome(dec.template).many(flips)
    dec.enable_trace()
    lines = []
    for r in range(args.rounds):
        steps = dec.run_cycle(rows[r])
        lines.append(f"# round {r}: {steps} timesteps, flipped edges {np.flatnonzero(flips[r]).tolist()}")
        lines.extend(e.format() for e in dec.trace)
        dec.trace.clear()
    text = "\n".join(lines) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        if args.command in ("accuracy", "runtime"):
            return _experiment(args.command, args)
        if args.command == "plot":
            for path in emit_plots(args.summary_csv, args.out_dir):
                print(path)
            return EXIT_OK
        return _trace(args)
    except (ConfigError, PlotError, ValueError) as exc:
        log.error("%s", exc)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
