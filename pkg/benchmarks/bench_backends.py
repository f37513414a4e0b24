"""Compare the numba and numpy kernels on identical syndrome streams.

    python3 benchmarks/bench_backends.py --family surface-circuit --d 7 --rounds 2000
"""

import argparse
import time

import numpy as np

from snowflake_qec.baseline import BatchWindow, uf_decode
from snowflake_qec.graph import build_template
from snowflake_qec.noise import NoiseConfig, SheetSyndrome, sample_rounds
from snowflake_qec.snowflake import SnowflakeDecoder


def bench_snowflake(template, rows, backend):
    dec = SnowflakeDecoder(template.family, template.d, backend=backend, template=template)
    dec.decode_rounds(rows[:4])  # compile / warm up
    dec.reset()
    start = time.perf_counter()
    committed, ts, _ = dec.decode_rounds(rows)
    return time.perf_counter() - start, committed, ts


def bench_uf(template, n_windows, p, seed, backend):
    window = BatchWindow.build(template, template.d, template.d)
    g = window.graph
    rng = np.random.default_rng(seed)
    masks = (rng.random((n_windows, g.n_nodes)) < p) & g.is_detector
    window.defects[:] = masks[0]
    uf_decode(window, backend)
    out = []
    start = time.perf_counter()
    for m in masks:
        window.defects[:] = m
        out.append(uf_decode(window, backend))
    return time.perf_counter() - start, np.array(out)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--family", default="surface-circuit")
    ap.add_argument("--d", type=int, default=7)
    ap.add_argument("--p", type=float, default=3e-3)
    ap.add_argument("--rounds", type=int, default=2000)
    ap.add_argument("--windows", type=int, default=200)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    template = build_template(args.family, args.d)
    cfg = NoiseConfig(args.p, args.seed, template.family, template.d)
    rows = SheetSyndrome(template).many(sample_rounds(cfg, 0, args.rounds))

    print(f"{template.family} d={template.d} p={args.p:g}")
    results = {b: bench_snowflake(template, rows, b) for b in ("numba", "numpy")}
    same = all(np.array_equal(results["numba"][i], results["numpy"][i]) for i in (1, 2))
    for b, (sec, _, ts) in results.items():
        print(f"  snowflake {b:>5}: {sec:8.3f} s for {args.rounds} cycles "
              f"({args.rounds / sec:9.0f} cycles/s, mean {ts.mean():.2f} timesteps)")
    print(f"  snowflake backends agree: {same}")

    uf = {b: bench_uf(template, args.windows, 0.02, args.seed, b) for b in ("numba", "numpy")}
    for b, (sec, _) in uf.items():
        print(f"  uf        {b:>5}: {sec:8.3f} s for {args.windows} windows "
              f"({args.windows / sec:9.0f} windows/s)")
    print(f"  uf backends agree: {np.array_equal(uf['numba'][1], uf['numpy'][1])}")


if __name__ == "__main__":
    main()
