"""Expansion ratio, deflated ratio and throughput for order-1 and order-2 models.

    python scripts/expansion_ratios.py /tmp/corpus/kjv3mb.txt --sizes 10240,20480,40960
"""

import argparse
import time

from markovstego.bench import format_table, run_bench
from markovstego.codec import CodecConfig
from markovstego.textmodel import build_model_from_text


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("corpus")
    ap.add_argument("--sizes", default="10240,20480,40960")
    ap.add_argument("--mode", choices=("exact", "windowed"), default="exact")
    ap.add_argument("--precision", type=int, default=32)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    with open(args.corpus, encoding="utf-8", errors="replace") as f:
        text = f.read()
    sizes = [int(s) for s in args.sizes.split(",")]
    config = CodecConfig(mode=args.mode, precision=args.precision)
    for order in (1, 2):
        t0 = time.perf_counter()
        model = build_model_from_text(text, order)
        print(f"\norder {order}: {len(model.states):,} states, {len(model.edge_counts):,} edges, "
              f"built in {time.perf_counter() - t0:.1f}s")
        rows = run_bench(model, sizes, config, seed=args.seed)
        print(format_table(rows))
        plain = sum(r.encoded_bytes for r in rows) / sum(r.size for r in rows)
        packed = sum(r.compressed_bytes for r in rows) / sum(r.size for r in rows)
        print(f"overall ratio {plain:.2f}, deflated {packed:.2f}")


if __name__ == "__main__":
    main()
