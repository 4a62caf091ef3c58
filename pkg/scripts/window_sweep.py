"""How the window width affects output size, speed and fidelity to the chain.

For each precision the same payloads are encoded; we report the expansion
ratio, encode speed, and the largest gap between an observed transition
frequency and its model probability.
"""

import argparse
import random
import time
from collections import Counter

from markovstego.codec import CodecConfig, encode, encode_fixed
from markovstego.fixture import fixture_model
from markovstego.textmodel import build_model_from_text


def transition_gap(model, precision, bits=20_000, seed=0):
    x = random.Random(seed).getrandbits(bits)
    path = [0] + encode_fixed(model, x, bits, precision=precision)
    pairs = Counter(zip(path, path[1:]))
    visits = Counter(path[:-1])
    return max(
        abs(pairs[(a, b)] / visits[a] - float(model.probability(a, b)))
        for (a, b) in model.edge_counts
        if visits[a] >= 50
    )


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("corpus", nargs="?", default=None,
                    help="text file; the nine-state example chain is used when omitted")
    ap.add_argument("--precisions", default="4,8,16,32,64")
    ap.add_argument("--size", type=int, default=4096)
    args = ap.parse_args(argv)

    if args.corpus:
        with open(args.corpus, encoding="utf-8", errors="replace") as f:
            model = build_model_from_text(f.read(), 1)
    else:
        model = fixture_model()
    data = random.Random(1).randbytes(args.size)

    print(f"{'k':>4} {'ratio':>7} {'enc kB/s':>9} {'max gap':>8}")
    for k in [int(p) for p in args.precisions.split(",")]:
        t0 = time.perf_counter()
        text = encode(model, data, CodecConfig(mode="windowed", precision=k), seed=0)
        dt = time.perf_counter() - t0
        ratio = len(text.rendering.encode()) / len(data)
        print(f"{k:>4} {ratio:>7.2f} {args.size / 1000 / dt:>9.2f} {transition_gap(model, k):>8.4f}")


if __name__ == "__main__":
    main()
