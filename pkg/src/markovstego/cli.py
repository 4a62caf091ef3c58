"""Command-line interface: build-model, encode, decode, bench, selftest."""

from __future__ import annotations

import argparse
import json
import os
import sys
import textwrap
import time

from . import bench
from .codec import CodecConfig, decode, encode, encode_fixed
from .errors import (
    ConfigMismatch,
    DecodeError,
    DegenerateModel,
    MalformedModelFile,
    PayloadTooLarge,
)
from .fixture import REFERENCE_ROWS, fixture_model, names
from .textmodel import build_model_from_text, load_model, save_model

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_CONFIG = 4
EXIT_DECODE = 5
EXIT_MODEL = 6
EXIT_PAYLOAD = 7

MANIFEST_SUFFIX = ".manifest.json"


def read_text(path: str) -> str:
    raw = sys.stdin.buffer.read() if path == "-" else open(path, "rb").read()
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError:
        return raw.decode("latin-1")


def read_bytes(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as f:
        return f.read()


def write_bytes(path: str | None, data: bytes) -> None:
    if path is None or path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    else:
        with open(path, "wb") as f:
            f.write(data)


def wrap(text: str, cols: int) -> str:
    if cols <= 0:
        return text
    # Never split inside a hyphenated word: the pieces would tokenize differently.
    return textwrap.fill(text, cols, break_long_words=False, break_on_hyphens=False)


def _config_from_args(args) -> CodecConfig:
    return CodecConfig(header_bits=args.header_bits, mode=args.mode, precision=args.precision)


def cmd_build_model(args) -> int:
    t0 = time.perf_counter()
    model = build_model_from_text(read_text(args.corpus), args.order)
    save_model(model, args.output)
    print(
        f"wrote {args.output}: order {model.order}, {len(model.states)} states, "
        f"{len(model.edge_counts)} edges in {time.perf_counter() - t0:.1f}s",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_encode(args) -> int:
    model = load_model(args.model)
    config = _config_from_args(args)
    text = encode(model, read_bytes(args.input), config, seed=args.seed)
    write_bytes(args.output, (wrap(text.rendering, args.wrap) + "\n").encode("utf-8"))
    if args.manifest:
        if args.output in (None, "-"):
            raise ConfigMismatch("--manifest needs an output file (-o)")
        with open(args.output + MANIFEST_SUFFIX, "w") as f:
            json.dump(config.manifest(model), f, indent=2, sort_keys=True)
    return EXIT_OK


def cmd_decode(args) -> int:
    model = load_model(args.model)
    config = _config_from_args(args)
    manifest_path = args.manifest
    if manifest_path is None and args.input != "-" and os.path.exists(args.input + MANIFEST_SUFFIX):
        manifest_path = args.input + MANIFEST_SUFFIX
    if manifest_path is not None:
        with open(manifest_path) as f:
            config = CodecConfig.from_manifest(json.load(f))
    write_bytes(args.output, decode(model, read_text(args.input), config))
    return EXIT_OK


def cmd_bench(args) -> int:
    model = load_model(args.model)
    config = _config_from_args(args)
    sizes = [int(s) for s in args.sizes.split(",")]
    rows = bench.run_bench(model, sizes, config, seed=args.seed or 0)
    print(json.dumps(config.manifest(model)))
    print(bench.format_table(rows))
    return EXIT_OK if all(r.roundtrip_ok for r in rows) else EXIT_FAILED


def cmd_selftest(args) -> int:
    ok = True
    fixture = fixture_model()
    mismatches = [
        bits for bits, n, expected in REFERENCE_ROWS
        if names(encode_fixed(fixture, int(bits, 2), n)) != expected
    ]
    ok &= not mismatches
    print(f"table replay: {len(REFERENCE_ROWS) - len(mismatches)}/{len(REFERENCE_ROWS)} rows", "ok" if not mismatches else "FAIL")

    models = [("fixture", fixture)]
    if args.model:
        models.append((args.model, load_model(args.model)))
    config = _config_from_args(args)
    for label, model in models:
        rows = bench.run_bench(model, [0, 1, 7, 64, 512], config, seed=args.seed or 0)
        good = all(r.roundtrip_ok for r in rows)
        ok &= good
        print(f"round trip on {label} ({config.mode}): {'ok' if good else 'FAIL'}")
    return EXIT_OK if ok else EXIT_FAILED


def _add_codec_flags(p):
    p.add_argument("--header-bits", type=int, default=32, metavar="N")
    p.add_argument("--mode", choices=("exact", "windowed"), default="exact")
    p.add_argument("--precision", type=int, default=32, metavar="K",
                   help="window width in bits for --mode windowed")
    p.add_argument("--seed", type=int, default=None, metavar="N")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="markovstego", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-model", help="build a Markov model file from a text corpus")
    p.add_argument("corpus")
    p.add_argument("--order", type=int, choices=(1, 2), default=1)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_build_model)

    p = sub.add_parser("encode", help="hide a file in generated text")
    p.add_argument("model")
    p.add_argument("input", nargs="?", default="-")
    p.add_argument("-o", "--output", default=None)
    p.add_argument("--wrap", type=int, default=80, metavar="COLS")
    p.add_argument("--manifest", action="store_true",
                   help="write OUTPUT.manifest.json with the model digest and settings")
    _add_codec_flags(p)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="recover a file from generated text")
    p.add_argument("model")
    p.add_argument("input", nargs="?", default="-")
    p.add_argument("-o", "--output", default=None)
    p.add_argument("--manifest", default=None, metavar="PATH",
                   help="settings file (default: INPUT.manifest.json when present)")
    _add_codec_flags(p)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("bench", help="measure expansion ratio and throughput")
    p.add_argument("model")
    p.add_argument("--sizes", default="10240,20480,40960")
    _add_codec_flags(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("selftest", help="replay the reference table and run round trips")
    p.add_argument("model", nargs="?", default=None)
    _add_codec_flags(p)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigMismatch as e:
        print(f"error: configuration mismatch: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except DecodeError as e:
        print(f"error: cannot decode: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_DECODE
    except DegenerateModel as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_MODEL
    except MalformedModelFile as e:
        print(f"error: bad model file: {e}", file=sys.stderr)
        return EXIT_MODEL
    except PayloadTooLarge as e:
        print(f"error: {e}; raise --header-bits", file=sys.stderr)
        return EXIT_PAYLOAD
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
