"""Expansion-ratio and throughput measurements."""

from __future__ import annotations

import random
import time
import zlib
from dataclasses import dataclass

from .codec import CodecConfig, decode, encode
from .textmodel import MarkovModel


@dataclass
class BenchRow:
    size: int
    encoded_bytes: int
    compressed_bytes: int
    encode_seconds: float
    decode_seconds: float
    roundtrip_ok: bool

    @property
    def ratio(self) -> float:
        return self.encoded_bytes / self.size if self.size else float("nan")

    @property
    def compressed_ratio(self) -> float:
        return self.compressed_bytes / self.size if self.size else float("nan")

    @property
    def encode_kbps(self) -> float:
        return self.size / 1000 / max(self.encode_seconds, 1e-9)

    @property
    def decode_kbps(self) -> float:
        return self.size / 1000 / max(self.decode_seconds, 1e-9)


def measure(model: MarkovModel, payload: bytes, config: CodecConfig, seed: int | None = 0) -> BenchRow:
    t0 = time.perf_counter()
    text = encode(model, payload, config, seed=seed)
    t1 = time.perf_counter()
    back = decode(model, text.rendering, config)
    t2 = time.perf_counter()
    raw = text.rendering.encode("utf-8")
    return BenchRow(
        size=len(payload),
        encoded_bytes=len(raw),
        compressed_bytes=len(zlib.compress(raw, 9)),
        encode_seconds=t1 - t0,
        decode_seconds=t2 - t1,
        roundtrip_ok=back == payload,
    )


def run_bench(
    model: MarkovModel, sizes, config: CodecConfig = CodecConfig(), seed: int = 0
) -> list[BenchRow]:
    """Encode and decode one random payload per size (uniform random bytes)."""
    rng = random.Random(seed)
    rows = []
    for size in sizes:
        payload = rng.randbytes(size)
        rows.append(measure(model, payload, config, seed=rng.randrange(1 << 32)))
    return rows


def format_table(rows: list[BenchRow]) -> str:
    header = (
        f"{'size':>8} {'encoded':>9} {'ratio':>6} {'deflated':>9} {'ratio':>6} "
        f"{'enc kB/s':>9} {'dec kB/s':>9} {'ok':>3}"
    )
    lines = [header]
    for r in rows:
        lines.append(
            f"{r.size:>8} {r.encoded_bytes:>9} {r.ratio:>6.2f} {r.compressed_bytes:>9} "
            f"{r.compressed_ratio:>6.2f} {r.encode_kbps:>9.2f} {r.decode_kbps:>9.2f} "
            f"{'yes' if r.roundtrip_ok else 'NO':>3}"
        )
    return "\n".join(lines)
