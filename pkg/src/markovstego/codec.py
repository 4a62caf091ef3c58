"""Hiding bits in a walk over the chain, and reading them back.

Fixed-size coding treats the data as one big-endian number in ``[0, 2**n - 1]``
and repeatedly partitions the current range among the outbound states of the
current state. The emitted states are the path to the subrange holding the
number, and coding stops as soon as that subrange holds a single number.

Variable-size coding prefixes the payload with an ``m``-bit header holding the
payload length in bits, stored least-significant bit first. The payload walk
continues from the last header state. A random sentence tail closes the text
with a period; decoding ignores it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace

from .errors import (
    BadHeader,
    ConfigMismatch,
    DecodeError,
    PayloadTooLarge,
    StateNotInPartition,
    TextExhausted,
    UnknownWord,
)
from .partition import Split, _outbound_or_raise
from .textmodel import START_ID, MarkovModel, tokenize
from .window import DEFAULT_PRECISION, BitCursor, WindowedRange, flush_converged

DEFAULT_HEADER_BITS = 32
DEFAULT_MAX_PADDING = 50


@dataclass(frozen=True)
class CodecConfig:
    """Settings both parties must share, besides the model itself."""

    header_bits: int = DEFAULT_HEADER_BITS
    mode: str = "exact"
    precision: int = DEFAULT_PRECISION
    start: int = START_ID
    model_digest: str | None = None

    def __post_init__(self):
        if self.header_bits < 1:
            raise ValueError("header_bits must be >= 1")
        if self.mode not in ("exact", "windowed"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.precision < 2:
            raise ValueError("precision must be >= 2")

    @property
    def window_bits(self) -> int | None:
        """Precision handed to the fixed-size coder (None means exact)."""
        return self.precision if self.mode == "windowed" else None

    def check(self, model: MarkovModel) -> None:
        if self.model_digest is not None and self.model_digest != model.digest:
            raise ConfigMismatch(
                f"model digest {model.digest[:16]}... does not match the "
                f"configured {self.model_digest[:16]}..."
            )
        if not 0 <= self.start < len(model.states):
            raise ConfigMismatch(f"start state {self.start} is not in the model")

    def manifest(self, model: MarkovModel) -> dict:
        return {
            "model_digest": model.digest,
            "header_bits": self.header_bits,
            "mode": self.mode,
            "precision": self.precision,
            "start": self.start,
        }

    @classmethod
    def from_manifest(cls, manifest: dict) -> "CodecConfig":
        return cls(
            header_bits=int(manifest["header_bits"]),
            mode=manifest["mode"],
            precision=int(manifest["precision"]),
            start=int(manifest.get("start", START_ID)),
            model_digest=manifest.get("model_digest"),
        )


@dataclass(frozen=True)
class StegoText:
    states: tuple[int, ...]
    rendering: str = field(repr=False)

    def __str__(self):
        return self.rendering


# -- fixed-size coding --------------------------------------------------------


def _as_number(data, n: int) -> int:
    if isinstance(data, (bytes, bytearray, memoryview)):
        data = bytes(data)
        if 8 * len(data) < n:
            raise ValueError(f"{len(data)} bytes cannot supply {n} bits")
        return int.from_bytes(data, "big") >> (8 * len(data) - n)
    if data < 0 or data >> n:
        raise ValueError(f"{data} does not fit in {n} bits")
    return data


def _as_cursor(data, n: int) -> BitCursor:
    if isinstance(data, (bytes, bytearray, memoryview)):
        return BitCursor(bytes(data), n)
    return BitCursor.from_int(data, n)


def encode_fixed(
    model: MarkovModel, data, n: int, start: int = START_ID, precision: int | None = None
) -> list[int]:
    """Encode the n-bit number ``data`` (an int, or the leading bits of a bytes
    object) as a list of state ids. ``precision=None`` selects exact arithmetic.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if precision is None:
        return _encode_exact(model, _as_number(data, n), n, start)
    return _encode_windowed(model, _as_cursor(data, n), n, start, precision)


def _encode_exact(model, x, n, start):
    lo, length = 0, 1 << n
    s = start
    out = []
    while length > 1:
        ob = _outbound_or_raise(model, s)
        if len(ob) == 1:
            s = ob.targets[0]
        else:
            split = Split(ob, length)
            i = split.locate(x - lo)
            lo += split.offset(i)
            length = split.allocation(i)
            s = ob.targets[i]
        out.append(s)
    return out


def _encode_windowed(model, source: BitCursor, n, start, precision):
    if precision < 2:
        raise ValueError("precision must be >= 2")
    wr = WindowedRange.initial(n, precision)
    x = source.read(wr.width)
    s = start
    out = []
    while not wr.converged:
        ob = _outbound_or_raise(model, s)
        if len(ob) == 1:
            s = ob.targets[0]
            out.append(s)
            continue
        split = Split(ob, wr.hi - wr.lo + 1)
        i = split.locate(x - wr.lo)
        lo = wr.lo + split.offset(i)
        wr = replace(wr, lo=lo, hi=lo + split.allocation(i) - 1)
        s = ob.targets[i]
        out.append(s)

        refilled = flush_converged(wr, precision)
        keep = wr.width - (refilled.flushed - wr.flushed)
        if keep < wr.width:
            assert x >> keep == wr.lo >> keep, "flushed bits diverged from the input"
            fresh = refilled.width - keep
            x = ((x & ((1 << keep) - 1)) << fresh) | source.read(fresh)
        wr = refilled
    return out


def decode_fixed_prefix(
    model: MarkovModel, states, n: int, start: int = START_ID, precision: int | None = None
) -> tuple[int, int]:
    """Decode an n-bit number; also return how many states were consumed.

    States after the point where the range converges are never looked at.
    """
    if precision is None:
        return _decode_exact(model, states, n, start)
    return _decode_windowed(model, states, n, start, precision)


def decode_fixed(
    model: MarkovModel, states, n: int, start: int = START_ID, precision: int | None = None
) -> int:
    return decode_fixed_prefix(model, states, n, start, precision)[0]


def _transition(model, s, nxt, position):
    ob = _outbound_or_raise(model, s)
    i = ob.index.get(nxt)
    if i is None:
        raise StateNotInPartition(
            f"state {position}: {model.states[nxt]!r} cannot follow {model.states[s]!r}"
        )
    return ob, i


def _decode_exact(model, states, n, start):
    lo, length = 0, 1 << n
    s = start
    used = 0
    while length > 1:
        if used == len(states):
            raise TextExhausted(f"text ended after {used} states with the range unresolved")
        nxt = states[used]
        ob, i = _transition(model, s, nxt, used)
        if len(ob) > 1:
            split = Split(ob, length)
            a = split.allocation(i)
            if a == 0:
                raise StateNotInPartition(
                    f"state {used}: {model.states[nxt]!r} has an empty subrange here"
                )
            lo += split.offset(i)
            length = a
        s = nxt
        used += 1
    return lo, used


def _decode_windowed(model, states, n, start, precision):
    if precision < 2:
        raise ValueError("precision must be >= 2")
    wr = WindowedRange.initial(n, precision)
    sink = BitCursor()
    s = start
    used = 0
    while not wr.converged:
        if used == len(states):
            raise TextExhausted(f"text ended after {used} states with the range unresolved")
        nxt = states[used]
        ob, i = _transition(model, s, nxt, used)
        if len(ob) > 1:
            split = Split(ob, wr.hi - wr.lo + 1)
            a = split.allocation(i)
            if a == 0:
                raise StateNotInPartition(
                    f"state {used}: {model.states[nxt]!r} has an empty subrange here"
                )
            lo = wr.lo + split.offset(i)
            wr = flush_converged(replace(wr, lo=lo, hi=lo + a - 1), precision, sink)
        s = nxt
        used += 1
    return sink.to_int(), used


# -- rendering -----------------------------------------------------------------


def detokenize(model: MarkovModel, states) -> str:
    """Join words with spaces; each start state becomes a period on the preceding word."""
    words: list[str] = []
    for s in states:
        if s == START_ID:
            if words and not words[-1].endswith("."):
                words[-1] += "."
        else:
            words.append(model.word(s))
    if words and not words[-1].endswith("."):
        words[-1] += "."
    return " ".join(words)


def text_to_states(model: MarkovModel, text: str) -> list[int]:
    """Map rendered text back to state ids.

    A start state follows every sentence. The final sentence's period is
    ambiguous (rendering adds one even without a start state), so its start
    state is only included when the model allows it.
    """
    index = model.state_index
    states: list[int] = []
    for sentence in tokenize(text):
        prev = model.states[START_ID]
        for token in sentence:
            name = token if model.order == 1 else f"{prev} {token}"
            sid = index.get(name)
            if sid is None:
                raise UnknownWord(f"{name!r} is not a state of this model")
            states.append(sid)
            prev = token
        states.append(START_ID)
    if states and model.probability(states[-2], START_ID) == 0:
        states.pop()
    return states


def random_text(
    model: MarkovModel,
    start: int,
    seed: int | None = None,
    max_states: int = DEFAULT_MAX_PADDING,
    rng: random.Random | None = None,
) -> list[int]:
    """Random walk from ``start`` until the start state is reached.

    A random step is only taken if every possible successor can still get
    back to start within ``max_states`` states; otherwise the walk follows
    the shortest path home. The result therefore has at most
    ``max(max_states, distance(start))`` states. The starting state itself is
    not included.
    """
    rng = rng if rng is not None else random.Random(seed)
    dist = model.distance_to_start
    hop = model.next_hop_to_start
    out: list[int] = []
    s = start
    while True:
        ob = _outbound_or_raise(model, s)
        home = [t for t in ob.targets if dist[t] is not None]
        if home and len(out) + 1 + max(dist[t] for t in home) > max_states:
            s = hop[s] if s != START_ID else min(home, key=lambda t: (dist[t], t))
            out.append(s)
            while s != START_ID:
                s = hop[s]
                out.append(s)
            return out
        s = rng.choices(ob.targets, cum_weights=ob.cumulative[1:])[0]
        out.append(s)
        if s == START_ID:
            return out


# -- variable-size framing ------------------------------------------------------


def _reverse_bits(value: int, width: int) -> int:
    return int(format(value, f"0{width}b")[::-1], 2)


def header_value(n_bits: int, m: int) -> int:
    """The m-bit number whose most significant bit is bit 0 of ``n_bits``."""
    if n_bits >> m:
        raise PayloadTooLarge(f"{n_bits} bits does not fit a {m}-bit header")
    return _reverse_bits(n_bits, m)


def encode(
    model: MarkovModel,
    data: bytes,
    config: CodecConfig = CodecConfig(),
    seed: int | None = None,
    max_padding: int = DEFAULT_MAX_PADDING,
) -> StegoText:
    config.check(model)
    data = bytes(data)
    n = 8 * len(data)
    m = config.header_bits
    if n >> m:
        raise PayloadTooLarge(f"payload of {n} bits needs more than {m} header bits")
    precision = config.window_bits

    head = encode_fixed(model, header_value(n, m), m, config.start, precision)
    body = encode_fixed(model, data, n, head[-1], precision) if n else []
    last = (body or head)[-1]
    tail = random_text(model, last, seed, max_padding) if last != START_ID else []
    states = head + body + tail
    return StegoText(tuple(states), detokenize(model, states))


def decode(model: MarkovModel, text, config: CodecConfig = CodecConfig()) -> bytes:
    """Recover the payload from a StegoText, rendered text, or list of state ids."""
    config.check(model)
    if isinstance(text, StegoText):
        states = list(text.states)
    elif isinstance(text, str):
        states = text_to_states(model, text)
    else:
        states = list(text)
    m = config.header_bits
    precision = config.window_bits

    header, used = decode_fixed_prefix(model, states, m, config.start, precision)
    n = _reverse_bits(header, m)
    if n % 8:
        raise BadHeader(f"header announces {n} bits, not a whole number of bytes")
    if n == 0:
        return b""
    rest = states[used:]
    if n > len(rest) * model.max_bits_per_state:
        raise TextExhausted(f"header announces {n} bits but only {len(rest)} states follow")
    value, _ = decode_fixed_prefix(model, rest, n, states[used - 1], precision)
    return value.to_bytes(n // 8, "big")


__all__ = [
    "CodecConfig",
    "DecodeError",
    "StegoText",
    "decode",
    "decode_fixed",
    "decode_fixed_prefix",
    "detokenize",
    "encode",
    "encode_fixed",
    "header_value",
    "random_text",
    "text_to_states",
]
