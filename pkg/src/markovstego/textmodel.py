"""Corpus tokenization and the word-level Markov chain shared by both parties.

States are plain strings. The start state (``START``) marks both the start and
the end of a sentence and always has id 0; every other state follows in strict
lexicographic order. Bigram states are the two words joined by one space.
Transition weights are kept as integer counts so that every probability is an
exact rational.
"""

from __future__ import annotations

import hashlib
import re
import struct
from collections import Counter, deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DegenerateModel, MalformedModelFile

START = "<s>"
START_ID = 0

MAGIC = b"MKSM"
FORMAT_VERSION = 1

_SENTENCE_END = re.compile(r"[.!?]")


def _clean_token(raw: str) -> str:
    kept = "".join(ch for ch in raw if ch.isalnum() or ch in "'-")
    return kept.strip("-")


def tokenize(corpus: str) -> list[list[str]]:
    """Split text into sentences of tokens.

    Sentences end at ``.``, ``!`` or ``?``; tokens are whitespace separated.
    Only letters, digits, apostrophes and internal hyphens survive. Case is
    preserved and empty tokens/sentences are dropped.

    >>> tokenize("a b? a!")
    [['a', 'b'], ['a']]
    """
    sentences = []
    for chunk in _SENTENCE_END.split(corpus):
        tokens = [t for t in map(_clean_token, chunk.split()) if t]
        if tokens:
            sentences.append(tokens)
    return sentences


@dataclass(frozen=True)
class Outbound:
    """Outbound transitions of one state, in canonical target order."""

    targets: tuple[int, ...]
    counts: tuple[int, ...]
    total: int
    cumulative: tuple[int, ...]  # len(targets) + 1 prefix sums of counts
    index: Mapping[int, int]
    counts_array: np.ndarray

    def __len__(self):
        return len(self.targets)

    def probability(self, target: int) -> Fraction:
        i = self.index.get(target)
        if i is None:
            return Fraction(0)
        return Fraction(self.counts[i], self.total)


@dataclass(frozen=True, eq=False)
class MarkovModel:
    """Maximum-likelihood Markov chain over words (order 1) or word pairs (order 2).

    ``edge_counts`` maps ``(from_id, to_id)`` to a positive occurrence count.
    Instances are immutable; derived tables are computed lazily and cached.
    """

    order: int
    states: tuple[str, ...]
    edge_counts: Mapping[tuple[int, int], int]

    def __post_init__(self):
        if self.order not in (1, 2):
            raise ValueError(f"order must be 1 or 2, got {self.order}")
        if not self.states or self.states[0] != START:
            raise ValueError("state list must begin with the start state")
        rest = self.states[1:]
        if START in rest:
            raise ValueError("the start marker appears twice in the state list")
        if any(a >= b for a, b in zip(rest, rest[1:])):
            raise ValueError("states are not in canonical order")
        n = len(self.states)
        for (a, b), c in self.edge_counts.items():
            if not (0 <= a < n and 0 <= b < n):
                raise ValueError(f"edge ({a}, {b}) refers to an unknown state")
            if c <= 0:
                raise ValueError(f"edge ({a}, {b}) has non-positive count {c}")

    def __eq__(self, other):
        if not isinstance(other, MarkovModel):
            return NotImplemented
        return (
            self.order == other.order
            and self.states == other.states
            and dict(self.edge_counts) == dict(other.edge_counts)
        )

    def __hash__(self):
        return hash(self.digest)

    def __repr__(self):
        return (
            f"MarkovModel(order={self.order}, states={len(self.states)}, "
            f"edges={len(self.edge_counts)})"
        )

    @cached_property
    def state_index(self) -> dict[str, int]:
        return {s: i for i, s in enumerate(self.states)}

    @cached_property
    def _outbound(self) -> list[Outbound | None]:
        per_state: list[list[tuple[int, int]]] = [[] for _ in self.states]
        for (a, b), c in sorted(self.edge_counts.items()):
            per_state[a].append((b, c))
        table = []
        for edges in per_state:
            if not edges:
                table.append(None)
                continue
            targets = tuple(b for b, _ in edges)
            counts = tuple(c for _, c in edges)
            cum = [0]
            for c in counts:
                cum.append(cum[-1] + c)
            table.append(
                Outbound(
                    targets=targets,
                    counts=counts,
                    total=cum[-1],
                    cumulative=tuple(cum),
                    index={b: i for i, b in enumerate(targets)},
                    counts_array=np.array(counts, dtype=np.int64),
                )
            )
        return table

    def outbound(self, state: int) -> Outbound | None:
        return self._outbound[state]

    @cached_property
    def out_totals(self) -> dict[int, int]:
        return {s: ob.total for s, ob in enumerate(self._outbound) if ob is not None}

    def probability(self, src: int, dst: int) -> Fraction:
        ob = self._outbound[src]
        return Fraction(0) if ob is None else ob.probability(dst)

    def word(self, state: int) -> str:
        """The surface word a state contributes to rendered text."""
        name = self.states[state]
        if self.order == 2 and state != START_ID:
            return name.split(" ", 1)[1]
        return name

    @cached_property
    def _paths_to_start(self) -> tuple[list[int | None], list[int | None]]:
        preds: list[list[int]] = [[] for _ in self.states]
        for a, b in sorted(self.edge_counts):
            preds[b].append(a)
        hop: list[int | None] = [None] * len(self.states)
        dist: list[int | None] = [None] * len(self.states)
        dist[START_ID] = 0
        queue = deque([START_ID])
        while queue:
            b = queue.popleft()
            for a in preds[b]:
                if dist[a] is None:
                    dist[a] = dist[b] + 1
                    hop[a] = b
                    queue.append(a)
        return hop, dist

    @property
    def next_hop_to_start(self) -> list[int | None]:
        """For each state, its successor on a shortest path back to start."""
        return self._paths_to_start[0]

    @property
    def distance_to_start(self) -> list[int | None]:
        return self._paths_to_start[1]

    @cached_property
    def max_bits_per_state(self) -> int:
        """Upper bound on the bits of range a single emitted state can resolve."""
        biggest = max((t for t in self.out_totals.values()), default=1)
        return biggest.bit_length() + 2

    @cached_property
    def digest(self) -> str:
        return hashlib.sha256(serialize_model(self)).hexdigest()


def _state_sequences(sentences: Iterable[Sequence[str]], order: int):
    for sentence in sentences:
        if order == 1:
            yield [START, *sentence, START]
        else:
            padded = [START, *sentence]
            pairs = [f"{a} {b}" for a, b in zip(padded, padded[1:])]
            yield [START, *pairs, START]


def build_model(sentences: Sequence[Sequence[str]], order: int = 1) -> MarkovModel:
    """Count adjacent state pairs, with start prepended and appended to each sentence."""
    if order not in (1, 2):
        raise ValueError(f"order must be 1 or 2, got {order}")
    if not sentences:
        raise DegenerateModel("corpus contains no sentences")
    for sentence in sentences:
        for token in sentence:
            if not token or token == START or _SENTENCE_END.search(token) or token.split() != [token]:
                raise ValueError(f"invalid token {token!r}")

    pair_counts: Counter[tuple[str, str]] = Counter()
    names = {START}
    for seq in _state_sequences(sentences, order):
        names.update(seq)
        pair_counts.update(zip(seq, seq[1:]))

    states = (START, *sorted(names - {START}))
    index = {s: i for i, s in enumerate(states)}
    edges = {(index[a], index[b]): c for (a, b), c in pair_counts.items()}
    model = MarkovModel(order=order, states=states, edge_counts=edges)
    start_out = model.outbound(START_ID)
    if start_out is None or len(start_out) < 2:
        raise DegenerateModel(
            "the start state has fewer than two outbound states; the corpus needs "
            "at least two distinct sentence-initial words"
        )
    return model


def build_model_from_text(corpus: str, order: int = 1) -> MarkovModel:
    return build_model(tokenize(corpus), order)


# -- serialization -----------------------------------------------------------
#
# MKSM | version u16 | order u8 | nstates u64 | nstates x (len u32, utf-8)
#      | nedges u64 | nedges x (from u64, to u64, count u64) sorted by (from, to)
#      | nstates x out_total u64
# All integers little-endian.


def serialize_model(model: MarkovModel) -> bytes:
    parts = [MAGIC, struct.pack("<HBQ", FORMAT_VERSION, model.order, len(model.states))]
    for name in model.states:
        raw = name.encode("utf-8")
        parts.append(struct.pack("<I", len(raw)))
        parts.append(raw)
    edges = sorted(model.edge_counts.items())
    parts.append(struct.pack("<Q", len(edges)))
    parts.extend(struct.pack("<QQQ", a, b, c) for (a, b), c in edges)
    totals = model.out_totals
    parts.extend(struct.pack("<Q", totals.get(s, 0)) for s in range(len(model.states)))
    return b"".join(parts)


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, fmt: str, what: str):
        size = struct.calcsize(fmt)
        if self.pos + size > len(self.data):
            raise MalformedModelFile(f"truncated while reading {what}", self.pos)
        values = struct.unpack_from(fmt, self.data, self.pos)
        self.pos += size
        return values

    def raw(self, size: int, what: str) -> bytes:
        if self.pos + size > len(self.data):
            raise MalformedModelFile(f"truncated while reading {what}", self.pos)
        chunk = self.data[self.pos:self.pos + size]
        self.pos += size
        return chunk


def deserialize_model(data: bytes) -> MarkovModel:
    r = _Reader(bytes(data))
    if r.raw(4, "magic") != MAGIC:
        raise MalformedModelFile("bad magic, not a model file", 0)
    version, order, nstates = r.take("<HBQ", "header")
    if version != FORMAT_VERSION:
        raise MalformedModelFile(f"unsupported format version {version}", 4)
    if order not in (1, 2):
        raise MalformedModelFile(f"invalid order {order}", 6)
    # Each state needs at least its 4-byte length prefix.
    if nstates < 1 or nstates * 4 > len(data):
        raise MalformedModelFile(f"implausible state count {nstates}", 7)

    states = []
    for i in range(nstates):
        pos = r.pos
        (length,) = r.take("<I", f"length of state {i}")
        try:
            name = r.raw(length, f"state {i}").decode("utf-8")
        except UnicodeDecodeError:
            raise MalformedModelFile(f"state {i} is not valid UTF-8", pos) from None
        if (i == 0) != (name == START):
            raise MalformedModelFile(f"start marker misplaced at state {i}", pos)
        if i > 1 and name <= states[-1]:
            raise MalformedModelFile(f"state {i} breaks canonical order", pos)
        states.append(name)

    (nedges,) = r.take("<Q", "edge count")
    if nedges * 24 > len(data) - r.pos:
        raise MalformedModelFile(f"implausible edge count {nedges}", r.pos - 8)
    edges = {}
    prev = None
    for _ in range(nedges):
        pos = r.pos
        a, b, c = r.take("<QQQ", "edge")
        if a >= nstates or b >= nstates:
            raise MalformedModelFile(f"edge ({a}, {b}) refers to an unknown state", pos)
        if c == 0:
            raise MalformedModelFile(f"edge ({a}, {b}) has zero count", pos)
        if prev is not None and (a, b) <= prev:
            raise MalformedModelFile("edges are not strictly sorted", pos)
        prev = (a, b)
        edges[(a, b)] = c

    sums = [0] * nstates
    for (a, _), c in edges.items():
        sums[a] += c
    for s in range(nstates):
        pos = r.pos
        (total,) = r.take("<Q", f"out total of state {s}")
        if total != sums[s]:
            raise MalformedModelFile(
                f"out total of state {s} is {total} but its edges sum to {sums[s]}", pos
            )
    if r.pos != len(data):
        raise MalformedModelFile("trailing bytes after model", r.pos)

    return MarkovModel(order=order, states=tuple(states), edge_counts=edges)


def load_model(path) -> MarkovModel:
    with open(path, "rb") as f:
        return deserialize_model(f.read())


def save_model(model: MarkovModel, path) -> None:
    with open(path, "wb") as f:
        f.write(serialize_model(model))
