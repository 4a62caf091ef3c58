"""The nine-state example chain and its table of reference encodings.

Only two of the chain's distributions are stated outright: start -> s1/s2 at
1/2 each and s2 -> s4/s5 at 1/4 and 3/4. The s1, s4 and s5 splits below were
reconstructed: they are the values under which the default apportionment rule
replays every row of :data:`REFERENCE_ROWS` exactly, and they also give the path
[s1, s4, s7] a probability of 0.5 * 0.75 * 0.75 = 0.28125 (quoted as 0.28).
They are a consistent reconstruction, not known originals.
"""

from __future__ import annotations

from .textmodel import START, MarkovModel

STATE_NAMES = ("start", "s1", "s2", "s3", "s4", "s5", "s6", "s7", "s8")

# (from, to): count. Counts are per-state denominators of the probabilities.
FIXTURE_EDGES = {
    ("start", "s1"): 1, ("start", "s2"): 1,
    ("s1", "s3"): 1, ("s1", "s4"): 3,
    ("s2", "s4"): 1, ("s2", "s5"): 3,
    ("s4", "s6"): 1, ("s4", "s7"): 3,
    ("s5", "s7"): 1, ("s5", "s8"): 4,
    ("s3", "start"): 1, ("s6", "start"): 1, ("s7", "start"): 1, ("s8", "start"): 1,
}


def fixture_model() -> MarkovModel:
    index = {name: i for i, name in enumerate(STATE_NAMES)}
    states = (START, *STATE_NAMES[1:])
    edges = {(index[a], index[b]): c for (a, b), c in FIXTURE_EDGES.items()}
    return MarkovModel(order=1, states=states, edge_counts=edges)


def fixture_corpus() -> str:
    """A 40-sentence corpus whose maximum-likelihood chain has the fixture's probabilities."""
    sentences = (
        ["s1 s3"] * 5
        + ["s1 s4 s6"] * 5
        + ["s1 s4 s7"] * 10
        + ["s2 s4 s7"] * 5
        + ["s2 s5 s7"] * 3
        + ["s2 s5 s8"] * 12
    )
    return " ".join(s + "." for s in sentences)


def names(states) -> list[str]:
    return [STATE_NAMES[s] for s in states]


def ids(names_) -> list[int]:
    return [STATE_NAMES.index(n) for n in names_]


_REFERENCE_ROWS_TEXT = """
0 s1
1 s2
00 s1 s3
01 s1 s4
10 s2 s4
11 s2 s5
000 s1 s3
001 s1 s4 s6
010 s1 s4 s7 start s1
011 s1 s4 s7 start s2
100 s2 s4
101 s2 s5 s7
110 s2 s5 s8 start s1
111 s2 s5 s8 start s2
0000 s1 s3 start s1
0001 s1 s3 start s2
0010 s1 s4 s6 start s1
0011 s1 s4 s6 start s2
0100 s1 s4 s7 start s1 s3
0101 s1 s4 s7 start s1 s4
0110 s1 s4 s7 start s2 s4
0111 s1 s4 s7 start s2 s5
1000 s2 s4 s6
1001 s2 s4 s7
1010 s2 s5 s7
1011 s2 s5 s8 start s1 s3
1100 s2 s5 s8 start s1 s4 s6
1101 s2 s5 s8 start s1 s4 s7
1110 s2 s5 s8 start s2 s4
1111 s2 s5 s8 start s2 s5
00000 s1 s3 start s1 s3
11111 s2 s5 s8 start s2 s5 s8 start s2
"""


def reference_rows() -> list[tuple[str, int, list[str]]]:
    """All 32 reference rows as ``(bits, n, expected state names)``."""
    rows = []
    for line in _REFERENCE_ROWS_TEXT.strip().splitlines():
        bits, *path = line.split()
        rows.append((bits, len(bits), path))
    return rows


REFERENCE_ROWS = reference_rows()


def load_fixture_file() -> MarkovModel:
    """The same chain, read from the canonical model file shipped with the package."""
    from importlib.resources import files

    from .textmodel import deserialize_model

    return deserialize_model(files("markovstego").joinpath("data/fixture.mksm").read_bytes())
