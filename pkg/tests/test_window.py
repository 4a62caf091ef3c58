import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from markovstego.codec import decode_fixed, encode_fixed
from markovstego.fixture import ids
from markovstego.partition import NatRange
from markovstego.textmodel import START, MarkovModel
from markovstego.window import BitCursor, WindowedRange, expand, flush_converged, subranges_fast

from oracles import naive_encode, naive_subranges

THIRTY_SEVENTY = MarkovModel(1, (START, "s1", "s2"), {(0, 1): 3, (0, 2): 7, (1, 0): 1, (2, 0): 1})


def test_expand_examples():
    assert expand(NatRange(0b01, 0b10), 2, 4) == NatRange(0b0100, 0b1011)
    assert expand(NatRange(0b101, 0b101), 3, 5) == NatRange(0b10100, 0b10111)
    for m in range(1, 6):
        for n in range(m, 12):
            assert expand(NatRange.bits(m), m, n) == NatRange.bits(n)
    with pytest.raises(ValueError):
        expand(NatRange(0, 1), 3, 2)


def test_expand_is_prefix_faithful_and_monotone():
    for m in range(1, 9):
        size = 1 << m
        for n in range(m, 17):
            shift = n - m
            prev_hi = -1
            for lo in range(size):
                r = expand(NatRange(lo, lo), m, n)
                assert r.lo >> shift == lo and r.hi >> shift == lo
                assert r.lo == prev_hi + 1  # adjacent short values tile the long range
                prev_hi = r.hi
            assert prev_hi == (1 << n) - 1


def test_four_bit_window_split():
    wr = WindowedRange.initial(100, 4)
    got = [(s, tuple(r)) for s, r in subranges_fast(THIRTY_SEVENTY, 0, wr, 4)]
    assert got == [(1, (0b0000, 0b0100)), (2, (0b0101, 0b1111))]


def test_eight_bit_window_split_follows_largest_remainder():
    # 0.3 * 256 = 76.8 and 0.7 * 256 = 179.2: floors 76/179, the spare unit goes to s1.
    wr = WindowedRange.initial(100, 8)
    got = [(s, tuple(r)) for s, r in subranges_fast(THIRTY_SEVENTY, 0, wr, 8)]
    assert got == [(1, (0, 76)), (2, (77, 255))]


def test_single_outbound_passes_window_through(fixture):
    s3 = ids(["s3"])[0]
    wr = WindowedRange(5, 9, 4, 0, 20)
    assert subranges_fast(fixture, s3, wr, 4) == [(0, NatRange(5, 9))]


def test_subranges_fast_rejects_oversized_window():
    with pytest.raises(ValueError):
        subranges_fast(THIRTY_SEVENTY, 0, WindowedRange.initial(100, 8), 4)
    with pytest.raises(ValueError):
        subranges_fast(THIRTY_SEVENTY, 0, WindowedRange.initial(100, 1), 1)


def test_flush_common_prefix():
    sink = BitCursor()
    wr = flush_converged(WindowedRange(0b0100, 0b0111, 4, 0, 100), 4, sink)
    assert (sink.to_int(), sink.bit_position) == (0b01, 2)
    assert wr == WindowedRange(0b0000, 0b1111, 4, 2, 100)


def test_flush_nothing_when_top_bits_differ():
    wr = WindowedRange(0b0000, 0b1111, 4, 0, 100)
    sink = BitCursor()
    assert flush_converged(wr, 4, sink) == wr
    assert sink.bit_position == 0


def test_flush_near_the_end_narrows_the_window():
    sink = BitCursor()
    wr = flush_converged(WindowedRange(0b0110, 0b0111, 4, 4, 9), 4, sink)
    # 3 bits flushed, 9 - 7 = 2 bits remain, one of them already in the window
    assert sink.to_int() == 0b011
    assert wr == WindowedRange(0b00, 0b11, 2, 7, 9)
    done = flush_converged(WindowedRange(0b10, 0b10, 2, 7, 9), 4, sink)
    assert done.converged and done.width == 0


def _windowed_trace(model, x, n, precision):
    """Encode with the public window API, yielding the conceptual range after each split."""
    wr = WindowedRange.initial(n, precision)
    sink = BitCursor()
    s = 0
    while not wr.converged:
        shift = n - wr.flushed - wr.width
        x_window = (x >> shift) & ((1 << wr.width) - 1)
        parts = subranges_fast(model, s, wr, precision)
        s, sub = next((t, r) for t, r in parts if x_window in r)
        wr = WindowedRange(sub.lo, sub.hi, wr.width, wr.flushed, n)
        wr = flush_converged(wr, precision, sink)
        assert wr.width <= precision
        yield s, wr.conceptual(sink.to_int())
    assert sink.to_int() == x


def _exact_trace(model, x, n):
    lo, hi, s = 0, (1 << n) - 1, 0
    while hi > lo:
        s, lo, hi = next((t, a, b) for t, a, b in naive_subranges(model, s, lo, hi) if a <= x <= b)
        yield s, NatRange(lo, hi)


def test_iterated_flushing_matches_exact_ranges(fixture):
    rng = random.Random(64)
    for _ in range(20):
        x = rng.getrandbits(64)
        assert list(_windowed_trace(fixture, x, 64, 64)) == list(_exact_trace(fixture, x, 64))


@pytest.mark.parametrize("precision", [2, 3, 5, 8])
def test_narrow_windows_keep_the_input_inside_the_range(fixture, precision):
    rng = random.Random(precision)
    for _ in range(20):
        x = rng.getrandbits(40)
        trace = list(_windowed_trace(fixture, x, 40, precision))
        assert all(x in r for _, r in trace)
        assert [s for s, _ in trace] == encode_fixed(fixture, x, 40, precision=precision)


@pytest.mark.parametrize("n", range(1, 9))
def test_windowed_equals_exact_when_window_covers_input(fixture, n):
    for x in range(1 << n):
        exact = naive_encode(fixture, x, n)
        for k in (max(n, 2), n + 1, 32):
            assert encode_fixed(fixture, x, n, precision=k) == exact


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 4, 8, 16, 32]), st.integers(1, 300), st.data())
def test_round_trip_at_any_precision(unigram_model, precision, n, data):
    x = data.draw(st.integers(0, (1 << n) - 1))
    start = data.draw(st.sampled_from([0, 1, len(unigram_model.states) - 1]))
    states = encode_fixed(unigram_model, x, n, start, precision)
    assert decode_fixed(unigram_model, states, n, start, precision) == x


def test_small_windows_lose_some_fidelity_but_still_split(fixture):
    # With k = 2 the start split is still 1/2 : 1/2 and s2 splits 1:3.
    assert encode_fixed(fixture, 0b100, 3, precision=2) == ids(["s2", "s4"])


# -- bit cursor -------------------------------------------------------------------


@given(st.lists(st.tuples(st.integers(0, 70), st.data()), max_size=40))
def test_bit_cursor_round_trip(chunks):
    writer = BitCursor()
    values = []
    for width, data in chunks:
        v = data.draw(st.integers(0, (1 << width) - 1))
        writer.write(v, width)
        values.append((v, width))
    total = sum(w for _, w in values)
    assert writer.bit_position == total
    reader = BitCursor(writer.getvalue(), total)
    assert [reader.read(w) for _, w in values] == [v for v, _ in values]
    assert reader.remaining == 0
    with pytest.raises(EOFError):
        reader.read(1)


def test_bit_cursor_is_msb_first():
    r = BitCursor(b"\xa5\x0f")
    assert [r.read(1) for _ in range(4)] == [1, 0, 1, 0]
    assert r.read(8) == 0x50
    assert BitCursor.from_int(0b101, 3).read(3) == 0b101
    w = BitCursor()
    w.write(1, 1)
    assert w.getvalue() == b"\x80" and w.to_int() == 1
    with pytest.raises(ValueError):
        w.read(1)
    with pytest.raises(ValueError):
        BitCursor.from_int(8, 3)


def test_four_bit_window_share():
    # Four-bit window gives s1 5/16 = 0.3125 of the numbers.
    wr = WindowedRange.initial(100, 4)
    (_, r1), _ = subranges_fast(THIRTY_SEVENTY, 0, wr, 4)
    assert Fraction(r1.length, 16) == Fraction(5, 16)
