"""Finite-precision moving window over an n-bit range.

The conceptual range of n-bit numbers is held as a prefix of bits that have
already converged (flushed) plus a window ``[lo, hi]`` of at most
``precision`` bits. The window stands for ``expand([lo, hi], width, n - flushed)``
below that prefix. Splits are done on the window alone, and after each split
the leading bits on which ``lo`` and ``hi`` agree are shifted out and replaced
with fresh low-order bits (0s under ``lo``, 1s under ``hi``). When
``precision >= n`` the window always spans every unflushed bit and the
results are identical to exact-range partitioning.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .partition import NatRange, SubrangeMap, subranges
from .textmodel import MarkovModel

DEFAULT_PRECISION = 32


class BitCursor:
    """Most-significant-bit-first bit reader or writer over a byte buffer."""

    def __init__(self, buffer: bytes | None = None, nbits: int | None = None):
        if buffer is None:
            self.mode = "write"
            self._chunks = bytearray()
            self._acc = 0
            self._nacc = 0
            self.bit_position = 0
            self.nbits = None
        else:
            self.mode = "read"
            self.buffer = bytes(buffer)
            self.nbits = 8 * len(self.buffer) if nbits is None else nbits
            if self.nbits > 8 * len(self.buffer):
                raise ValueError("nbits exceeds the buffer")
            self.bit_position = 0

    @classmethod
    def from_int(cls, value: int, nbits: int) -> "BitCursor":
        if value < 0 or value >> nbits:
            raise ValueError(f"{value} does not fit in {nbits} bits")
        pad = -nbits % 8
        return cls((value << pad).to_bytes((nbits + pad) // 8, "big"), nbits)

    @property
    def remaining(self) -> int:
        return self.nbits - self.bit_position

    def read(self, count: int) -> int:
        if self.mode != "read":
            raise ValueError("cursor is not readable")
        if count == 0:
            return 0
        if count < 0 or count > self.remaining:
            raise EOFError(f"cannot read {count} bits, {self.remaining} left")
        start = self.bit_position
        end = start + count
        chunk = int.from_bytes(self.buffer[start // 8:(end + 7) // 8], "big")
        self.bit_position = end
        return (chunk >> (-end % 8)) & ((1 << count) - 1)

    def write(self, value: int, count: int) -> None:
        if self.mode != "write":
            raise ValueError("cursor is not writable")
        if count == 0:
            return
        self._acc = (self._acc << count) | value
        self._nacc += count
        self.bit_position += count
        if self._nacc >= 64:
            whole = self._nacc // 8
            spare = self._nacc - 8 * whole
            self._chunks += (self._acc >> spare).to_bytes(whole, "big")
            self._acc &= (1 << spare) - 1
            self._nacc = spare

    def getvalue(self) -> bytes:
        """Written bits, zero-padded to a whole byte."""
        pad = -self._nacc % 8
        tail = (self._acc << pad).to_bytes((self._nacc + pad) // 8, "big")
        return bytes(self._chunks) + tail

    def to_int(self) -> int:
        pad = -self.bit_position % 8
        return int.from_bytes(self.getvalue(), "big") >> pad


@dataclass(frozen=True)
class WindowedRange:
    lo: int
    hi: int
    width: int
    flushed: int
    total_bits: int

    @classmethod
    def initial(cls, total_bits: int, precision: int) -> "WindowedRange":
        width = min(precision, total_bits)
        return cls(0, (1 << width) - 1, width, 0, total_bits)

    @property
    def window(self) -> NatRange:
        return NatRange(self.lo, self.hi)

    @property
    def converged(self) -> bool:
        return self.flushed == self.total_bits

    def conceptual(self, prefix: int) -> NatRange:
        """The full n-bit range given the value of the flushed prefix bits."""
        tail = self.total_bits - self.flushed
        r = expand(self.window, self.width, tail)
        return NatRange((prefix << tail) | r.lo, (prefix << tail) | r.hi)


def expand(r_short: NatRange, m: int, n: int) -> NatRange:
    """Widen an m-bit range to n bits: zeros below ``lo``, ones below ``hi``."""
    if m > n:
        raise ValueError("m must not exceed n")
    shift = n - m
    return NatRange(r_short.lo << shift, (r_short.hi << shift) | ((1 << shift) - 1))


def subranges_fast(
    model: MarkovModel, s: int, wr: WindowedRange, precision: int = DEFAULT_PRECISION
) -> SubrangeMap:
    """Partition the window (not the conceptual range) among outbound states of s."""
    if precision < 2:
        raise ValueError("precision must be at least 2 bits")
    if wr.width > precision:
        raise ValueError(f"window of {wr.width} bits exceeds precision {precision}")
    return subranges(model, s, wr.window)


def flush_converged(
    wr: WindowedRange, precision: int = DEFAULT_PRECISION, sink: BitCursor | None = None
) -> WindowedRange:
    """Shift out the leading bits shared by ``lo`` and ``hi`` and refill the window.

    Flushed bits are appended to ``sink`` when one is given. The refilled
    window is as wide as the precision allows, capped by the bits left.
    """
    width = wr.width
    diff = (wr.lo ^ wr.hi).bit_length()
    f = width - diff
    if f == 0:
        return wr
    if sink is not None:
        sink.write(wr.lo >> diff, f)
    flushed = wr.flushed + f
    new_width = min(precision, wr.total_bits - flushed)
    fresh = new_width - diff
    mask = (1 << diff) - 1
    return replace(
        wr,
        lo=(wr.lo & mask) << fresh,
        hi=((wr.hi & mask) << fresh) | ((1 << fresh) - 1),
        width=new_width,
        flushed=flushed,
    )
