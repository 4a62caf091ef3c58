"""Proportional partitioning of integer ranges among a state's outbound transitions.

Allocation is largest-remainder (Hamilton) apportionment over exact integer
counts: floor every quota, then hand out the leftover units by descending
remainder with ties going to the lower state id. If that leaves fewer than two
non-empty subranges on a range of length >= 2, one unit moves from the largest
allocation to the most probable starved state, so that every split at a
branching state strictly shrinks the range.

Subranges are laid out contiguously in canonical state order and states that
end up with nothing are dropped.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from itertools import accumulate
from typing import Hashable, Sequence

import numpy as np

from .errors import NoOutboundState, NumberOutOfRange, StateNotInPartition
from .textmodel import MarkovModel, Outbound

# Above this out-degree the remainder bookkeeping is vectorized.
_NUMPY_MIN_DEGREE = 48


@dataclass(frozen=True)
class NatRange:
    """Inclusive range ``[lo, hi]`` of non-negative integers."""

    lo: int
    hi: int

    def __post_init__(self):
        if self.lo < 0 or self.hi < self.lo:
            raise ValueError(f"invalid range [{self.lo}, {self.hi}]")

    @property
    def length(self) -> int:
        return self.hi - self.lo + 1

    def __contains__(self, number) -> bool:
        return self.lo <= number <= self.hi

    def __iter__(self):
        yield self.lo
        yield self.hi

    def __repr__(self):
        return f"[{self.lo}, {self.hi}]"

    @classmethod
    def bits(cls, n: int) -> "NatRange":
        """The full range of n-bit numbers."""
        return cls(0, (1 << n) - 1)


SubrangeMap = list  # list[tuple[int, NatRange]]


def apportion(
    weights: Sequence[tuple[Hashable, Fraction]], total_length: int
) -> list[tuple[Hashable, int]]:
    """Split ``total_length`` integer units among weighted keys.

    ``weights`` must be given in canonical order and sum to exactly 1. This is
    the reference formulation over Fractions; the codec uses an equivalent
    integer-count path (:class:`Split`).
    """
    if total_length < 1:
        raise ValueError("total_length must be >= 1")
    fracs = [Fraction(w) for _, w in weights]
    if sum(fracs) != 1:
        raise ValueError("weights must sum to 1")
    quotas = [f * total_length for f in fracs]
    alloc = [q.numerator // q.denominator for q in quotas]
    leftover = total_length - sum(alloc)
    by_remainder = sorted(range(len(quotas)), key=lambda i: (-(quotas[i] - alloc[i]), i))
    for i in by_remainder[:leftover]:
        alloc[i] += 1
    _minimal_length_fixup(alloc, fracs, total_length)
    return [(key, a) for (key, _), a in zip(weights, alloc)]


def _minimal_length_fixup(alloc: list[int], weights: Sequence, total_length: int) -> None:
    if total_length < 2 or len(alloc) < 2:
        return
    if sum(1 for a in alloc if a) >= 2:
        return
    donor = max(range(len(alloc)), key=lambda i: (alloc[i], -i))
    starved = [i for i in range(len(alloc)) if alloc[i] == 0]
    taker = max(starved, key=lambda i: (weights[i], -i))
    alloc[donor] -= 1
    alloc[taker] += 1


def _leftover_winners_np(rems: np.ndarray, leftover: int) -> np.ndarray:
    """Indices of the ``leftover`` largest remainders, ties to lower index."""
    d = len(rems)
    threshold = np.partition(rems, d - leftover)[d - leftover]
    above = np.flatnonzero(rems > threshold)
    ties = np.flatnonzero(rems == threshold)[: leftover - len(above)]
    return np.concatenate((above, ties))


def _small_offsets(ob: Outbound, rem_len: int) -> list[int]:
    """Prefix sums of the allocations of a range of length ``rem_len`` < ``ob.total``.

    The Minimal Length fix-up is not applied here.
    """
    total = ob.total
    if len(ob) >= _NUMPY_MIN_DEGREE and total < (1 << 31):
        small, rems = np.divmod(ob.counts_array * rem_len, total)
        leftover = int(rems.sum()) // total
        if leftover:
            small[_leftover_winners_np(rems, leftover)] += 1
        offsets = np.zeros(len(ob) + 1, dtype=np.int64)
        np.cumsum(small, out=offsets[1:])
        return offsets.tolist()
    prods = [c * rem_len for c in ob.counts]
    small = [p // total for p in prods]
    leftover = rem_len - sum(small)
    if leftover:
        rems = [p % total for p in prods]
        for i in sorted(range(len(rems)), key=lambda i: (-rems[i], i))[:leftover]:
            small[i] += 1
    return list(accumulate(small, initial=0))


class Split:
    """Apportionment of a range length among the targets of one ``Outbound``.

    With ``length = q * total + r`` the allocation of target i is
    ``counts[i] * q + small[i]`` where ``small`` apportions only ``r``; this
    keeps the per-target work on machine-sized integers even when ``length``
    has hundreds of thousands of bits.
    """

    __slots__ = ("ob", "quotient", "offsets")

    def __init__(self, ob: Outbound, length: int):
        q, r = divmod(length, ob.total)
        offsets = _small_offsets(ob, r)
        if q == 0 and len(ob) >= 2 and length >= 2:
            first = bisect.bisect_right(offsets, 0) - 1
            if offsets[first + 1] == length:  # a single non-empty slot
                small = [b - a for a, b in zip(offsets, offsets[1:])]
                _minimal_length_fixup(small, ob.counts, length)
                offsets = list(accumulate(small, initial=0))
        self.ob = ob
        self.quotient = q
        self.offsets = offsets

    def offset(self, i: int) -> int:
        return self.quotient * self.ob.cumulative[i] + self.offsets[i]

    def allocation(self, i: int) -> int:
        return self.quotient * self.ob.counts[i] + self.offsets[i + 1] - self.offsets[i]

    def locate(self, x: int) -> int:
        """Index of the target whose subrange holds offset ``x`` (0-based within the range)."""
        n = len(self.ob)
        q = self.quotient
        if q > self.offsets[-1]:
            # offset(i) = q*C_i + A_i with A_i < q, so comparing against
            # x = q*t + u reduces to comparing (C_i, A_i) with (t, u).
            t, u = divmod(x, q)
            cum, offs = self.ob.cumulative, self.offsets
            return bisect.bisect_right(range(n), (t, u), key=lambda i: (cum[i], offs[i])) - 1
        # offset() is non-decreasing; the last index with offset <= x has a non-empty slot.
        return bisect.bisect_right(range(n), x, key=self.offset) - 1

    def entries(self) -> list[tuple[int, int, int]]:
        """(target, offset, allocation) for every non-empty slot."""
        out = []
        for i, target in enumerate(self.ob.targets):
            a = self.allocation(i)
            if a:
                out.append((target, self.offset(i), a))
        return out


def _outbound_or_raise(model: MarkovModel, s: int) -> Outbound:
    ob = model.outbound(s)
    if ob is None:
        raise NoOutboundState(f"state {s} ({model.states[s]!r}) has no outbound edges")
    return ob


def subranges(model: MarkovModel, s: int, r: NatRange) -> SubrangeMap:
    """Partition ``r`` among the outbound states of ``s``."""
    ob = _outbound_or_raise(model, s)
    if len(ob) == 1:
        return [(ob.targets[0], r)]
    split = Split(ob, r.length)
    return [
        (target, NatRange(r.lo + off, r.lo + off + a - 1))
        for target, off, a in split.entries()
    ]


def subrange_for_state(model: MarkovModel, s: int, r: NatRange, s_next: int) -> NatRange:
    for state, sub in subranges(model, s, r):
        if state == s_next:
            return sub
    raise StateNotInPartition(
        f"{model.states[s_next]!r} has no subrange after {model.states[s]!r} in {r}"
    )


def _entry_for_number(model, s, r, number):
    if number not in r:
        raise NumberOutOfRange(f"{number} is not in {r}")
    for state, sub in subranges(model, s, r):
        if number in sub:
            return state, sub
    raise AssertionError("subranges did not cover the range")


def subrange_for_number(model: MarkovModel, s: int, r: NatRange, number: int) -> NatRange:
    return _entry_for_number(model, s, r, number)[1]


def state_for_number(model: MarkovModel, s: int, r: NatRange, number: int) -> int:
    return _entry_for_number(model, s, r, number)[0]
