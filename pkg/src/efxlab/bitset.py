"""Bitmask arithmetic over sets of goods.

A set of goods is an ``m``-bit mask: bit ``i`` is set iff good ``g_i`` is in
the set.  Set numbers therefore coincide with the binary value of the
bitstring whose leftmost character is bit ``m-1``, and numeric order refines
the subset order (``A`` a proper subset of ``B`` implies ``A < B``).
"""

from __future__ import annotations

from collections.abc import Iterator

MIN_GOODS = 3
MAX_GOODS = 16


def check_good_count(m: int) -> None:
    if not MIN_GOODS <= m <= MAX_GOODS:
        raise ValueError(f"good count m={m} outside supported range [{MIN_GOODS}, {MAX_GOODS}]")


def full_set(m: int) -> int:
    return (1 << m) - 1


def cardinality(mask: int) -> int:
    return bin(mask).count("1")


def is_subset(a: int, b: int) -> bool:
    """True iff a is a (not necessarily proper) subset of b."""
    return a & ~b == 0


def is_proper_subset(a: int, b: int) -> bool:
    return a != b and a & ~b == 0


def goods(mask: int) -> Iterator[int]:
    """Good indices in the mask, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def singleton_bits(mask: int) -> Iterator[int]:
    """Single-bit masks contained in the mask, ascending."""
    while mask:
        low = mask & -mask
        yield low
        mask ^= low


def submasks(mask: int) -> Iterator[int]:
    """All subsets of the mask (including 0 and the mask itself), ascending."""
    sub = 0
    while True:
        yield sub
        if sub == mask:
            return
        sub = (sub - mask) & mask


def bitstring(mask: int, m: int) -> str:
    """m-character bitstring, leftmost character is bit m-1."""
    return format(mask, f"0{m}b")


def parse_bitstring(text: str) -> int:
    return int(text, 2)
