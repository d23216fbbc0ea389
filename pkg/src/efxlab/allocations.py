"""Enumeration and counting of complete allocations with non-empty bundles.

An allocation of ``m`` goods to ``n`` agents is identified with the base-n
integer whose digit ``i`` is the owner of good ``g_i``; enumeration ascends
through these codes, keeping only codes in which every agent owns something.
The lazy stream is resumable from any code offset, so it can be split into
independent ranges for parallel consumption.
"""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass
from math import comb

from .bitset import full_set


@dataclass(frozen=True)
class Allocation:
    """Ordered partition of the m goods into n pairwise-disjoint bundles."""

    m: int
    bundles: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.bundles)

    def validate(self) -> None:
        union = 0
        for bundle in self.bundles:
            if union & bundle:
                raise ValueError("bundles overlap")
            union |= bundle
        if union != full_set(self.m):
            raise ValueError("bundles do not cover all goods")


def count_allocations(n: int, m: int) -> int:
    """Number of ordered partitions of m goods into n non-empty bundles.

    Inclusion-exclusion over the set of agents left empty:
    sum_k (-1)^k C(n,k) (n-k)^m.
    """
    if n > m:
        raise ValueError(f"need at least as many goods as agents (n={n}, m={m})")
    return sum((-1) ** k * comb(n, k) * (n - k) ** m for k in range(n + 1))


def bundle_codes(n: int, m: int, start: int = 0, stop: int | None = None) -> Iterator[int]:
    """Owner codes in [start, stop) whose digits use every agent at least once."""
    if stop is None:
        stop = n**m
    covers_all = (1 << n) - 1
    for code in range(start, stop):
        seen = 0
        rest = code
        for _ in range(m):
            seen |= 1 << (rest % n)
            rest //= n
        if seen == covers_all:
            yield code


def bundles_of_code(code: int, n: int, m: int) -> tuple[int, ...]:
    bundles = [0] * n
    for good in range(m):
        bundles[code % n] |= 1 << good
        code //= n
    return tuple(bundles)


def enumerate_bundle_tuples(
    n: int, m: int, start: int = 0, stop: int | None = None
) -> Iterator[tuple[int, ...]]:
    """Raw bundle tuples, ascending by owner code; all bundles non-empty."""
    if n > m:
        raise ValueError(f"need at least as many goods as agents (n={n}, m={m})")
    for code in bundle_codes(n, m, start, stop):
        yield bundles_of_code(code, n, m)


def enumerate_allocations(n: int, m: int) -> Iterator[Allocation]:
    """Every complete non-empty-bundle allocation exactly once, code order."""
    for bundles in enumerate_bundle_tuples(n, m):
        yield Allocation(m, bundles)


def singleton_histogram(n: int, m: int) -> dict[int, int]:
    """Allocation counts keyed by how many bundles are singletons."""
    hist: dict[int, int] = {}
    for bundles in enumerate_bundle_tuples(n, m):
        singles = sum(1 for b in bundles if b & (b - 1) == 0)
        hist[singles] = hist.get(singles, 0) + 1
    return hist
