"""Submodular realization of rank orders and counterexample extensions.

A rank valuation's total order is realized exactly by the dyadic function
f(S_i) = sum of 2^-l for l = 1..i, where S_i is the set of rank i.  Scaling
by 2^N with N = 2^m - 1 keeps every value an integer, so submodularity can
be checked with exact big-integer arithmetic; floating point could not
represent the 2^-255 gaps that appear at m = 8.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

from .bitset import cardinality, full_set, singleton_bits, submasks
from .valuations import RankValuation, RealValuation


@dataclass(frozen=True)
class DyadicValuation:
    """Integer table storing f(S) * 2^N with N = 2^m - 1."""

    m: int
    values: tuple[int, ...]

    @property
    def scale_bits(self) -> int:
        return (1 << self.m) - 1

    def value(self, mask: int) -> int:
        return self.values[mask]


def submodular_realize(v: RankValuation) -> DyadicValuation:
    """Order-isomorphic submodular realization of a rank valuation.

    The set of rank i receives sum(2^(N-l) for l=1..i) = 2^N - 2^(N-i);
    comparisons between any two sets agree with the source rank order.
    """
    scale_bits = (1 << v.m) - 1
    top = 1 << scale_bits
    values = [0] * (1 << v.m)
    for mask, rank in enumerate(v.rank):
        values[mask] = top - (top >> rank)
    return DyadicValuation(v.m, tuple(values))


def is_submodular(f: DyadicValuation) -> tuple[bool, tuple[int, int, int] | None]:
    """Diminishing-returns check over all (S, T, g) with S subset T, g not in T.

    Returns (True, None) or (False, witness) where the witness triple
    (S, T, g) has f(S+g) - f(S) < f(T+g) - f(T).
    """
    everything = full_set(f.m)
    values = f.values
    for t in range(1 << f.m):
        for g_bit in singleton_bits(everything & ~t):
            gain_t = values[t | g_bit] - values[t]
            for s in submasks(t):
                if values[s | g_bit] - values[s] < gain_t:
                    return False, (s, t, g_bit.bit_length() - 1)
    return True, None


def is_submodular_four_point(f: DyadicValuation) -> bool:
    """Naive f(S) + f(T) >= f(S|T) + f(S&T) check over all pairs (small m)."""
    values = f.values
    n_sets = 1 << f.m
    for s in range(n_sets):
        for t in range(n_sets):
            if values[s] + values[t] < values[s | t] + values[s & t]:
                return False
    return True


def extend_counterexample(base: Sequence[RankValuation], n: int) -> list[RealValuation]:
    """Extension of a 3-agent, 8-good instance to n >= 4 agents, n + 5 goods.

    The new goods are worthless to agents 0 and 1; agents 2 .. n-1 share one
    valuation that adds a block of 2^8 (one more than the maximum base rank)
    per new good owned.  The outputs are deliberately degenerate.
    """
    if len(base) != 3:
        raise ValueError("extension starts from exactly three base valuations")
    if any(v.m != 8 for v in base):
        raise ValueError("base valuations must be over 8 goods")
    if n < 4:
        raise ValueError("extension is defined for n >= 4 agents")
    base_m = 8
    m = n + 5
    base_mask = full_set(base_m)
    block = 1 << base_m  # exceeds every base rank
    extended: list[RealValuation] = []
    for agent in range(n):
        values = [0] * (1 << m)
        for mask in range(1 << m):
            core = mask & base_mask
            if agent < 2:
                values[mask] = base[agent].rank[core]
            else:
                extra = cardinality(mask >> base_m)
                values[mask] = block * extra + base[2].rank[core]
        extended.append(RealValuation(m, tuple(values)))
    return extended


def add_dummy_goods(valuations: Sequence[RealValuation], extra: int) -> list[RealValuation]:
    """Append `extra` goods of value zero to every agent: v'(S) = v(S & old)."""
    if extra < 0:
        raise ValueError("extra must be non-negative")
    if extra == 0:
        return list(valuations)
    old_m = valuations[0].m
    old_mask = full_set(old_m)
    m = old_m + extra
    return [
        RealValuation(m, tuple(v.values[mask & old_mask] for mask in range(1 << m)))
        for v in valuations
    ]
