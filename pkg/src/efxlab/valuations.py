"""Valuation data model: rank valuations and exact real-valued valuations.

The canonical non-degenerate valuation is a *rank valuation*: a monotone
bijection from all ``2^m`` subsets onto the ranks ``0 .. 2^m - 1``.  Making
non-degeneracy structural keeps every fairness predicate a pure rank
comparison; no numeric values are needed anywhere downstream.
"""

from __future__ import annotations

import random
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

from .bitset import cardinality, check_good_count, singleton_bits
from .errors import MonotonicityViolated, NotAPermutation


@dataclass(frozen=True)
class RankValuation:
    """Monotone bijection from the 2^m subsets to ranks 0 .. 2^m - 1."""

    m: int
    rank: tuple[int, ...]

    def value(self, mask: int) -> int:
        return self.rank[mask]

    def order(self) -> list[int]:
        """All subsets sorted by increasing rank."""
        by_rank = [0] * len(self.rank)
        for mask, r in enumerate(self.rank):
            by_rank[r] = mask
        return by_rank

    def validate(self) -> None:
        n_sets = 1 << self.m
        if len(self.rank) != n_sets or sorted(self.rank) != list(range(n_sets)):
            raise NotAPermutation(f"rank table is not a bijection on 0..{n_sets - 1}")
        for sub in range(n_sets):
            for bit in singleton_bits(~sub & (n_sets - 1)):
                sup = sub | bit
                if self.rank[sub] >= self.rank[sup]:
                    raise MonotonicityViolated(sub, sup)


@dataclass(frozen=True)
class RealValuation:
    """Exact-arithmetic valuation table; may be degenerate but must be monotone."""

    m: int
    values: tuple[Fraction | int, ...]

    def value(self, mask: int) -> Fraction | int:
        return self.values[mask]

    def validate(self) -> None:
        n_sets = 1 << self.m
        if len(self.values) != n_sets:
            raise ValueError(f"expected {n_sets} values, got {len(self.values)}")
        if self.values[0] != 0:
            raise ValueError("empty set must have value 0")
        if any(v < 0 for v in self.values):
            raise ValueError("values must be non-negative")
        for sub in range(n_sets):
            for bit in singleton_bits(~sub & (n_sets - 1)):
                if self.values[sub] > self.values[sub | bit]:
                    raise MonotonicityViolated(sub, sub | bit)


def rank_valuation_from_order(m: int, order: Sequence[int]) -> RankValuation:
    """Build a rank valuation from a total order of all subsets (low to high).

    Raises NotAPermutation if the order does not list every subset exactly
    once, and MonotonicityViolated if some proper subset is ordered at or
    above one of its supersets.
    """
    check_good_count(m)
    n_sets = 1 << m
    rank = [-1] * n_sets
    if len(order) != n_sets:
        raise NotAPermutation(f"order has {len(order)} entries, expected {n_sets}")
    for position, mask in enumerate(order):
        if not 0 <= mask < n_sets or rank[mask] != -1:
            raise NotAPermutation(f"set {mask} missing or repeated in order")
        rank[mask] = position
    val = RankValuation(m, tuple(rank))
    val.validate()
    return val


def random_monotone_rank_valuation(m: int, seed: int) -> RankValuation:
    """Seeded random linear extension of the subset lattice.

    Repeatedly picks uniformly among the currently minimal unplaced sets
    (those whose immediate subsets are all placed), which always yields a
    valid linear extension and is deterministic per seed.
    """
    check_good_count(m)
    rng = random.Random(seed)
    n_sets = 1 << m
    missing = [cardinality(mask) for mask in range(n_sets)]
    available = [0]
    rank = [-1] * n_sets
    for position in range(n_sets):
        idx = rng.randrange(len(available))
        mask = available[idx]
        available[idx] = available[-1]
        available.pop()
        rank[mask] = position
        for bit in singleton_bits(~mask & (n_sets - 1)):
            sup = mask | bit
            missing[sup] -= 1
            if missing[sup] == 0:
                available.append(sup)
    return RankValuation(m, tuple(rank))


def perturb_nondegenerate(v: RealValuation) -> RealValuation:
    """Non-degenerate, order-refining rescaling of a monotone valuation.

    Returns v' with v'(S) = C*v(S) + sum(2^i for good i in S), where C is the
    smallest power of two making any two distinct values of v at least 2^m
    apart after scaling.  Ties of v are broken by the additive term, strict
    comparisons of v are preserved, and the result is monotone.
    """
    n_sets = 1 << v.m
    distinct = sorted(set(v.values))
    min_gap = min(
        (b - a for a, b in zip(distinct, distinct[1:])),
        default=None,
    )
    scale = 1
    if min_gap is not None:
        while scale * min_gap < n_sets:
            scale *= 2
    values = tuple(scale * Fraction(v.values[mask]) + mask for mask in range(n_sets))
    return RealValuation(v.m, values)


def leveled(v: RankValuation, k: int) -> RankValuation:
    """Rank valuation where size >= k sets dominate all strictly smaller sets.

    Sets of size below k keep their original relative order; sets of size at
    least k are ordered by (cardinality, set number) ascending, above every
    smaller set.  k = m + 1 leaves the order unchanged.
    """
    if not 0 <= k <= v.m + 1:
        raise ValueError(f"level threshold k={k} outside 0..{v.m + 1}")
    low = [mask for mask in v.order() if cardinality(mask) < k]
    high = sorted(
        (mask for mask in range(1 << v.m) if cardinality(mask) >= k),
        key=lambda mask: (cardinality(mask), mask),
    )
    return rank_valuation_from_order(v.m, low + high)


def numeric_order_valuation(m: int) -> RankValuation:
    """rank[S] = S: the order in which set numbers increase."""
    check_good_count(m)
    return RankValuation(m, tuple(range(1 << m)))


def as_real(v: RankValuation) -> RealValuation:
    """Rank valuation reinterpreted as integer values (rank = value)."""
    return RealValuation(v.m, tuple(v.rank))


def check_pairwise_order_preserved(a: RealValuation, b: RealValuation) -> bool:
    """True iff every strict comparison of a holds in b as well."""
    n_sets = 1 << a.m
    for s in range(n_sets):
        for t in range(n_sets):
            if a.values[s] < a.values[t] and not b.values[s] < b.values[t]:
                return False
    return True


def is_nondegenerate(v: RealValuation) -> bool:
    return len(set(v.values)) == len(v.values)
