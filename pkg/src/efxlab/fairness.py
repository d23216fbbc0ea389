"""Fairness predicates and envy-graph machinery.

All predicates work for any valuation object exposing ``m`` and
``value(mask)``; comparisons follow the definitions exactly, so degenerate
valuations are handled by the strictness of the inequalities themselves
(envy always requires a strict ``>``).
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from typing import Protocol

from .allocations import Allocation
from .bitset import full_set, singleton_bits, submasks
from .errors import ArityMismatch, BadPartitionInput, IndexOutOfRange, NotACycle, OverlappingBundles


class Valuation(Protocol):
    m: int

    def value(self, mask: int) -> object: ...


@dataclass(frozen=True)
class EnvyGraph:
    """Directed graph with an edge (i, j) whenever agent i envies agent j."""

    n: int
    edges: frozenset[tuple[int, int]]


def strongly_envies(v: Valuation, own: int, other: int) -> bool:
    """True iff some single-good removal from `other` still beats `own`."""
    if own & other:
        raise OverlappingBundles(f"bundles {own} and {other} share goods")
    own_value = v.value(own)
    for bit in singleton_bits(other):
        if v.value(other ^ bit) > own_value:
            return True
    return False


def _check_arity(allocation: Allocation, valuations: Sequence[Valuation]) -> None:
    if len(valuations) != allocation.n:
        raise ArityMismatch(f"{len(valuations)} valuations for {allocation.n} bundles")
    if any(v.m != allocation.m for v in valuations):
        raise ArityMismatch("valuations disagree with the allocation's good count")


def is_efx(allocation: Allocation, valuations: Sequence[Valuation]) -> bool:
    """No agent strongly envies any other agent's bundle."""
    _check_arity(allocation, valuations)
    for i, v in enumerate(valuations):
        own = allocation.bundles[i]
        for j, other in enumerate(allocation.bundles):
            if i != j and strongly_envies(v, own, other):
                return False
    return True


def violated_condition_count(allocation: Allocation, valuations: Sequence[Valuation]) -> int:
    """Number of violated (good, non-owner) conditions, in 0 .. m*(n-1).

    For each good g owned by bundle X_j and each agent i != j, the condition
    v_i(X_j - g) <= v_i(X_i) must hold; this counts the failures.
    """
    _check_arity(allocation, valuations)
    count = 0
    for j, bundle in enumerate(allocation.bundles):
        for bit in singleton_bits(bundle):
            removed = bundle ^ bit
            for i, v in enumerate(valuations):
                if i != j and v.value(removed) > v.value(allocation.bundles[i]):
                    count += 1
    return count


def is_efx_feasible(v: Valuation, bundle_index: int, allocation: Allocation) -> bool:
    """The indexed bundle beats every single-good removal of every bundle."""
    if not 0 <= bundle_index < allocation.n:
        raise IndexOutOfRange(f"bundle index {bundle_index} out of range")
    own_value = v.value(allocation.bundles[bundle_index])
    for bundle in allocation.bundles:
        for bit in singleton_bits(bundle):
            if own_value < v.value(bundle ^ bit):
                return False
    return True


def is_tefx_feasible(v: Valuation, bundle_index: int, allocation: Allocation) -> bool:
    """Envy toward any bundle is curable by transferring any single good.

    Against every other bundle X_l, either v(own) > v(X_l) or moving any
    single good g from X_l to the owner flips the comparison:
    v(own + g) >= v(X_l - g).
    """
    if not 0 <= bundle_index < allocation.n:
        raise IndexOutOfRange(f"bundle index {bundle_index} out of range")
    own = allocation.bundles[bundle_index]
    own_value = v.value(own)
    for j, other in enumerate(allocation.bundles):
        if j == bundle_index or own_value > v.value(other):
            continue
        for bit in singleton_bits(other):
            if v.value(own | bit) < v.value(other ^ bit):
                return False
    return True


def is_ef1_feasible(v: Valuation, bundle_index: int, allocation: Allocation) -> bool:
    """Envy toward any bundle is curable by removing some single good."""
    if not 0 <= bundle_index < allocation.n:
        raise IndexOutOfRange(f"bundle index {bundle_index} out of range")
    own_value = v.value(allocation.bundles[bundle_index])
    for j, other in enumerate(allocation.bundles):
        if j == bundle_index or other == 0:
            continue
        if all(own_value < v.value(other ^ bit) for bit in singleton_bits(other)):
            return False
    return True


def eefx_certificate(
    v: Valuation, bundle: int, rest: int, n: int
) -> tuple[int, ...] | None:
    """Exhaustive search for an EEFX certificate.

    Looks for a repartition of bundle + rest, with `bundle` as one part and
    `rest` split into n-1 labeled parts, such that `bundle` beats every
    single-good removal of every part.  Parts of `rest` are enumerated by
    ascending bitmask of the earlier parts; the first certificate found is
    returned (bundle first), or None if none exists.
    """
    if bundle & rest or bundle | rest != full_set(v.m):
        raise BadPartitionInput("bundle and rest must partition the full good set")
    own_value = v.value(bundle)
    for bit in singleton_bits(bundle):
        if own_value < v.value(bundle ^ bit):
            return None

    def beats_all_removals(part: int) -> bool:
        return all(own_value >= v.value(part ^ bit) for bit in singleton_bits(part))

    def split(remaining: int, parts_left: int, acc: list[int]) -> tuple[int, ...] | None:
        if parts_left == 1:
            if beats_all_removals(remaining):
                return (bundle, *acc, remaining)
            return None
        for part in submasks(remaining):
            if beats_all_removals(part):
                found = split(remaining ^ part, parts_left - 1, acc + [part])
                if found is not None:
                    return found
        return None

    return split(rest, n - 1, [])


def envy_graph(allocation: Allocation, valuations: Sequence[Valuation]) -> EnvyGraph:
    _check_arity(allocation, valuations)
    edges = set()
    for i, v in enumerate(valuations):
        own_value = v.value(allocation.bundles[i])
        for j, other in enumerate(allocation.bundles):
            if i != j and v.value(other) > own_value:
                edges.add((i, j))
    return EnvyGraph(allocation.n, frozenset(edges))


def find_envy_cycle(graph: EnvyGraph) -> list[int] | None:
    """Some directed cycle, or None; deterministic lowest-vertex-first DFS."""
    succ: dict[int, list[int]] = {i: [] for i in range(graph.n)}
    for i, j in sorted(graph.edges):
        succ[i].append(j)
    state = {i: 0 for i in range(graph.n)}  # 0 new, 1 on stack, 2 done
    parent: dict[int, int] = {}

    for root in range(graph.n):
        if state[root]:
            continue
        stack = [(root, iter(succ[root]))]
        state[root] = 1
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if state[nxt] == 1:
                    cycle = [nxt]
                    cur = node
                    while cur != nxt:
                        cycle.append(cur)
                        cur = parent[cur]
                    cycle.reverse()
                    return cycle
                if state[nxt] == 0:
                    parent[nxt] = node
                    state[nxt] = 1
                    stack.append((nxt, iter(succ[nxt])))
                    advanced = True
                    break
            if not advanced:
                state[node] = 2
                stack.pop()
    return None


def rotate_cycle(
    allocation: Allocation, valuations: Sequence[Valuation], cycle: Sequence[int]
) -> Allocation:
    """Give each agent on the cycle the bundle it envies (its successor's).

    The bundle multiset is unchanged and every on-cycle agent strictly gains,
    so repeated rotation terminates.
    """
    _check_arity(allocation, valuations)
    if len(cycle) < 2 or len(set(cycle)) != len(cycle):
        raise NotACycle("cycle must list at least two distinct agents")
    edges = envy_graph(allocation, valuations).edges
    for pos, agent in enumerate(cycle):
        nxt = cycle[(pos + 1) % len(cycle)]
        if (agent, nxt) not in edges:
            raise NotACycle(f"({agent}, {nxt}) is not an envy edge")
    bundles = list(allocation.bundles)
    for pos, agent in enumerate(cycle):
        nxt = cycle[(pos + 1) % len(cycle)]
        bundles[agent] = allocation.bundles[nxt]
    return Allocation(allocation.m, tuple(bundles))
