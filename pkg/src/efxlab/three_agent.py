"""Constructive algorithm: every three-agent instance has a tEFX allocation
or an EF1-and-EEFX allocation.

The loop state is a partition (X0, X1, X2) satisfying: X0 and X1 beat every
single-good removal of every bundle under agent 0's valuation (EFX-feasible
for agent 0), sorted so v0(X0) < v0(X1), while X2 is the unique bundle that
agents 1 and 2 both consider tEFX-feasible.  Each iteration either returns
an allocation (whose tag is re-verified by the independent fairness
predicates before being handed back) or produces a partition with strictly
larger potential min(v0(X0), v0(X1)); the potential ranges over ranks, so
the loop is bounded.

Inputs are restricted to rank valuations: every comparison below is strict,
and degenerate ties would make the case analysis unsound.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass

from .allocations import Allocation, count_allocations
from .bitset import singleton_bits
from . import fairness
from .errors import InvariantBroken, NonTermination, PredicateFailsOnPool, SetupViolated
from .valuations import RankValuation

TAG_TEFX = "tEFX"
TAG_EF1_EEFX = "EF1&EEFX"


@dataclass(frozen=True)
class TriSolveResult:
    m: int
    bundles: tuple[int, int, int]  # bundles[i] goes to agent i
    tag: str
    iterations: int
    certificates: dict[int, tuple[int, ...]] | None = None

    def allocation(self) -> Allocation:
        return Allocation(self.m, self.bundles)


def equalize_for_valuation(partition: Sequence[int], v: RankValuation) -> tuple[int, ...]:
    """Move strongly-envied goods into the poorest bundle until none remain.

    Classic single-valuation reallocation: while some bundle keeps a good
    whose removal still beats the poorest bundle, move that good to the
    poorest bundle.  The sorted tuple of bundle values strictly increases
    lexicographically with every move, so this terminates; the result makes
    every bundle EFX-feasible for an agent holding `v`, and the minimum
    bundle value never decreases (strictly increases unless the input was
    already that way).
    """
    bundles = list(partition)
    n = len(bundles)
    guard = n ** v.m + 1
    for _ in range(guard):
        poorest = min(range(n), key=lambda j: (v.rank[bundles[j]], j))
        threshold = v.rank[bundles[poorest]]
        move: tuple[int, int] | None = None
        for j in range(n):
            if j == poorest:
                continue
            for bit in singleton_bits(bundles[j]):
                if v.rank[bundles[j] ^ bit] > threshold:
                    move = (j, bit)
                    break
            if move:
                break
        if move is None:
            return tuple(bundles)
        j, bit = move
        bundles[j] ^= bit
        bundles[poorest] |= bit
    raise InvariantBroken("single-valuation reallocation failed to terminate")


def minimal_satisfying_subset(
    pool: int, predicate: Callable[[int], bool]
) -> int:
    """Inclusion-minimal subset of `pool` still satisfying an upward-closed predicate.

    Single greedy pass dropping goods in ascending index; correctness rests
    on upward closure (supersets of a satisfying set satisfy the predicate).
    """
    if not predicate(pool):
        raise PredicateFailsOnPool("predicate does not hold on the pool")
    subset = pool
    for bit in singleton_bits(pool):
        if predicate(subset ^ bit):
            subset ^= bit
    return subset


def transfer_split(v: RankValuation, first: int, third: int) -> tuple[int, int]:
    """Move goods from `first` to `third` until `third` is transfer-safe.

    Requires v(first) > v(third) on entry.  While moving some good keeps the
    donor ahead (v(first - g) > v(third + g)), the lowest-index such good
    moves; at the fixpoint v(first) > v(third) still holds and no single
    further move preserves it, which is exactly the condition making both
    parts tEFX-feasible against each other for an agent holding `v`.
    """
    if first & third:
        raise SetupViolated("bundles overlap")
    if v.rank[first] <= v.rank[third]:
        raise SetupViolated("donor bundle does not beat the receiver")
    while True:
        move = None
        for bit in singleton_bits(first):
            if v.rank[first ^ bit] > v.rank[third | bit]:
                move = bit
                break
        if move is None:
            return first, third
        first ^= move
        third |= move


class _Verifier:
    """Independent re-derivation of the result tag via the fairness module."""

    def __init__(self, valuations: Sequence[RankValuation]) -> None:
        self.valuations = list(valuations)
        self.m = valuations[0].m

    def confirm_tefx(self, bundles: tuple[int, int, int]) -> None:
        allocation = Allocation(self.m, bundles)
        allocation.validate()
        for agent, v in enumerate(self.valuations):
            if not fairness.is_tefx_feasible(v, agent, allocation):
                raise InvariantBroken(f"claimed tEFX fails for agent {agent}")

    def confirm_ef1_eefx(self, bundles: tuple[int, int, int]) -> dict[int, tuple[int, ...]]:
        allocation = Allocation(self.m, bundles)
        allocation.validate()
        certificates: dict[int, tuple[int, ...]] = {}
        for agent, v in enumerate(self.valuations):
            if not fairness.is_ef1_feasible(v, agent, allocation):
                raise InvariantBroken(f"claimed EF1 fails for agent {agent}")
            own = bundles[agent]
            rest = ((1 << self.m) - 1) ^ own
            certificate = fairness.eefx_certificate(v, own, rest, 3)
            if certificate is None:
                raise InvariantBroken(f"claimed EEFX fails for agent {agent}")
            certificates[agent] = certificate
        return certificates


def solve_three(valuations: Sequence[RankValuation]) -> TriSolveResult:
    """A tEFX or EF1-and-EEFX allocation for any three rank valuations.

    The returned tag is confirmed by the independent fairness predicates
    before the result is handed back; the certificates on an EF1&EEFX result
    come from that confirmation (exhaustive search, one per agent).
    """
    if len(valuations) != 3:
        raise ValueError("exactly three valuations required")
    m = valuations[0].m
    if any(v.m != m for v in valuations) or m < 3:
        raise ValueError("valuations must share a good count m >= 3")
    v0, v1, v2 = valuations
    verifier = _Verifier(valuations)

    round_robin = [0, 0, 0]
    for good in range(m):
        round_robin[good % 3] |= 1 << good
    partition = equalize_for_valuation(round_robin, v0)

    bound = count_allocations(3, m) + 1
    potential: int | None = None
    for iteration in range(1, bound + 1):
        exit_bundles = _try_direct_tefx(partition, valuations)
        if exit_bundles is not None:
            verifier.confirm_tefx(exit_bundles)
            return TriSolveResult(m, exit_bundles, TAG_TEFX, iteration)

        partition = _relabel(partition, valuations)
        new_potential = v0.rank[partition[0]]
        if potential is not None and new_potential <= potential:
            raise InvariantBroken("potential failed to increase")
        potential = new_potential

        outcome, payload = _dispatch(partition, valuations)
        if outcome == "tefx":
            verifier.confirm_tefx(payload)
            return TriSolveResult(m, payload, TAG_TEFX, iteration)
        if outcome == "ef1_eefx":
            certificates = verifier.confirm_ef1_eefx(payload)
            return TriSolveResult(m, payload, TAG_EF1_EEFX, iteration, certificates)
        partition = payload
    raise NonTermination(f"no result within {bound} iterations")


# -- loop internals -------------------------------------------------------------


def _feasible_sets(
    partition: tuple[int, int, int], valuations: Sequence[RankValuation]
) -> tuple[list[int], list[int], list[int]]:
    allocation = Allocation(valuations[0].m, tuple(partition))
    tefx0 = [j for j in range(3) if fairness.is_tefx_feasible(valuations[0], j, allocation)]
    tefx1 = [j for j in range(3) if fairness.is_tefx_feasible(valuations[1], j, allocation)]
    tefx2 = [j for j in range(3) if fairness.is_tefx_feasible(valuations[2], j, allocation)]
    return tefx0, tefx1, tefx2


def _try_direct_tefx(
    partition: tuple[int, int, int], valuations: Sequence[RankValuation]
) -> tuple[int, int, int] | None:
    """Assign distinct acceptable bundles to agents 1 and 2 when possible.

    Succeeds iff agents 1 and 2 can take different tEFX-feasible bundles
    while the leftover is tEFX-feasible for agent 0; failure certifies that
    both agents accept exactly one common bundle.
    """
    tefx0, tefx1, tefx2 = _feasible_sets(partition, valuations)
    for b1 in tefx1:
        for b2 in tefx2:
            if b1 == b2:
                continue
            leftover = 3 - b1 - b2
            if leftover in tefx0:
                return (partition[leftover], partition[b1], partition[b2])
    return None


def _relabel(
    partition: tuple[int, int, int], valuations: Sequence[RankValuation]
) -> tuple[int, int, int]:
    """Put the unique common tEFX bundle last, sort the rest by agent 0's rank."""
    _, tefx1, tefx2 = _feasible_sets(partition, valuations)
    if tefx1 != tefx2 or len(tefx1) != 1:
        raise InvariantBroken("direct exit failed without a unique common bundle")
    common = tefx1[0]
    rest = sorted((j for j in range(3) if j != common), key=lambda j: valuations[0].rank[partition[j]])
    relabeled = (partition[rest[0]], partition[rest[1]], partition[common])
    v0 = valuations[0]
    allocation = Allocation(v0.m, relabeled)
    if not (
        fairness.is_efx_feasible(v0, 0, allocation)
        and fairness.is_efx_feasible(v0, 1, allocation)
    ):
        raise InvariantBroken("first two bundles not EFX-feasible for agent 0")
    return relabeled


def _efx_feasible(v: RankValuation, index: int, partition: tuple[int, int, int]) -> bool:
    return fairness.is_efx_feasible(v, index, Allocation(v.m, partition))


def _dispatch(
    partition: tuple[int, int, int], valuations: Sequence[RankValuation]
) -> tuple[str, tuple[int, int, int]]:
    v0, v1, v2 = valuations
    x0, x1, x2 = partition

    # Case 1: some non-zero agent prefers a reduced X2 over both alternatives.
    for v in (v1, v2):
        for bit in singleton_bits(x2):
            if v.rank[x2 ^ bit] > max(v.rank[x0 | bit], v.rank[x1]):
                return _case_shift(partition, v0, bit)

    # Case 2: some non-zero agent prefers X0 over X1.
    for agent, v in ((1, v1), (2, v2)):
        if v.rank[x0] > v.rank[x1]:
            other = 3 - agent
            bundles = [0, 0, 0]
            bundles[agent] = x0
            bundles[0] = x1
            bundles[other] = x2
            return "tefx", tuple(bundles)

    # Case 3: a reduced X2 beats X1 for both non-zero agents.
    for bit in singleton_bits(x2):
        if v1.rank[x2 ^ bit] > v1.rank[x1] and v2.rank[x2 ^ bit] > v2.rank[x1]:
            return _case_split(partition, valuations, splitter=1, chooser=2, bit=bit)

    return _remaining_case(partition, valuations)


def _case_shift(
    partition: tuple[int, int, int], v0: RankValuation, bit: int
) -> tuple[str, tuple[int, int, int]]:
    """Case 1: move the witnessing good from X2 into X0 and repair."""
    x0, x1, x2 = partition
    shifted = (x0 | bit, x1, x2 ^ bit)
    if _efx_feasible(v0, 1, shifted):
        if not _efx_feasible(v0, 0, shifted):
            raise InvariantBroken("grown first bundle lost EFX-feasibility for agent 0")
        return "continue", shifted
    # X1's violation can only come from the grown bundle, so the threshold
    # subset below exists.
    minimal = minimal_satisfying_subset(
        x0 | bit, lambda s: v0.rank[s] > v0.rank[x1]
    )
    repaired = (minimal, x1, (x2 ^ bit) | ((x0 | bit) ^ minimal))
    if _efx_feasible(v0, 0, repaired) and _efx_feasible(v0, 1, repaired):
        return "continue", repaired
    return "continue", equalize_for_valuation(repaired, v0)


def _case_split(
    partition: tuple[int, int, int],
    valuations: Sequence[RankValuation],
    splitter: int,
    chooser: int,
    bit: int,
) -> tuple[str, tuple[int, int, int]]:
    """Cases 3 and beyond: rebalance X0+g against X2-g for the splitter agent."""
    v0 = valuations[0]
    v_split = valuations[splitter]
    v_choose = valuations[chooser]
    x0, x1, x2 = partition
    part_first, part_third = transfer_split(v_split, x0 | bit, x2 ^ bit)
    rebuilt = (part_first, x1, part_third)
    for index in (0, 2):
        if not fairness.is_tefx_feasible(
            v_split, index, Allocation(v_split.m, rebuilt)
        ):
            raise InvariantBroken("split parts not tEFX-feasible for the splitting agent")

    if _efx_feasible(v0, 1, rebuilt):
        # Give agent 0 the middle bundle, the chooser its favorite side.
        favored = max((0, 2), key=lambda j: v_choose.rank[rebuilt[j]])
        remaining = 2 - favored
        bundles = [0, 0, 0]
        bundles[0] = x1
        bundles[chooser] = rebuilt[favored]
        bundles[splitter] = rebuilt[remaining]
        return "tefx", tuple(bundles)

    envied = [
        j
        for j in (0, 2)
        if fairness.strongly_envies(v0, x1, rebuilt[j])
    ]
    if not envied:
        raise InvariantBroken("agent 0 holds no strong envy yet X1 is infeasible")
    z_index = envied[0]
    z = rebuilt[z_index]
    z_other = rebuilt[2 - z_index]
    z_minimal = minimal_satisfying_subset(z, lambda s: v0.rank[s] > v0.rank[x1])
    candidate = (x1, z_minimal, z_other | (z ^ z_minimal))
    if _efx_feasible(v0, 0, candidate):
        if not _efx_feasible(v0, 1, candidate):
            raise InvariantBroken("minimal subset lost EFX-feasibility for agent 0")
        return "continue", candidate
    return "continue", equalize_for_valuation(candidate, v0)


def _remaining_case(
    partition: tuple[int, int, int], valuations: Sequence[RankValuation]
) -> tuple[str, tuple[int, int, int]]:
    v0, v1, v2 = valuations
    x0, x1, x2 = partition
    m = v0.m
    allocation = Allocation(m, partition)

    ef1 = {agent: fairness.is_ef1_feasible(valuations[agent], 1, allocation) for agent in (1, 2)}
    if not (ef1[1] or ef1[2]):
        raise InvariantBroken("middle bundle EF1-feasible for neither agent")
    keeper = 1 if ef1[1] else 2  # "a": holds X1 in the EF1&EEFX exits
    other = 3 - keeper
    v_keep = valuations[keeper]
    v_other = valuations[other]

    rest = ((1 << m) - 1) ^ x1
    if fairness.eefx_certificate(v_keep, x1, rest, 3) is not None:
        bundles = [0, 0, 0]
        bundles[0] = x0
        bundles[keeper] = x1
        bundles[other] = x2
        return "ef1_eefx", tuple(bundles)

    # X1 is neither tEFX- nor EEFX-feasible for the keeper, so a good in X2
    # witnesses the transfer failure.
    witness = None
    for bit in singleton_bits(x2):
        if v_keep.rank[x2 ^ bit] > v_keep.rank[x1 | bit]:
            witness = bit
            break
    if witness is None:
        raise InvariantBroken("transfer-infeasible bundle has no witnessing good")
    if not v_keep.rank[x0 | witness] > v_keep.rank[x2 ^ witness]:
        raise InvariantBroken("witnessing good does not favor the grown bundle")
    if not v_other.rank[x1] > v_other.rank[x2 ^ witness]:
        raise InvariantBroken("middle bundle not EF1-feasible for the other agent")

    part_first, part_third = transfer_split(v_keep, x0 | witness, x2 ^ witness)
    rebuilt = (part_first, x1, part_third)
    for index in (0, 2):
        if not fairness.is_tefx_feasible(v_keep, index, Allocation(m, rebuilt)):
            raise InvariantBroken("split parts not tEFX-feasible for the keeper")

    favorite = max(range(3), key=lambda j: v_other.rank[rebuilt[j]])
    if favorite == 1:
        # `rebuilt` certifies X1 is EEFX-feasible for the other agent.
        bundles = [0, 0, 0]
        bundles[0] = x0
        bundles[keeper] = x2
        bundles[other] = x1
        return "ef1_eefx", tuple(bundles)

    if _efx_feasible(v0, 1, rebuilt):
        remaining = 2 - favorite
        bundles = [0, 0, 0]
        bundles[0] = x1
        bundles[other] = rebuilt[favorite]
        bundles[keeper] = rebuilt[remaining]
        return "tefx", tuple(bundles)

    envied = [j for j in (0, 2) if fairness.strongly_envies(v0, x1, rebuilt[j])]
    if not envied:
        raise InvariantBroken("agent 0 holds no strong envy yet X1 is infeasible")
    z_index = envied[0]
    z = rebuilt[z_index]
    z_other = rebuilt[2 - z_index]
    z_minimal = minimal_satisfying_subset(z, lambda s: v0.rank[s] > v0.rank[x1])
    candidate = (x1, z_minimal, z_other | (z ^ z_minimal))
    if _efx_feasible(v0, 0, candidate):
        if not _efx_feasible(v0, 1, candidate):
            raise InvariantBroken("minimal subset lost EFX-feasibility for agent 0")
        return "continue", candidate
    return "continue", equalize_for_valuation(candidate, v0)
