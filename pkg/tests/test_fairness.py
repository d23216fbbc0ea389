import pytest

from efxlab.allocations import Allocation, enumerate_allocations
from efxlab.bitset import full_set
from efxlab.decoding import load_bundled_counterexample
from efxlab.errors import ArityMismatch, NotACycle, OverlappingBundles
from efxlab.fairness import (
    eefx_certificate,
    envy_graph,
    find_envy_cycle,
    is_ef1_feasible,
    is_efx,
    is_efx_feasible,
    is_tefx_feasible,
    rotate_cycle,
    strongly_envies,
    violated_condition_count,
)
from efxlab.valuations import numeric_order_valuation, random_monotone_rank_valuation


def test_strong_envy_needs_a_removable_good():
    v = random_monotone_rank_valuation(4, 0)
    assert not strongly_envies(v, own=0b0011, other=0)
    # singleton bundles leave the empty set after removal
    assert not strongly_envies(v, own=0b0011, other=0b0100)


def test_strong_envy_rejects_overlap():
    v = random_monotone_rank_valuation(4, 0)
    with pytest.raises(OverlappingBundles):
        strongly_envies(v, 0b0011, 0b0010)


def test_counterexample_small_bundle_strongly_envies_the_rest():
    v0 = load_bundled_counterexample()[0]
    assert strongly_envies(v0, own=0b10000000, other=0b01111111)


def test_singleton_allocation_is_efx_for_identical_agents():
    v = random_monotone_rank_valuation(3, 4)
    allocation = Allocation(3, (1, 2, 4))
    assert is_efx(allocation, [v, v, v])
    assert violated_condition_count(allocation, [v, v, v]) == 0


def test_violation_count_zero_iff_efx():
    vals = [random_monotone_rank_valuation(4, 40 + j) for j in range(3)]
    for allocation in enumerate_allocations(3, 4):
        count = violated_condition_count(allocation, vals)
        assert (count == 0) == is_efx(allocation, vals)
        assert 0 <= count <= 2 * 4


def test_arity_mismatch_is_rejected():
    v = random_monotone_rank_valuation(3, 1)
    with pytest.raises(ArityMismatch):
        is_efx(Allocation(3, (1, 2, 4)), [v, v])


def test_favorite_bundle_is_tefx_and_efx_feasible():
    vals = [random_monotone_rank_valuation(5, 60 + j) for j in range(3)]
    for allocation in list(enumerate_allocations(3, 5))[:40]:
        for agent, v in enumerate(vals):
            favorite = max(range(3), key=lambda j: v.value(allocation.bundles[j]))
            assert is_tefx_feasible(v, favorite, allocation)
            assert is_efx_feasible(v, favorite, allocation)


def test_efx_feasible_implies_tefx_and_ef1():
    vals = [random_monotone_rank_valuation(5, 70 + j) for j in range(3)]
    for allocation in list(enumerate_allocations(3, 5))[::7]:
        for agent, v in enumerate(vals):
            for j in range(3):
                if is_efx_feasible(v, j, allocation):
                    assert is_tefx_feasible(v, j, allocation)
                    assert is_ef1_feasible(v, j, allocation)


def test_ef1_holds_against_singleton_and_empty_bundles():
    v = random_monotone_rank_valuation(4, 2)
    allocation = Allocation(4, (0b1100, 0b0010, 0b0001))
    assert is_ef1_feasible(v, 0, allocation)


def test_dominated_small_bundle_fails_tefx_somewhere():
    # One agent holds a single low good against a heavy 3-good bundle whose
    # every one-good transfer still leaves it ahead.
    v = numeric_order_valuation(5)
    allocation = Allocation(5, (0b00001, 0b11100, 0b00010))
    # direct condition scan
    own = 0b00001
    other = 0b11100
    violated = any(
        v.value(own | bit) < v.value(other ^ bit)
        for bit in (0b00100, 0b01000, 0b10000)
    )
    assert violated
    assert not is_tefx_feasible(v, 0, allocation)


def test_ef1_fails_when_every_single_removal_still_beats():
    # Agent values the 3-good bundle above everything even minus its best good.
    order = [0, 1, 2, 4, 8, 3, 5, 6, 9, 10, 12, 7, 11, 13, 14, 15]
    # bundle {g1,g2,g3} = 14; removals 6, 10, 12 all rank above own bundle {g0} = 1
    from efxlab.valuations import rank_valuation_from_order

    v = rank_valuation_from_order(4, order)
    allocation = Allocation(4, (1, 14, 0))
    assert not is_ef1_feasible(v, 0, allocation)


def test_eefx_certificate_exists_for_efx_feasible_bundle():
    vals = [random_monotone_rank_valuation(4, 90 + j) for j in range(3)]
    for allocation in list(enumerate_allocations(3, 4))[::5]:
        for agent, v in enumerate(vals):
            bundle = allocation.bundles[agent]
            rest = full_set(4) ^ bundle
            if is_efx_feasible(v, agent, allocation):
                certificate = eefx_certificate(v, bundle, rest, 3)
                assert certificate is not None
                # re-check: the bundle beats every removal of every part
                assert certificate[0] == bundle
                recheck = Allocation(4, certificate)
                assert is_efx_feasible(v, 0, recheck)


def test_empty_bundle_has_no_certificate_against_larger_parts():
    v = random_monotone_rank_valuation(4, 13)
    assert eefx_certificate(v, 0, full_set(4), 3) is None


def test_eefx_certificate_input_validation():
    from efxlab.errors import BadPartitionInput

    v = random_monotone_rank_valuation(4, 13)
    with pytest.raises(BadPartitionInput):
        eefx_certificate(v, 0b0011, 0b0110, 3)


def test_envy_free_allocation_has_empty_graph():
    from efxlab.valuations import rank_valuation_from_order

    # each agent's own singleton ranks above the other singletons
    tops = {
        0: rank_valuation_from_order(3, [0, 2, 4, 1, 6, 3, 5, 7]),
        1: rank_valuation_from_order(3, [0, 1, 4, 2, 5, 3, 6, 7]),
        2: rank_valuation_from_order(3, [0, 1, 2, 4, 3, 5, 6, 7]),
    }
    allocation = Allocation(3, (1, 2, 4))
    assert not envy_graph(allocation, [tops[0], tops[1], tops[2]]).edges


def test_two_cycle_rotation_swaps_bundles():
    # agent 0 holds {g1} but prefers {g0}; agent 1 holds {g0} but prefers {g1}
    from efxlab.valuations import rank_valuation_from_order

    a = rank_valuation_from_order(3, [0, 2, 1, 4, 3, 5, 6, 7])
    b = numeric_order_valuation(3)
    allocation = Allocation(3, (2, 1, 4))
    graph = envy_graph(allocation, [a, b, b])
    assert (0, 1) in graph.edges and (1, 0) in graph.edges
    rotated = rotate_cycle(allocation, [a, b, b], [0, 1])
    assert rotated.bundles == (1, 2, 4)


def test_rotate_rejects_non_cycles():
    v = random_monotone_rank_valuation(3, 3)
    allocation = Allocation(3, (1, 2, 4))
    with pytest.raises(NotACycle):
        rotate_cycle(allocation, [v, v, v], [0, 1])
    with pytest.raises(NotACycle):
        rotate_cycle(allocation, [v, v, v], [0])


def test_repeated_rotation_terminates_with_strict_gains():
    vals = [random_monotone_rank_valuation(5, 300 + j) for j in range(3)]
    for start in list(enumerate_allocations(3, 5))[::11]:
        allocation = start
        for _ in range(200):
            graph = envy_graph(allocation, vals)
            cycle = find_envy_cycle(graph)
            if cycle is None:
                break
            before = sum(v.value(allocation.bundles[i]) for i, v in enumerate(vals))
            allocation = rotate_cycle(allocation, vals, cycle)
            after = sum(v.value(allocation.bundles[i]) for i, v in enumerate(vals))
            assert after > before
        else:
            pytest.fail("envy-cycle rotation did not terminate")


def test_nondegenerate_efx_allocations_have_no_empty_bundles():
    vals = [random_monotone_rank_valuation(4, 150 + j) for j in range(3)]
    # partitions with an empty bundle and a >= 2 bundle are never EFX
    allocation = Allocation(4, (0, 0b0011, 0b1100))
    assert not is_efx(allocation, vals)
