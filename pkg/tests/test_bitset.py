from efxlab.bitset import (
    bitstring,
    cardinality,
    goods,
    is_proper_subset,
    is_subset,
    parse_bitstring,
    singleton_bits,
    submasks,
)


def test_cardinality_and_membership():
    assert cardinality(0) == 0
    assert cardinality(0b10110) == 3
    assert list(goods(0b10110)) == [1, 2, 4]
    assert list(singleton_bits(0b101)) == [1, 4]


def test_subset_relations():
    assert is_subset(0b101, 0b111)
    assert is_subset(0b101, 0b101)
    assert not is_subset(0b101, 0b011)
    assert is_proper_subset(0b001, 0b011)
    assert not is_proper_subset(0b011, 0b011)


def test_submasks_enumerates_all_subsets_ascending():
    subs = list(submasks(0b1010))
    assert subs == [0b0000, 0b0010, 0b1000, 0b1010]
    assert list(submasks(0)) == [0]


def test_bitstring_leftmost_is_high_bit():
    assert bitstring(5, 8) == "00000101"
    assert parse_bitstring("00000101") == 5
    assert parse_bitstring(bitstring(0b1100101, 7)) == 0b1100101
