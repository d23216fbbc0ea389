import pytest

from efxlab.dimacs import (
    Assignment,
    CnfFormula,
    parse_dimacs,
    parse_model,
    write_dimacs,
)
from efxlab.errors import (
    DuplicateAssignment,
    HeaderMismatch,
    LiteralOutOfRange,
    MalformedLiteral,
    MissingTerminator,
)


def test_parse_single_unit_clause():
    formula = parse_dimacs("p cnf 1 1\n1 0\n")
    assert formula.num_vars == 1
    assert formula.clauses == [(1,)]


def test_parse_ignores_comments_and_blank_lines():
    text = "c a comment\n\np cnf 3 2\nc another\n1 -2 0\n-1 3 0\n"
    formula = parse_dimacs(text)
    assert formula.clauses == [(1, -2), (-1, 3)]


def test_parse_accepts_clauses_spanning_lines():
    formula = parse_dimacs("p cnf 3 1\n1 2\n3 0\n")
    assert formula.clauses == [(1, 2, 3)]


def test_header_mismatch_detected():
    with pytest.raises(HeaderMismatch):
        parse_dimacs("p cnf 2 2\n1 0\n")


def test_missing_terminator_detected():
    with pytest.raises(MissingTerminator):
        parse_dimacs("p cnf 2 1\n1 2\n")


def test_malformed_literal_detected():
    with pytest.raises(MalformedLiteral):
        parse_dimacs("p cnf 2 1\n1 x 0\n")


def test_out_of_range_literal_detected():
    with pytest.raises(LiteralOutOfRange):
        parse_dimacs("p cnf 2 1\n1 3 0\n")


def test_write_parse_roundtrip_on_normalized_text():
    formula = CnfFormula(4, [(1, -2), (3, 4, -1), (-4,)])
    text = write_dimacs(formula, comments=["round trip"])
    again = parse_dimacs(text)
    assert again.num_vars == formula.num_vars
    assert again.clauses == formula.clauses
    assert write_dimacs(again, comments=["round trip"]) == text


def test_parse_model_single_line():
    assignment = parse_model("v 1 -2 0\n")
    assert assignment.values == {1: True, 2: False}


def test_parse_model_multi_line_block_matches_single_line():
    single = parse_model("s SATISFIABLE\nv 1 -2 3 0\n")
    multi = parse_model("s SATISFIABLE\nv 1\nv -2 3\nv 0\n")
    assert single.values == multi.values


def test_parse_model_repeats_are_idempotent_but_conflicts_raise():
    assert parse_model("v 1 1 0\n").values == {1: True}
    with pytest.raises(DuplicateAssignment):
        parse_model("v 1 -1 0\n")


def test_parse_model_range_check():
    with pytest.raises(LiteralOutOfRange):
        parse_model("v 5 0\n", num_vars=4)


def test_parse_model_requires_terminator():
    with pytest.raises(MissingTerminator):
        parse_model("v 1 -2\n")


def test_assignment_satisfies():
    formula = CnfFormula(2, [(1, 2), (-1, 2)])
    assert Assignment(2, {1: True, 2: True}).satisfies(formula)
    assert not Assignment(2, {1: True, 2: False}).satisfies(formula)
