"""Turning SAT models into valuations, and the valuation text formats.

Model decoding counts wins: the rank of a set is the number of sets it beats
under the assignment's comparison variables.  A rank collision certifies that
the comparison relation is not a total order, and a witnessing 3-cycle is
extracted for the error.

Text formats:

* plain blocks ("ThreeVals"): n consecutive blocks of 2^m lines, each line
  ``<set-number> <m-bit bitstring> <rank>``; within a block the ranks are
  0 .. 2^m - 1 in increasing order. The leftmost bitstring character is bit
  m-1.
* generalized blocks: an ``n m`` header line followed by n blocks of 2^m
  lines ``<set-number> <bitstring> <value>`` sorted by set number; values are
  arbitrary non-negative integers (used for degenerate extension instances).
* dyadic dump: 2^m lines ``<set-number> <decimal integer>``.
"""

from __future__ import annotations

from importlib import resources

from .bitset import bitstring, parse_bitstring
from .dimacs import Assignment
from .encoding import NUM_AGENTS, var_id
from .errors import (
    BitstringMismatch,
    IncompleteAssignment,
    LineCountMismatch,
    NotATotalOrder,
    RankNotIncreasing,
)
from .valuations import RankValuation, RealValuation


def decode_valuations(assignment: Assignment, m: int) -> list[RankValuation]:
    """Rank valuations of all three agents from a full comparison assignment.

    rank_i(A) = number of sets B with "v_i(B) < v_i(A)" under the assignment.
    Raises IncompleteAssignment for a missing variable, NotATotalOrder (with
    a witness 3-cycle) if ranks collide, and MonotonicityViolated if the
    order contradicts the subset order.
    """
    n_sets = 1 << m
    valuations = []
    for agent in range(NUM_AGENTS):
        below = [[False] * n_sets for _ in range(n_sets)]  # below[a][b]: v(b) < v(a)
        for a in range(n_sets):
            for b in range(a + 1, n_sets):
                var = var_id(agent, a, b, m)
                value = assignment.get(var)
                if value is None:
                    raise IncompleteAssignment(var)
                below[b][a] = value
                below[a][b] = not value
        rank = [sum(row) for row in below]
        seen = [-1] * n_sets
        for mask, r in enumerate(rank):
            if seen[r] != -1:
                raise NotATotalOrder(_find_three_cycle(below, seen[r], mask))
            seen[r] = mask
        val = RankValuation(m, tuple(rank))
        val.validate()
        valuations.append(val)
    return valuations


def _find_three_cycle(below: list[list[bool]], a: int, b: int) -> tuple[int, int, int]:
    """Given equal-rank sets a and b, find x < y < z < x in the relation."""
    first, second = (a, b) if below[b][a] else (b, a)  # first < second
    for c in range(len(below)):
        if c not in (a, b) and below[c][second] and below[first][c]:
            return (second, c, first)  # second < c < first < second
    raise AssertionError("rank collision without a 3-cycle")


# -- plain rank blocks ---------------------------------------------------------

def load_bundled_counterexample() -> list[RankValuation]:
    """The three 8-good valuations shipped with the package."""
    text = resources.files("efxlab.data").joinpath("counterexample8.txt").read_text()
    return load_rank_blocks(text, 3, 8)


def load_rank_blocks(text: str, n: int, m: int) -> list[RankValuation]:
    n_sets = 1 << m
    rows = [line.split() for line in text.splitlines() if line.strip()]
    if len(rows) != n * n_sets:
        raise LineCountMismatch(f"expected {n * n_sets} lines, got {len(rows)}")
    valuations = []
    for block in range(n):
        rank = [0] * n_sets
        for offset in range(n_sets):
            fields = rows[block * n_sets + offset]
            if len(fields) != 3:
                raise LineCountMismatch(f"line {block * n_sets + offset + 1}: need 3 fields")
            mask, bits, r = int(fields[0]), fields[1], int(fields[2])
            if len(bits) != m or parse_bitstring(bits) != mask:
                raise BitstringMismatch(f"set {mask} does not match bitstring {bits}")
            if r != offset:
                raise RankNotIncreasing(
                    f"block {block}: rank {r} at position {offset}, expected {offset}"
                )
            rank[mask] = r
        val = RankValuation(m, tuple(rank))
        val.validate()
        valuations.append(val)
    return valuations


def dump_rank_blocks(valuations: list[RankValuation]) -> str:
    lines = []
    for val in valuations:
        for r, mask in enumerate(val.order()):
            lines.append(f"{mask} {bitstring(mask, val.m)} {r}")
    return "\n".join(lines) + "\n"


# -- generalized value blocks --------------------------------------------------

def load_value_blocks(text: str) -> list[RealValuation]:
    rows = [line.split() for line in text.splitlines() if line.strip()]
    if not rows or len(rows[0]) != 2:
        raise LineCountMismatch("missing 'n m' header line")
    n, m = int(rows[0][0]), int(rows[0][1])
    n_sets = 1 << m
    if len(rows) != 1 + n * n_sets:
        raise LineCountMismatch(f"expected {1 + n * n_sets} lines, got {len(rows)}")
    valuations = []
    for block in range(n):
        values: list[int] = [0] * n_sets
        for offset in range(n_sets):
            fields = rows[1 + block * n_sets + offset]
            mask, bits, value = int(fields[0]), fields[1], int(fields[2])
            if mask != offset:
                raise LineCountMismatch(f"block {block}: expected set {offset}, got {mask}")
            if len(bits) != m or parse_bitstring(bits) != mask:
                raise BitstringMismatch(f"set {mask} does not match bitstring {bits}")
            values[mask] = value
        val = RealValuation(m, tuple(values))
        val.validate()
        valuations.append(val)
    return valuations


def dump_value_blocks(valuations: list[RealValuation]) -> str:
    n, m = len(valuations), valuations[0].m
    lines = [f"{n} {m}"]
    for val in valuations:
        for mask in range(1 << m):
            lines.append(f"{mask} {bitstring(mask, m)} {val.values[mask]}")
    return "\n".join(lines) + "\n"


# -- dyadic dumps ----------------------------------------------------------------

def dump_dyadic(m: int, values: tuple[int, ...]) -> str:
    return "\n".join(f"{mask} {values[mask]}" for mask in range(1 << m)) + "\n"


def load_dyadic(text: str) -> tuple[int, tuple[int, ...]]:
    rows = [line.split() for line in text.splitlines() if line.strip()]
    m = (len(rows) - 1).bit_length()
    if len(rows) != 1 << m:
        raise LineCountMismatch(f"line count {len(rows)} is not a power of two")
    values = [0] * len(rows)
    for offset, fields in enumerate(rows):
        mask, value = int(fields[0]), int(fields[1])
        if mask != offset:
            raise LineCountMismatch(f"expected set {offset}, got {mask}")
        values[mask] = value
    return m, tuple(values)
