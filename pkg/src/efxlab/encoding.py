"""CNF encoding of "no EFX allocation exists" for three agents and m goods.

Variables: for each agent i and pair of set numbers A < B, the variable
x(i, A, B) holds iff v_i(A) < v_i(B).  Variable ids use the dense pair
indexing (lexicographic over pairs), so ids run 1 .. 3*P*(P-1)/2 with
P = 2^m.  Where a comparison with A > B is needed, the negated variable of
the swapped pair is used; x(i, A, A) does not exist.

Clause families, emitted in this order with ascending loops inside each:

* monotonicity     - unit x(i, A, B) for every proper subset pair A < B
                     (deliberately verbose: one unit per pair, all agents)
* transitivity     - (-x(i,A,B) | -x(i,B,C) | x(i,A,C)) over ordered triples
                     of pairwise-distinct sets; with a level threshold k only
                     triples with all cardinalities below k are needed, and
                     triples where A is a proper subset of C are skipped
                     because the monotonicity unit already satisfies them
* item order       - unit x(0, {g_i}, {g_j}) for i < j, pinning agent 0's
                     singleton order (symmetry breaking)
* leveled          - units making every set of size >= k beat every smaller
                     set, with equal-size sets at levels >= k ordered by set
                     number
* no-EFX           - one clause per complete non-empty-bundle allocation,
                     2m literals each (two per good, duplicates kept): some
                     agent keeps strong envy after every single-good removal
"""

from __future__ import annotations

import sys
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from math import comb
from typing import IO

from .allocations import count_allocations, enumerate_bundle_tuples
from .bitset import cardinality, check_good_count, is_proper_subset, singleton_bits
from .dimacs import Clause, CnfFormula
from . import reference

NUM_AGENTS = 3

FAMILY_ORDER = ("monotonicity", "transitivity", "item_order", "leveled", "not_efx")


@dataclass(frozen=True)
class EncodeOptions:
    m: int
    level_k: int | None = None
    item_order: bool = False

    def validate(self) -> None:
        check_good_count(self.m)
        if self.level_k is not None and not 0 <= self.level_k <= self.m + 1:
            raise ValueError(f"level_k={self.level_k} outside 0..{self.m + 1}")


@dataclass
class EncodeStats:
    m: int
    level_k: int | None
    item_order: bool
    variables: int
    family_counts: dict[str, int]
    notes: list[str] = field(default_factory=list)

    @property
    def total_clauses(self) -> int:
        return sum(self.family_counts.values())


def num_variables(m: int) -> int:
    p = 1 << m
    return NUM_AGENTS * p * (p - 1) // 2


def pair_index(a: int, b: int, n_sets: int) -> int:
    """1-based position of (a, b) in the lexicographic order of pairs a < b."""
    if not 0 <= a < b < n_sets:
        raise ValueError(f"need 0 <= a < b < {n_sets}, got ({a}, {b})")
    return n_sets * a - a * (a + 1) // 2 + b - a


def var_id(agent: int, a: int, b: int, m: int) -> int:
    """Signed id of x(agent, a, b); for a > b the negation of the swapped pair."""
    if a == b:
        raise ValueError("comparison variables require two distinct sets")
    if not 0 <= agent < NUM_AGENTS:
        raise ValueError(f"agent {agent} out of range")
    p = 1 << m
    if a < b:
        return agent * (p * (p - 1) // 2) + pair_index(a, b, p)
    return -var_id(agent, b, a, m)


def decode_var(var: int, m: int) -> tuple[int, int, int]:
    """Inverse of var_id on positive ids: (agent, a, b) with a < b."""
    p = 1 << m
    per_agent = p * (p - 1) // 2
    if not 1 <= var <= NUM_AGENTS * per_agent:
        raise ValueError(f"variable {var} out of range")
    agent, index = divmod(var - 1, per_agent)
    index += 1
    a = 0
    while pair_index(a, p - 1, p) < index:
        a += 1
    b = a + (index - (p * a - a * (a + 1) // 2))
    return agent, a, b


# -- clause family streams ----------------------------------------------------

def monotonicity_clauses(m: int) -> Iterator[Clause]:
    n_sets = 1 << m
    for agent in range(NUM_AGENTS):
        for a in range(n_sets):
            for b in range(a + 1, n_sets):
                if is_proper_subset(a, b):
                    yield (var_id(agent, a, b, m),)


def transitivity_clauses(m: int, level_k: int | None = None) -> Iterator[Clause]:
    n_sets = 1 << m
    if level_k is None:
        sets = range(n_sets)
    else:
        sets = [s for s in range(n_sets) if cardinality(s) < level_k]
    for agent in range(NUM_AGENTS):
        for a in sets:
            for b in sets:
                if b == a:
                    continue
                lit_ab = var_id(agent, a, b, m)
                for c in sets:
                    if c == a or c == b or is_proper_subset(a, c):
                        continue
                    yield (-lit_ab, -var_id(agent, b, c, m), var_id(agent, a, c, m))


def item_order_clauses(m: int) -> Iterator[Clause]:
    for i in range(m):
        for j in range(i + 1, m):
            yield (var_id(0, 1 << i, 1 << j, m),)


def leveled_clauses(m: int, k: int) -> Iterator[Clause]:
    n_sets = 1 << m
    by_card: list[list[int]] = [[] for _ in range(m + 1)]
    for s in range(n_sets):
        by_card[cardinality(s)].append(s)
    for agent in range(NUM_AGENTS):
        for b_card in range(k, m + 1):
            for b in by_card[b_card]:
                for a_card in range(b_card):
                    for a in by_card[a_card]:
                        yield (var_id(agent, a, b, m),)
                for a in by_card[b_card]:
                    if a < b:
                        yield (var_id(agent, a, b, m),)


def not_efx_clauses(m: int) -> Iterator[Clause]:
    for bundles in enumerate_bundle_tuples(NUM_AGENTS, m):
        clause: list[int] = []
        for agent in range(NUM_AGENTS):
            own = bundles[agent]
            for j in range(NUM_AGENTS):
                if j == agent:
                    continue
                other = bundles[j]
                for bit in singleton_bits(other):
                    clause.append(-var_id(agent, other ^ bit, own, m))
        yield tuple(clause)


def encode(opts: EncodeOptions) -> Iterator[Clause]:
    """All clause families concatenated in the canonical order."""
    opts.validate()
    yield from monotonicity_clauses(opts.m)
    yield from transitivity_clauses(opts.m, opts.level_k)
    if opts.item_order:
        yield from item_order_clauses(opts.m)
    if opts.level_k is not None:
        yield from leveled_clauses(opts.m, opts.level_k)
    yield from not_efx_clauses(opts.m)


def encode_formula(opts: EncodeOptions) -> CnfFormula:
    """Materialized formula; intended for small m."""
    return CnfFormula(num_variables(opts.m), list(encode(opts)))


# -- closed-form counting (the two-pass writer's counting pre-pass) -----------

def clause_counts(opts: EncodeOptions) -> EncodeStats:
    """Exact per-family clause counts, computed without enumerating clauses."""
    opts.validate()
    m, k = opts.m, opts.level_k
    mono = NUM_AGENTS * (3**m - 2**m)
    if k is None:
        below = 1 << m
        subset_pairs = 3**m - 2**m
    else:
        below = sum(comb(m, c) for c in range(min(k, m + 1)))
        subset_pairs = sum(comb(m, c) * (2**c - 1) for c in range(min(k, m + 1)))
    trans = NUM_AGENTS * (below - 2) * (below * (below - 1) - subset_pairs)
    if k is None or k > m:
        lev = 0
    else:
        lev = NUM_AGENTS * sum(
            comb(m, b) * sum(comb(m, a) for a in range(b)) + comb(comb(m, b), 2)
            for b in range(k, m + 1)
        )
    counts = {
        "monotonicity": mono,
        "transitivity": trans,
        "item_order": comb(m, 2) if opts.item_order else 0,
        "leveled": lev,
        "not_efx": count_allocations(NUM_AGENTS, m),
    }
    stats = EncodeStats(m, k, opts.item_order, num_variables(m), counts)
    stats.notes.extend(reference.variable_count_notes(m, stats.variables))
    stats.notes.extend(reference.clause_total_notes(m, k, opts.item_order, counts))
    return stats


def write_dimacs_stream(
    opts: EncodeOptions, out: IO[str], comments: Iterable[str] = ()
) -> EncodeStats:
    """Stream the encoding to `out` without materializing the clause list.

    The header's clause count comes from the closed-form counting pre-pass,
    which the test suite pins against actual stream lengths.
    """
    stats = clause_counts(opts)
    for comment in comments:
        out.write(f"c {comment}\n")
    out.write(f"p cnf {stats.variables} {stats.total_clauses}\n")
    written = 0
    for clause in encode(opts):
        out.write(" ".join(map(str, clause)) + " 0\n")
        written += 1
    if written != stats.total_clauses:
        raise AssertionError(
            f"counting pre-pass predicted {stats.total_clauses} clauses, emitted {written}"
        )
    return stats


def write_dimacs_file(opts: EncodeOptions, path: str, comments: Iterable[str] = ()) -> EncodeStats:
    if path == "-":
        return write_dimacs_stream(opts, sys.stdout, comments)
    with open(path, "w", encoding="utf-8") as handle:
        return write_dimacs_stream(opts, handle, comments)
