"""Exhaustive verification of EFX (non-)existence and valuation analytics.

The verifier scans every complete allocation with non-empty bundles, counting
EFX allocations and building a histogram of how many (good, non-owner)
conditions each allocation violates.  The scan works on raw value tables so
it stays fast at the 5796- and 186480-allocation scales, can be partitioned
into owner-code ranges for parallel workers, and merges partial reports as a
commutative monoid, so serial and parallel runs produce identical reports.
"""

from __future__ import annotations

import json
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from multiprocessing import Pool

from .allocations import bundle_codes, bundles_of_code, count_allocations
from .bitset import cardinality, singleton_bits, submasks
from .fairness import Valuation
from .valuations import RankValuation


@dataclass
class VerifyReport:
    n: int
    m: int
    monotone: tuple[bool, ...]
    total_allocations: int = 0
    efx_count: int = 0
    violation_histogram: dict[int, int] = field(default_factory=dict)
    first_efx_witness: tuple[int, ...] | None = None
    first_witness_code: int | None = None

    def merge(self, other: VerifyReport) -> VerifyReport:
        hist = dict(self.violation_histogram)
        for bucket, count in other.violation_histogram.items():
            hist[bucket] = hist.get(bucket, 0) + count
        witness, code = self.first_efx_witness, self.first_witness_code
        if other.first_witness_code is not None and (code is None or other.first_witness_code < code):
            witness, code = other.first_efx_witness, other.first_witness_code
        return VerifyReport(
            self.n,
            self.m,
            self.monotone,
            self.total_allocations + other.total_allocations,
            self.efx_count + other.efx_count,
            hist,
            witness,
            code,
        )

    def to_text(self) -> str:
        lines = [f"agents: {self.n}", f"goods: {self.m}"]
        for agent, mono in enumerate(self.monotone):
            lines.append(f"valuation {agent}: {'monotone' if mono else 'NOT monotone'}")
        lines.append(f"allocations scanned: {self.total_allocations}")
        lines.append(f"EFX count: {self.efx_count} / {self.total_allocations}")
        for bucket in sorted(self.violation_histogram):
            lines.append(f"violations={bucket}: {self.violation_histogram[bucket]} allocations")
        if self.first_efx_witness is not None:
            lines.append(f"first EFX allocation: {list(self.first_efx_witness)}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps(
            {
                "agents": self.n,
                "goods": self.m,
                "monotone": list(self.monotone),
                "allocations_scanned": self.total_allocations,
                "efx_count": self.efx_count,
                "violation_histogram": {str(k): v for k, v in sorted(self.violation_histogram.items())},
                "first_efx_witness": (
                    list(self.first_efx_witness) if self.first_efx_witness is not None else None
                ),
            },
            indent=2,
        )


def value_tables(valuations: Sequence[Valuation]) -> list[list[int]]:
    n_sets = 1 << valuations[0].m
    return [[v.value(mask) for mask in range(n_sets)] for v in valuations]


def _is_monotone_table(table: list[int], m: int) -> bool:
    n_sets = 1 << m
    for mask in range(n_sets):
        for bit in singleton_bits(~mask & (n_sets - 1)):
            if table[mask] > table[mask | bit]:
                return False
    return True


def _scan_range(
    tables: list[list[int]], n: int, m: int, start: int, stop: int
) -> tuple[int, int, dict[int, int], tuple[int, ...] | None, int | None]:
    total = efx_count = 0
    hist: dict[int, int] = {}
    witness: tuple[int, ...] | None = None
    witness_code: int | None = None
    for code in bundle_codes(n, m, start, stop):
        bundles = bundles_of_code(code, n, m)
        violations = 0
        for j in range(n):
            bundle = bundles[j]
            rest = bundle
            while rest:
                bit = rest & -rest
                rest ^= bit
                removed = bundle ^ bit
                for i in range(n):
                    if i != j and tables[i][removed] > tables[i][bundles[i]]:
                        violations += 1
        total += 1
        hist[violations] = hist.get(violations, 0) + 1
        if violations == 0:
            efx_count += 1
            if witness_code is None:
                witness, witness_code = bundles, code
    return total, efx_count, hist, witness, witness_code


def verify(valuations: Sequence[Valuation], jobs: int = 1) -> VerifyReport:
    """Scan all complete non-empty allocations of the instance.

    With jobs > 1 the owner-code range is split into contiguous chunks
    handled by worker processes; the merged report is identical to a serial
    scan.
    """
    n, m = len(valuations), valuations[0].m
    if n > m:
        raise ValueError(f"need at least as many goods as agents (n={n}, m={m})")
    tables = value_tables(valuations)
    monotone = tuple(_is_monotone_table(table, m) for table in tables)
    report = VerifyReport(n, m, monotone)

    code_space = n**m
    if jobs <= 1:
        parts = [_scan_range(tables, n, m, 0, code_space)]
    else:
        bounds = [code_space * i // jobs for i in range(jobs + 1)]
        args = [
            (tables, n, m, bounds[i], bounds[i + 1])
            for i in range(jobs)
            if bounds[i] < bounds[i + 1]
        ]
        with Pool(processes=len(args)) as pool:
            parts = pool.starmap(_scan_range, args)

    for total, efx_count, hist, witness, code in parts:
        report = report.merge(
            VerifyReport(n, m, monotone, total, efx_count, hist, witness, code)
        )
    expected = count_allocations(n, m)
    if report.total_allocations != expected:
        raise AssertionError(
            f"scanned {report.total_allocations} allocations, expected {expected}"
        )
    return report


# -- analytics -----------------------------------------------------------------

def marginal_values(v: RankValuation, good: int, result_size: int) -> list[int]:
    """Marginals v(S + good) - v(S) across all S with |S + good| = result_size.

    S ranges over the sets of size result_size - 1 that do not contain the
    good, so the multiset has C(m-1, result_size-1) entries, sorted ascending.
    """
    if not 0 <= good < v.m:
        raise ValueError(f"good {good} out of range")
    if not 1 <= result_size <= v.m:
        raise ValueError(f"result size {result_size} out of range")
    bit = 1 << good
    values = sorted(
        v.rank[mask | bit] - v.rank[mask]
        for mask in range(1 << v.m)
        if not mask & bit and cardinality(mask) == result_size - 1
    )
    return values


def iter_mms_violations(v: RankValuation) -> Iterator[tuple[int, int, int, int]]:
    """Canonical witnesses that v is not MMS-feasible.

    Yields (a, b, c, d) with a|b == c|d, a&b == 0 == c&d, and
    min(v(a), v(b)) > max(v(c), v(d)); within each pair the smaller set
    number comes first, and each unordered pair of splits is visited once
    (ground sets ascending, splits by ascending first part).
    """
    n_sets = 1 << v.m
    rank = v.rank
    for ground in range(n_sets):
        splits = [(part, ground ^ part) for part in submasks(ground) if part < ground ^ part]
        for i, (a, b) in enumerate(splits):
            low_ab = min(rank[a], rank[b])
            high_ab = max(rank[a], rank[b])
            for c, d in splits[i + 1 :]:
                if low_ab > max(rank[c], rank[d]):
                    yield (a, b, c, d)
                elif min(rank[c], rank[d]) > high_ab:
                    yield (c, d, a, b)


def find_mms_violations(
    v: RankValuation, limit: int | None = None
) -> list[tuple[int, int, int, int]]:
    """First `limit` canonical MMS violations (all of them when limit is None)."""
    found = []
    for quad in iter_mms_violations(v):
        found.append(quad)
        if limit is not None and len(found) >= limit:
            break
    return found


def count_mms_violation_tuples(v: RankValuation) -> int:
    """Ordered quadruples (A, B, C, D) meeting the violation condition.

    Each canonical witness corresponds to four ordered quadruples (either
    pair may be written in either order), which is the count the condition
    itself defines.
    """
    return 4 * sum(1 for _ in iter_mms_violations(v))
