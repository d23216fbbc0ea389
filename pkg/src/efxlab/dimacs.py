"""CNF formula container, DIMACS text round-trip, and model-line parsing."""

from __future__ import annotations

from collections.abc import Callable, Iterable, Iterator
from dataclasses import dataclass, field

from .errors import (
    DuplicateAssignment,
    HeaderMismatch,
    LiteralOutOfRange,
    MalformedLiteral,
    MissingTerminator,
)

Clause = tuple[int, ...]


@dataclass
class CnfFormula:
    num_vars: int
    clauses: list[Clause]

    def check_literals(self) -> None:
        for clause in self.clauses:
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise LiteralOutOfRange(f"literal {lit} invalid for {self.num_vars} variables")


@dataclass
class Assignment:
    """Tri-state assignment: variables absent from `values` are unassigned."""

    num_vars: int
    values: dict[int, bool] = field(default_factory=dict)

    def get(self, var: int) -> bool | None:
        return self.values.get(var)

    def value_of(self, lit: int) -> bool | None:
        val = self.values.get(abs(lit))
        if val is None:
            return None
        return val if lit > 0 else not val

    def satisfies(self, formula: CnfFormula) -> bool:
        return all(any(self.value_of(lit) for lit in clause) for clause in formula.clauses)


def parse_dimacs(text: str) -> CnfFormula:
    """Parse DIMACS CNF; comments ignored, header validated against the body."""
    num_vars: int | None = None
    num_clauses: int | None = None
    clauses: list[Clause] = []
    pending: list[int] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if parts[:2] != ["p", "cnf"] or len(parts) != 4:
                raise HeaderMismatch(f"line {lineno}: malformed header {raw!r}")
            try:
                num_vars, num_clauses = int(parts[2]), int(parts[3])
            except ValueError as exc:
                raise HeaderMismatch(f"line {lineno}: non-integer header counts") from exc
            continue
        if num_vars is None:
            raise HeaderMismatch(f"line {lineno}: clause before header")
        for token in line.split():
            try:
                lit = int(token)
            except ValueError as exc:
                raise MalformedLiteral(f"line {lineno}: bad literal {token!r}") from exc
            if lit == 0:
                clauses.append(tuple(pending))
                pending.clear()
            else:
                if abs(lit) > num_vars:
                    raise LiteralOutOfRange(
                        f"line {lineno}: literal {lit} exceeds {num_vars} variables"
                    )
                pending.append(lit)

    if num_vars is None or num_clauses is None:
        raise HeaderMismatch("missing 'p cnf' header")
    if pending:
        raise MissingTerminator("final clause lacks the 0 terminator")
    if len(clauses) != num_clauses:
        raise HeaderMismatch(f"header says {num_clauses} clauses, body has {len(clauses)}")
    return CnfFormula(num_vars, clauses)


def write_dimacs(formula: CnfFormula, comments: Iterable[str] = ()) -> str:
    """Normalized DIMACS text: comments, header, one clause per line."""
    lines = [f"c {comment}" for comment in comments]
    lines.append(f"p cnf {formula.num_vars} {len(formula.clauses)}")
    for clause in formula.clauses:
        lines.append(" ".join(str(lit) for lit in clause) + " 0")
    return "\n".join(lines) + "\n"


def iter_model_literals(text: str) -> Iterator[int]:
    """Signed literals from SAT-competition style `v` lines, until the 0."""
    done = False
    for raw in text.splitlines():
        line = raw.strip()
        if not line.startswith("v"):
            continue
        for token in line[1:].split():
            try:
                lit = int(token)
            except ValueError as exc:
                raise MalformedLiteral(f"bad model literal {token!r}") from exc
            if lit == 0:
                done = True
                return
            yield lit
    if not done:
        raise MissingTerminator("model lines lack the 0 terminator")


def parse_model(text: str, num_vars: int | None = None) -> Assignment:
    """Assignment from solver output.

    Accepts single- or multi-line `v` blocks (an optional `s SATISFIABLE`
    line is ignored). Repeating a literal is allowed; assigning both
    polarities raises DuplicateAssignment.
    """
    values: dict[int, bool] = {}
    max_var = 0
    for lit in iter_model_literals(text):
        var = abs(lit)
        if num_vars is not None and var > num_vars:
            raise LiteralOutOfRange(f"model literal {lit} exceeds {num_vars} variables")
        polarity = lit > 0
        if values.get(var, polarity) != polarity:
            raise DuplicateAssignment(f"variable {var} assigned both polarities")
        values[var] = polarity
        max_var = max(max_var, var)
    return Assignment(num_vars if num_vars is not None else max_var, values)


def assignment_from_ranks(
    rank_tables: list[tuple[int, ...]], var_of: Callable[[int, int, int], int]
) -> Assignment:
    """Full assignment encoding `v_i(A) < v_i(B)` comparisons of rank tables."""
    values: dict[int, bool] = {}
    n_sets = len(rank_tables[0])
    for agent, rank in enumerate(rank_tables):
        for a in range(n_sets):
            for b in range(a + 1, n_sets):
                values[var_of(agent, a, b)] = rank[a] < rank[b]
    num_vars = len(rank_tables) * n_sets * (n_sets - 1) // 2
    return Assignment(num_vars, values)
