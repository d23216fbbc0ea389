"""Minimal conflict-driven clause-learning SAT solver for desk-scale instances.

Two-watched-literal propagation, first-UIP learning, VSIDS-style activities
with phase saving, Luby restarts (unit 64), and LBD-aware learned-clause
reduction; standard defaults, untuned.  SAT answers always carry a model that
has been checked against every input clause before being returned; UNSAT
answers carry no certificate and are trusted at desk scale only.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .dimacs import Assignment, CnfFormula


class SolveStatus(Enum):
    SATISFIABLE = "satisfiable"
    UNSATISFIABLE = "unsatisfiable"
    UNKNOWN = "unknown"


@dataclass
class SolveResult:
    status: SolveStatus
    assignment: Assignment | None = None
    conflicts: int = 0
    decisions: int = 0
    restarts: int = 0


def luby(i: int) -> int:
    """i-th element (1-based) of the Luby restart sequence 1,1,2,1,1,2,4,..."""
    k = 1
    while (1 << k) - 1 < i:
        k += 1
    if (1 << k) - 1 == i:
        return 1 << (k - 1)
    return luby(i - ((1 << (k - 1)) - 1))


class _Solver:
    def __init__(self, formula: CnfFormula) -> None:
        self.num_vars = formula.num_vars
        self.clauses: list[list[int]] = []
        self.learned_from = 0
        self.value: list[int] = [0] * (self.num_vars + 1)  # 0 unset, 1 true, -1 false
        self.level: list[int] = [0] * (self.num_vars + 1)
        self.reason: list[int] = [-1] * (self.num_vars + 1)
        self.phase: list[int] = [-1] * (self.num_vars + 1)
        self.activity: list[float] = [0.0] * (self.num_vars + 1)
        self.act_inc = 1.0
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.prop_head = 0
        self.watches: dict[int, list[int]] = {}
        self.units: list[int] = []
        self.clause_lbd: list[int] = []
        self.ok = True
        self.conflicts = 0
        self.decisions = 0
        self.restarts = 0

        for clause in formula.clauses:
            self._add_clause(list(dict.fromkeys(clause)))
        self.learned_from = len(self.clauses)

    # -- clause plumbing -------------------------------------------------

    def _add_clause(self, lits: list[int], lbd: int = 0) -> int | None:
        if any(-lit in lits for lit in lits):
            return None  # tautology
        if len(lits) == 0:
            self.ok = False
            return None
        if len(lits) == 1:
            self.units.append(lits[0])
            return None
        idx = len(self.clauses)
        self.clauses.append(lits)
        self.clause_lbd.append(lbd)
        self.watches.setdefault(lits[0], []).append(idx)
        self.watches.setdefault(lits[1], []).append(idx)
        return idx

    def _lit_value(self, lit: int) -> int:
        val = self.value[abs(lit)]
        return val if lit > 0 else -val

    def _enqueue(self, lit: int, reason: int) -> bool:
        var = abs(lit)
        if self.value[var] != 0:
            return self._lit_value(lit) > 0
        self.value[var] = 1 if lit > 0 else -1
        self.level[var] = len(self.trail_lim)
        self.reason[var] = reason
        self.phase[var] = 1 if lit > 0 else -1
        self.trail.append(lit)
        return True

    def _propagate(self) -> int | None:
        """Returns the index of a conflicting clause, or None."""
        while self.prop_head < len(self.trail):
            lit = self.trail[self.prop_head]
            self.prop_head += 1
            false_lit = -lit
            watch_list = self.watches.get(false_lit)
            if not watch_list:
                continue
            kept: list[int] = []
            i = 0
            while i < len(watch_list):
                idx = watch_list[i]
                i += 1
                clause = self.clauses[idx]
                if clause[0] == false_lit:
                    clause[0], clause[1] = clause[1], clause[0]
                first = clause[0]
                if self._lit_value(first) > 0:
                    kept.append(idx)
                    continue
                moved = False
                for pos in range(2, len(clause)):
                    if self._lit_value(clause[pos]) >= 0:
                        clause[1], clause[pos] = clause[pos], clause[1]
                        self.watches.setdefault(clause[1], []).append(idx)
                        moved = True
                        break
                if moved:
                    continue
                kept.append(idx)
                if self._lit_value(first) < 0:
                    kept.extend(watch_list[i:])
                    self.watches[false_lit] = kept
                    return idx
                self._enqueue(first, idx)
            self.watches[false_lit] = kept
        return None

    # -- learning --------------------------------------------------------

    def _bump(self, var: int) -> None:
        self.activity[var] += self.act_inc
        if self.activity[var] > 1e100:
            for v in range(1, self.num_vars + 1):
                self.activity[v] *= 1e-100
            self.act_inc *= 1e-100

    def _analyze(self, conflict_idx: int) -> tuple[list[int], int, int]:
        """First-UIP learned clause, backjump level, and LBD."""
        learned: list[int] = []
        seen = [False] * (self.num_vars + 1)
        counter = 0
        propagated = 0  # trail literal whose reason is being expanded
        reason_idx = conflict_idx
        trail_pos = len(self.trail) - 1
        current_level = len(self.trail_lim)

        while True:
            for cl_lit in self.clauses[reason_idx]:
                if cl_lit == propagated:
                    continue
                var = abs(cl_lit)
                if seen[var] or self.level[var] == 0:
                    continue
                seen[var] = True
                self._bump(var)
                if self.level[var] == current_level:
                    counter += 1
                else:
                    learned.append(cl_lit)
            while not seen[abs(self.trail[trail_pos])]:
                trail_pos -= 1
            propagated = self.trail[trail_pos]
            seen[abs(propagated)] = False
            trail_pos -= 1
            counter -= 1
            if counter == 0:
                break
            reason_idx = self.reason[abs(propagated)]
        learned.insert(0, -propagated)

        if len(learned) == 1:
            backjump = 0
        else:
            best = max(range(1, len(learned)), key=lambda i: self.level[abs(learned[i])])
            learned[1], learned[best] = learned[best], learned[1]
            backjump = self.level[abs(learned[1])]
        lbd = len({self.level[abs(l)] for l in learned})
        return learned, backjump, lbd

    def _backtrack(self, target_level: int) -> None:
        if len(self.trail_lim) <= target_level:
            return
        cut = self.trail_lim[target_level]
        for lit in self.trail[cut:]:
            var = abs(lit)
            self.value[var] = 0
            self.reason[var] = -1
        del self.trail[cut:]
        del self.trail_lim[target_level:]
        self.prop_head = min(self.prop_head, len(self.trail))

    def _reduce_db(self) -> None:
        """Drop the weaker half of the learned clauses (high LBD, long)."""
        learned_ids = [
            idx
            for idx in range(self.learned_from, len(self.clauses))
            if self.clause_lbd[idx] > 2 and not self._is_reason(idx)
        ]
        learned_ids.sort(key=lambda idx: (self.clause_lbd[idx], len(self.clauses[idx])))
        drop = set(learned_ids[len(learned_ids) // 2 :])
        if not drop:
            return
        keep_map: dict[int, int] = {}
        new_clauses: list[list[int]] = []
        new_lbd: list[int] = []
        for idx, clause in enumerate(self.clauses):
            if idx in drop:
                continue
            keep_map[idx] = len(new_clauses)
            new_clauses.append(clause)
            new_lbd.append(self.clause_lbd[idx])
        self.clauses = new_clauses
        self.clause_lbd = new_lbd
        self.watches = {}
        for idx, clause in enumerate(self.clauses):
            self.watches.setdefault(clause[0], []).append(idx)
            self.watches.setdefault(clause[1], []).append(idx)
        for var in range(1, self.num_vars + 1):
            if self.reason[var] >= 0:
                self.reason[var] = keep_map[self.reason[var]]

    def _is_reason(self, idx: int) -> bool:
        first = self.clauses[idx][0]
        return self.value[abs(first)] != 0 and self.reason[abs(first)] == idx

    def _pick_branch_var(self) -> int:
        best = 0
        best_act = -1.0
        for var in range(1, self.num_vars + 1):
            if self.value[var] == 0 and self.activity[var] > best_act:
                best = var
                best_act = self.activity[var]
        return best

    # -- main loop ---------------------------------------------------------

    def solve(self, conflict_budget: int | None) -> SolveResult:
        if not self.ok:
            return SolveResult(SolveStatus.UNSATISFIABLE)
        for lit in self.units:
            if not self._enqueue(lit, -1):
                return SolveResult(SolveStatus.UNSATISFIABLE)
        if self._propagate() is not None:
            return SolveResult(SolveStatus.UNSATISFIABLE)

        restart_ceiling = 64 * luby(self.restarts + 1)
        conflicts_at_restart = 0
        reduce_ceiling = 4000

        while True:
            conflict = self._propagate()
            if conflict is not None:
                self.conflicts += 1
                conflicts_at_restart += 1
                if conflict_budget is not None and self.conflicts > conflict_budget:
                    return self._stats_result(SolveStatus.UNKNOWN)
                if len(self.trail_lim) == 0:
                    return self._stats_result(SolveStatus.UNSATISFIABLE)
                learned, backjump, lbd = self._analyze(conflict)
                self._backtrack(backjump)
                if len(learned) == 1:
                    if not self._enqueue(learned[0], -1):
                        return self._stats_result(SolveStatus.UNSATISFIABLE)
                else:
                    idx = self._add_clause(learned, lbd)
                    if idx is not None:
                        self._enqueue(learned[0], idx)
                self.act_inc /= 0.95
                if len(self.clauses) - self.learned_from > reduce_ceiling:
                    self._reduce_db()
                    reduce_ceiling += 2000
                continue

            if conflicts_at_restart >= restart_ceiling:
                self.restarts += 1
                conflicts_at_restart = 0
                restart_ceiling = 64 * luby(self.restarts + 1)
                self._backtrack(0)
                continue

            var = self._pick_branch_var()
            if var == 0:
                return self._stats_result(SolveStatus.SATISFIABLE)
            self.decisions += 1
            self.trail_lim.append(len(self.trail))
            self._enqueue(var * self.phase[var], -1)

    def _stats_result(self, status: SolveStatus) -> SolveResult:
        assignment = None
        if status is SolveStatus.SATISFIABLE:
            values = {var: self.value[var] > 0 for var in range(1, self.num_vars + 1)}
            assignment = Assignment(self.num_vars, values)
        return SolveResult(status, assignment, self.conflicts, self.decisions, self.restarts)


def solve(formula: CnfFormula, conflict_budget: int | None = None) -> SolveResult:
    """SAT/UNSAT/UNKNOWN for the formula; SAT models are verified before return.

    `conflict_budget` bounds the number of conflicts; exceeding it yields
    UNKNOWN rather than an answer.
    """
    result = _Solver(formula).solve(conflict_budget)
    if result.status is SolveStatus.SATISFIABLE:
        assert result.assignment is not None
        if not result.assignment.satisfies(formula):
            raise AssertionError("solver produced a model that fails a clause")
    return result
