"""Exception types raised across the library."""

from __future__ import annotations


class EfxLabError(Exception):
    """Base class for all library errors."""


# -- valuations ---------------------------------------------------------------

class NotAPermutation(EfxLabError):
    """A subset order / rank table does not cover every subset exactly once."""


class MonotonicityViolated(EfxLabError):
    """A valuation ranks a proper subset at or above one of its supersets."""

    def __init__(self, subset: int, superset: int) -> None:
        super().__init__(f"subset {subset} ranked at or above superset {superset}")
        self.subset = subset
        self.superset = superset


# -- fairness -----------------------------------------------------------------

class OverlappingBundles(EfxLabError):
    """Two bundles that must be disjoint share a good."""


class ArityMismatch(EfxLabError):
    """Number of valuations does not match the allocation's agent count."""


class IndexOutOfRange(EfxLabError):
    """Bundle or agent index outside the allocation."""


class BadPartitionInput(EfxLabError):
    """Bundle/rest pair does not partition the full good set."""


class NotACycle(EfxLabError):
    """The given agent sequence is not a directed cycle of the envy graph."""


# -- DIMACS / models ----------------------------------------------------------

class DimacsError(EfxLabError):
    """Base class for CNF / model text format errors."""


class HeaderMismatch(DimacsError):
    """DIMACS header counts disagree with the body."""


class MalformedLiteral(DimacsError):
    """A token is not a valid signed literal."""


class MissingTerminator(DimacsError):
    """A clause line does not end with the 0 terminator."""


class DuplicateAssignment(DimacsError):
    """A model assigns the same variable both polarities."""


class LiteralOutOfRange(DimacsError):
    """A literal refers to a variable beyond the declared count."""


# -- decoding -----------------------------------------------------------------

class IncompleteAssignment(EfxLabError):
    """The assignment leaves a comparison variable undecided."""

    def __init__(self, var: int) -> None:
        super().__init__(f"variable {var} is unassigned")
        self.var = var


class NotATotalOrder(EfxLabError):
    """The decoded comparison relation contains a cycle."""

    def __init__(self, cycle: tuple[int, int, int]) -> None:
        super().__init__(f"comparison 3-cycle among sets {cycle}")
        self.cycle = cycle


class ThreeValsFormatError(EfxLabError):
    """Base class for valuation text format errors."""


class LineCountMismatch(ThreeValsFormatError):
    pass


class BitstringMismatch(ThreeValsFormatError):
    pass


class RankNotIncreasing(ThreeValsFormatError):
    pass


# -- three-agent algorithm ----------------------------------------------------

class PredicateFailsOnPool(EfxLabError):
    """minimal_satisfying_subset was called with a predicate false on the pool."""


class SetupViolated(EfxLabError):
    """A split subroutine was entered without its required inequalities."""


class InvariantBroken(EfxLabError):
    """An internal loop invariant failed; indicates a bug, never expected."""


class NonTermination(EfxLabError):
    """The three-agent loop exceeded its partition-count bound."""
