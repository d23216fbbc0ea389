"""Toolkit for the EFX existence question at desk scale.

Subset orders as rank valuations, exhaustive fairness verification, the
CNF/SMT encodings of "no EFX allocation exists", a small CDCL solver with
CNF preprocessing, submodular realizations and counterexample extensions,
and the constructive three-agent tEFX / EF1-and-EEFX algorithm.
"""

from .allocations import Allocation, count_allocations, enumerate_allocations
from .decoding import (
    decode_valuations,
    dump_rank_blocks,
    load_bundled_counterexample,
    load_rank_blocks,
)
from .encoding import EncodeOptions, clause_counts, encode_formula, num_variables, var_id
from .fairness import (
    EnvyGraph,
    eefx_certificate,
    envy_graph,
    is_ef1_feasible,
    is_efx,
    is_efx_feasible,
    is_tefx_feasible,
    rotate_cycle,
    strongly_envies,
    violated_condition_count,
)
from .submodular import (
    DyadicValuation,
    add_dummy_goods,
    extend_counterexample,
    is_submodular,
    submodular_realize,
)
from .three_agent import (
    TriSolveResult,
    equalize_for_valuation,
    minimal_satisfying_subset,
    solve_three,
    transfer_split,
)
from .valuations import (
    RankValuation,
    RealValuation,
    leveled,
    perturb_nondegenerate,
    random_monotone_rank_valuation,
    rank_valuation_from_order,
)
from .verification import VerifyReport, find_mms_violations, marginal_values, verify

__all__ = [
    "Allocation",
    "DyadicValuation",
    "EncodeOptions",
    "EnvyGraph",
    "RankValuation",
    "RealValuation",
    "TriSolveResult",
    "VerifyReport",
    "add_dummy_goods",
    "clause_counts",
    "count_allocations",
    "decode_valuations",
    "dump_rank_blocks",
    "eefx_certificate",
    "encode_formula",
    "enumerate_allocations",
    "envy_graph",
    "equalize_for_valuation",
    "extend_counterexample",
    "find_mms_violations",
    "is_ef1_feasible",
    "is_efx",
    "is_efx_feasible",
    "is_submodular",
    "is_tefx_feasible",
    "leveled",
    "load_bundled_counterexample",
    "load_rank_blocks",
    "marginal_values",
    "minimal_satisfying_subset",
    "num_variables",
    "perturb_nondegenerate",
    "random_monotone_rank_valuation",
    "rank_valuation_from_order",
    "rotate_cycle",
    "solve_three",
    "strongly_envies",
    "submodular_realize",
    "transfer_split",
    "var_id",
    "verify",
    "violated_condition_count",
]
