"""Batch command-line front end for the reproduction workflows.

Every subcommand is a thin adapter over the library modules; no fairness or
encoding logic lives here.  Exit codes: 0 on success, 1 on a domain failure
(for example an EFX allocation found under --expect-none, or a solver that
ran out of budget), 2 on usage or I/O errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from collections.abc import Sequence

from . import acceptance, cdcl, smtlib, three_agent, verification
from .decoding import (
    decode_valuations,
    dump_dyadic,
    dump_rank_blocks,
    dump_value_blocks,
    load_dyadic,
    load_rank_blocks,
    load_value_blocks,
)
from .dimacs import parse_dimacs, parse_model, write_dimacs
from .encoding import EncodeOptions, clause_counts, write_dimacs_file
from .errors import EfxLabError
from .simplify import preprocess
from .submodular import DyadicValuation, extend_counterexample, is_submodular, submodular_realize

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(text)


def _load_valuations(path: str, n: int, m: int, extended: bool):
    text = _read(path)
    if extended:
        return load_value_blocks(text)
    return load_rank_blocks(text, n, m)


def _stats_payload(stats) -> dict:
    return {
        "m": stats.m,
        "level_k": stats.level_k,
        "item_order": stats.item_order,
        "variables": stats.variables,
        "families": stats.family_counts,
        "total_clauses": stats.total_clauses,
        "notes": stats.notes,
    }


def _print_stats(stats, as_json: bool) -> None:
    if as_json:
        print(json.dumps(_stats_payload(stats), indent=2))
        return
    print(f"variables: {stats.variables}")
    for family, count in stats.family_counts.items():
        print(f"{family}: {count}")
    print(f"total clauses: {stats.total_clauses}")
    for note in stats.notes:
        print(f"note: {note}")


def cmd_encode(args: argparse.Namespace) -> int:
    opts = EncodeOptions(args.m, args.level, args.item_order)
    stats = write_dimacs_file(
        opts,
        args.output,
        comments=[f"no-EFX encoding: m={args.m} level_k={args.level} item_order={args.item_order}"],
    )
    _print_stats(stats, args.json)
    return EXIT_OK


def cmd_stats(args: argparse.Namespace) -> int:
    stats = clause_counts(EncodeOptions(args.m, args.level, args.item_order))
    _print_stats(stats, args.json)
    return EXIT_OK


def cmd_preprocess(args: argparse.Namespace) -> int:
    formula = parse_dimacs(_read(args.input))
    result = preprocess(formula)
    payload = {
        "input_clauses": result.stats.input_clauses,
        "propagated_units": result.stats.propagated_units,
        "subsumed_removed": result.stats.subsumed_removed,
        "output_clauses": result.stats.output_clauses,
        "fixed_variables": len(result.fixed),
        "unsat": result.unsat,
    }
    if args.output:
        # the written file re-adds the fixed assignments as unit clauses so
        # it stands alone; output_clauses counts the residual without them
        standalone = result.as_standalone_formula()
        payload["written_clauses"] = len(standalone.clauses)
        _write(args.output, write_dimacs(standalone))
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        for key, value in payload.items():
            print(f"{key}: {value}")
    return EXIT_OK


def cmd_sat(args: argparse.Namespace) -> int:
    formula = parse_dimacs(_read(args.input))
    result = cdcl.solve(formula, conflict_budget=args.budget)
    if result.status is cdcl.SolveStatus.SATISFIABLE:
        print("s SATISFIABLE")
        assert result.assignment is not None
        literals = [
            var if result.assignment.values[var] else -var
            for var in range(1, formula.num_vars + 1)
        ]
        for start in range(0, len(literals), 20):
            chunk = literals[start : start + 20]
            tail = " 0" if start + 20 >= len(literals) else ""
            print("v " + " ".join(map(str, chunk)) + tail)
        return EXIT_OK
    if result.status is cdcl.SolveStatus.UNSATISFIABLE:
        print("s UNSATISFIABLE")
        return EXIT_OK
    print("s UNKNOWN")
    return EXIT_DOMAIN


def cmd_decode(args: argparse.Namespace) -> int:
    assignment = parse_model(_read(args.input))
    valuations = decode_valuations(assignment, args.m)
    _write(args.output, dump_rank_blocks(valuations))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    valuations = _load_valuations(args.vals, args.agents, args.m, args.extended)
    report = verification.verify(valuations, jobs=args.jobs)
    print(report.to_json() if args.json else report.to_text(), end="")
    if args.expect_none and report.efx_count != 0:
        return EXIT_DOMAIN
    if args.expect_some and report.efx_count == 0:
        return EXIT_DOMAIN
    return EXIT_OK


def cmd_submodular(args: argparse.Namespace) -> int:
    valuations = load_rank_blocks(_read(args.vals), args.agents, args.m)
    dyadic = submodular_realize(valuations[args.agent])
    _write(args.output, dump_dyadic(dyadic.m, dyadic.values))
    return EXIT_OK


def cmd_check_submodular(args: argparse.Namespace) -> int:
    m, values = load_dyadic(_read(args.input))
    ok, witness = is_submodular(DyadicValuation(m, values))
    if ok:
        print("submodular")
        return EXIT_OK
    small, large, good = witness
    print(f"not submodular: adding good {good} gains more on {large} than on its subset {small}")
    return EXIT_DOMAIN


def cmd_extend(args: argparse.Namespace) -> int:
    base = load_rank_blocks(_read(args.vals), 3, 8)
    extended = extend_counterexample(base, args.agents)
    _write(args.output, dump_value_blocks(extended))
    return EXIT_OK


def cmd_solve3(args: argparse.Namespace) -> int:
    valuations = load_rank_blocks(_read(args.vals), 3, args.m)
    result = three_agent.solve_three(valuations)
    if args.json:
        payload = {
            "tag": result.tag,
            "bundles": list(result.bundles),
            "iterations": result.iterations,
            "certificates": (
                {str(agent): list(parts) for agent, parts in result.certificates.items()}
                if result.certificates
                else None
            ),
        }
        print(json.dumps(payload, indent=2))
        return EXIT_OK
    print(f"tag: {result.tag}")
    for agent, bundle in enumerate(result.bundles):
        goods = [i for i in range(args.m) if bundle >> i & 1]
        print(f"agent {agent}: bundle {bundle} (goods {goods})")
    print(f"iterations: {result.iterations}")
    if result.certificates:
        for agent, parts in sorted(result.certificates.items()):
            print(f"certificate agent {agent}: parts {list(parts)}")
    return EXIT_OK


def cmd_smt(args: argparse.Namespace) -> int:
    text, stats = smtlib.emit_smtlib(args.m)
    _write(args.output, text)
    payload = {
        "m": stats.m,
        "constants": stats.constants,
        "disjuncts": stats.disjuncts,
        "inequalities": stats.inequalities,
    }
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        for key, value in payload.items():
            print(f"{key}: {value}")
    return EXIT_OK


def cmd_selfcheck(args: argparse.Namespace) -> int:
    skip = frozenset({"solving", "extension", "three-agent"} if args.quick else ())
    results = []
    for result in acceptance.run_all(jobs=args.jobs, skip=skip):
        results.append(result)
        print(result.line())
        if args.verbose or not result.passed:
            for detail in result.details:
                print(f"    {detail}")
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    return EXIT_DOMAIN if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="efxlab",
        description="Encode, solve, verify, and construct around EFX existence.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    encode = sub.add_parser("encode", help="write the no-EFX CNF in DIMACS format")
    encode.add_argument("-m", type=int, required=True, help="number of goods")
    encode.add_argument("-k", "--level", type=int, default=None, help="level threshold")
    encode.add_argument("--item-order", action="store_true", help="pin agent 0's singleton order")
    encode.add_argument("-o", "--output", default="-", help="output path (- for stdout)")
    encode.add_argument("--json", action="store_true")
    encode.set_defaults(func=cmd_encode)

    stats = sub.add_parser("stats", help="per-family clause counts without writing a file")
    stats.add_argument("-m", type=int, required=True)
    stats.add_argument("-k", "--level", type=int, default=None)
    stats.add_argument("--item-order", action="store_true")
    stats.add_argument("--json", action="store_true")
    stats.set_defaults(func=cmd_stats)

    pre = sub.add_parser("preprocess", help="unit propagation + subsumption on a DIMACS file")
    pre.add_argument("-i", "--input", required=True)
    pre.add_argument("-o", "--output", default=None)
    pre.add_argument("--json", action="store_true")
    pre.set_defaults(func=cmd_preprocess)

    sat = sub.add_parser("sat", help="run the embedded CDCL solver on a DIMACS file")
    sat.add_argument("-i", "--input", required=True)
    sat.add_argument("--budget", type=int, default=None, help="conflict budget")
    sat.set_defaults(func=cmd_sat)

    decode = sub.add_parser("decode", help="turn a model (v lines) into valuation blocks")
    decode.add_argument("-i", "--input", required=True)
    decode.add_argument("-m", type=int, required=True)
    decode.add_argument("-o", "--output", default="-")
    decode.set_defaults(func=cmd_decode)

    verify = sub.add_parser("verify", help="exhaustively scan all allocations of an instance")
    verify.add_argument("--vals", required=True)
    verify.add_argument("-n", "--agents", type=int, default=3)
    verify.add_argument("-m", type=int, default=8)
    verify.add_argument("--extended", action="store_true", help="input has an 'n m' header with raw values")
    verify.add_argument("--expect-none", action="store_true", help="exit 1 if any EFX allocation exists")
    verify.add_argument("--expect-some", action="store_true", help="exit 1 if no EFX allocation exists")
    verify.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    verify.add_argument("--json", action="store_true")
    verify.set_defaults(func=cmd_verify)

    sub_sm = sub.add_parser("submodular", help="dyadic submodular realization of one valuation")
    sub_sm.add_argument("--vals", required=True)
    sub_sm.add_argument("-n", "--agents", type=int, default=3)
    sub_sm.add_argument("-m", type=int, default=8)
    sub_sm.add_argument("--agent", type=int, default=0)
    sub_sm.add_argument("-o", "--output", default="-")
    sub_sm.set_defaults(func=cmd_submodular)

    check_sm = sub.add_parser("check-submodular", help="diminishing-returns check of a dyadic dump")
    check_sm.add_argument("-i", "--input", required=True)
    check_sm.set_defaults(func=cmd_check_submodular)

    extend = sub.add_parser("extend", help="extend the 8-good instance to n >= 4 agents")
    extend.add_argument("--vals", required=True)
    extend.add_argument("-n", "--agents", type=int, required=True)
    extend.add_argument("-o", "--output", default="-")
    extend.set_defaults(func=cmd_extend)

    solve3 = sub.add_parser("solve3", help="run the constructive three-agent algorithm")
    solve3.add_argument("--vals", required=True)
    solve3.add_argument("-m", type=int, default=8)
    solve3.add_argument("--json", action="store_true")
    solve3.set_defaults(func=cmd_solve3)

    smt = sub.add_parser("smt", help="emit the QF_LRA encoding as SMT-LIB 2")
    smt.add_argument("-m", type=int, required=True)
    smt.add_argument("-o", "--output", default="-")
    smt.add_argument("--json", action="store_true")
    smt.set_defaults(func=cmd_smt)

    selfcheck = sub.add_parser("selfcheck", help="run the acceptance suite")
    selfcheck.add_argument("--quick", action="store_true", help="skip the slow criteria")
    selfcheck.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    selfcheck.add_argument("-v", "--verbose", action="store_true")
    selfcheck.set_defaults(func=cmd_selfcheck)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except EfxLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
