import json

import pytest

from efxlab.cli import main
from efxlab.decoding import dump_rank_blocks, load_bundled_counterexample, load_value_blocks
from efxlab.dimacs import parse_dimacs, parse_model
from efxlab.valuations import random_monotone_rank_valuation


@pytest.fixture()
def counterexample_file(tmp_path):
    path = tmp_path / "counterexample8.txt"
    path.write_text(dump_rank_blocks(load_bundled_counterexample()))
    return path


def test_encode_writes_dimacs_with_reported_stats(tmp_path, capsys):
    out = tmp_path / "efx4.cnf"
    assert main(["encode", "-m", "4", "-k", "2", "--item-order", "-o", str(out)]) == 0
    printed = capsys.readouterr().out
    assert "total clauses: 711" in printed
    formula = parse_dimacs(out.read_text())
    assert len(formula.clauses) == 711
    assert formula.num_vars == 360


def test_stats_json_reports_reference_match(capsys):
    assert main(["stats", "-m", "6", "-k", "5", "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["total_clauses"] == 461_835
    assert any("matches" in note for note in payload["notes"])
    assert any("6084" in note for note in payload["notes"])


def test_sat_and_decode_pipeline(tmp_path, capsys):
    cnf = tmp_path / "tiny.cnf"
    cnf.write_text("p cnf 2 2\n1 0\n-1 2 0\n")
    assert main(["sat", "-i", str(cnf)]) == 0
    out = capsys.readouterr().out
    assert "s SATISFIABLE" in out
    model = parse_model(out)
    assert model.values[1] is True and model.values[2] is True


def test_sat_reports_unsat(tmp_path, capsys):
    cnf = tmp_path / "unsat.cnf"
    cnf.write_text("p cnf 1 2\n1 0\n-1 0\n")
    assert main(["sat", "-i", str(cnf)]) == 0
    assert "s UNSATISFIABLE" in capsys.readouterr().out


def test_preprocess_roundtrip(tmp_path, capsys):
    cnf = tmp_path / "in.cnf"
    cnf.write_text("p cnf 3 3\n1 0\n1 2 0\n-1 3 0\n")
    out = tmp_path / "out.cnf"
    assert main(["preprocess", "-i", str(cnf), "-o", str(out), "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["unsat"] is False
    reduced = parse_dimacs(out.read_text())
    assert (1,) in reduced.clauses and (3,) in reduced.clauses


def test_decode_model_into_blocks(tmp_path, capsys):
    from efxlab.dimacs import assignment_from_ranks
    from efxlab.encoding import var_id

    m = 3
    triple = [random_monotone_rank_valuation(m, 70 + j) for j in range(3)]
    assignment = assignment_from_ranks(
        [v.rank for v in triple], lambda i, a, b: var_id(i, a, b, m)
    )
    literals = [var if value else -var for var, value in sorted(assignment.values.items())]
    model = tmp_path / "model.txt"
    model.write_text("s SATISFIABLE\nv " + " ".join(map(str, literals)) + " 0\n")
    out = tmp_path / "vals.txt"
    assert main(["decode", "-i", str(model), "-m", "3", "-o", str(out)]) == 0
    from efxlab.decoding import load_rank_blocks

    assert load_rank_blocks(out.read_text(), 3, 3) == triple


def test_verify_expect_none_passes_on_counterexample(counterexample_file, capsys):
    code = main(
        ["verify", "--vals", str(counterexample_file), "--expect-none", "--jobs", "1"]
    )
    assert code == 0
    assert "EFX count: 0 / 5796" in capsys.readouterr().out


def test_verify_expect_some_fails_on_counterexample(counterexample_file, capsys):
    code = main(
        ["verify", "--vals", str(counterexample_file), "--expect-some", "--jobs", "1"]
    )
    assert code == 1


def test_submodular_pipeline(tmp_path, counterexample_file, capsys):
    dump = tmp_path / "dyadic0.txt"
    assert main(["submodular", "--vals", str(counterexample_file), "--agent", "0", "-o", str(dump)]) == 0
    assert main(["check-submodular", "-i", str(dump)]) == 0
    assert "submodular" in capsys.readouterr().out


def test_check_submodular_rejects_with_witness(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    values = [0, 1, 1, 1, 1, 1, 1, 1000]
    bad.write_text("\n".join(f"{i} {v}" for i, v in enumerate(values)) + "\n")
    assert main(["check-submodular", "-i", str(bad)]) == 1
    assert "not submodular" in capsys.readouterr().out


def test_extend_then_verify_extended(tmp_path, counterexample_file, capsys):
    out = tmp_path / "extended.txt"
    assert main(["extend", "--vals", str(counterexample_file), "-n", "4", "-o", str(out)]) == 0
    extended = load_value_blocks(out.read_text())
    assert len(extended) == 4 and extended[0].m == 9


def test_solve3_prints_verified_tag(counterexample_file, capsys):
    assert main(["solve3", "--vals", str(counterexample_file), "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["tag"] in ("tEFX", "EF1&EEFX")
    assert len(payload["bundles"]) == 3


def test_smt_subcommand(tmp_path, capsys):
    out = tmp_path / "efx4.smt2"
    assert main(["smt", "-m", "4", "-o", str(out), "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["disjuncts"] == 36
    assert "(set-logic QF_LRA)" in out.read_text()


def test_domain_errors_exit_one(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("0 00000000 1\n")
    assert main(["verify", "--vals", str(bad), "-m", "3"]) == 1
    assert "error:" in capsys.readouterr().err


def test_io_errors_exit_two(tmp_path, capsys):
    assert main(["verify", "--vals", str(tmp_path / "missing.txt")]) == 2
