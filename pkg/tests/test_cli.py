from __future__ import annotations

import random

import pytest

from fgreduce import oracles
from fgreduce.cli import main
from fgreduce.instances import (
    Gate,
    ThresholdCircuit,
    parse_circuit,
    parse_clique_instance,
    parse_dimacs,
    serialize_circuit,
    write_dimacs,
)
from fgreduce.generators import random_cnf


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_gen_deterministic(capsys):
    args = ("gen", "clique", "--n", "6", "--d", "2", "--k", "3", "--wmax", "50", "--seed", "1")
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert a == b and a.startswith("hg 6 2 3 ")


def test_gen_planted(capsys, tmp_path):
    code, out, _ = run(capsys, "gen", "clique", "--n", "6", "--planted", "--t", "0", "--seed", "3")
    assert code == 0
    assert oracles.solve_exact_weight_clique(parse_clique_instance(out)) is not None


def test_gen_tc_budget(capsys):
    _, out, _ = run(capsys, "gen", "tc", "--n", "8", "--wires", "16", "--depth", "3", "--seed", "2")
    c = parse_circuit(out)
    assert c.wire_count <= 16 and c.depth <= 3


def test_gen_other_kinds(capsys):
    assert run(capsys, "gen", "ov", "--k", "3", "--n", "4", "--dim", "5")[1].startswith("ov 3 5")
    assert "p cnf 5 9" in run(capsys, "gen", "cnf", "--n", "5", "--m", "9")[1]
    assert run(capsys, "gen", "tc", "--formula", "--n", "4", "--m", "6")[0] == 0


def test_gen_invalid(capsys):
    code, _, err = run(capsys, "gen", "clique", "--n", "0")
    assert code == 2 and "--n" in err


def test_reduce_clique_to_2ov(capsys, tmp_path):
    src = tmp_path / "in.clique"
    _, text, _ = run(capsys, "gen", "clique", "--n", "4", "--wmax", "20", "--planted", "--seed", "5")
    src.write_text(text)
    out = tmp_path / "out"
    assert run(capsys, "reduce", "clique-to-2ov", str(src), str(out), "--seed", "1")[0] == 0
    queries = sorted(out.glob("query_*.ov"))
    assert queries
    assert any(run(capsys, "solve", "ov", str(q))[0] == 0 for q in queries)
    trace = (out / "trace.tsv").read_text().splitlines()
    assert all(len(line.split("\t")) == 3 for line in trace)
    assert any(line.startswith("kov-to-2ov\tqueries\t") for line in trace)


def test_reduce_tc_and_circuit(capsys, tmp_path):
    c = ThresholdCircuit({0: Gate(0, "INPUT"), 1: Gate(1, "INPUT"), 2: Gate(2, "AND", (0, 1))}, (2,))
    src = tmp_path / "and.tc"
    src.write_text(serialize_circuit(c))
    out = tmp_path / "o"
    assert run(capsys, "reduce", "tc-to-cnf", str(src), str(out), "--beta", "3")[0] == 0
    files = sorted(out.glob("query_*.cnf"))
    assert len(files) == 1
    assert run(capsys, "solve", "cnf", str(files[0]))[0] == 0
    assert "c origin" in files[0].read_text()
    for pipeline in ("tc-to-cnf-branching", "formula-to-cnf"):
        assert run(capsys, "reduce", pipeline, str(src), str(tmp_path / pipeline))[0] == 0


def test_reduce_maxsat(capsys, tmp_path):
    f = random_cnf(random.Random(0), 6, 10, 2)
    src = tmp_path / "f.cnf"
    src.write_text(write_dimacs(f))
    out = tmp_path / "m"
    assert run(capsys, "reduce", "maxsat-to-clique", str(src), str(out), "--k", "4")[0] == 0
    inst = parse_clique_instance((out / "query_00000.clique").read_text())
    code, text, _ = run(capsys, "solve", "min-clique", str(out / "query_00000.clique"))
    assert code == 0
    best = oracles.solve_max_sat(f)[0]
    assert f"weight {-best}" in text
    assert -oracles.solve_min_weight_clique(inst)[1] == best


def test_reduce_failure_leaves_no_files(capsys, tmp_path):
    src = tmp_path / "bad.tc"
    src.write_text("tc 1\ng 0 INPUT\nout 0\nnonsense\n")
    out = tmp_path / "never"
    code, _, err = run(capsys, "reduce", "tc-to-cnf", str(src), str(out))
    assert code == 2 and not out.exists()


def test_solve_matches_library(capsys, tmp_path):
    f = random_cnf(random.Random(3), 8, 20, 3)
    p = tmp_path / "f.cnf"
    p.write_text(write_dimacs(f))
    code, out, _ = run(capsys, "solve", "cnf", str(p))
    sol = oracles.solve_cnf_sat(parse_dimacs(p.read_text()))
    if sol is None:
        assert code == 1 and out == "NO\n"
    else:
        assert code == 0 and out == f"YES\nassignment {''.join(map(str, sol))}\n"


def test_solve_exit_codes(capsys, tmp_path):
    bad = tmp_path / "bad"
    bad.write_text("garbage\n")
    assert run(capsys, "solve", "clique", str(bad))[0] == 2
    no = tmp_path / "no.clique"
    no.write_text("hg 3 2 3 1\ne 0 0\ne 1 0 0\ne 1 1 0\ne 1 2 0\ne 2 0 1 0\ne 2 0 2 0\ne 2 1 2 0\n")
    assert run(capsys, "solve", "clique", str(no)) == (1, "NO\n", "")
    _, text, _ = run(capsys, "gen", "clique", "--n", "12", "--k", "4", "--t", "999999")
    big = tmp_path / "big.clique"
    big.write_text(text)
    assert run(capsys, "solve", "clique", str(big), "--budget", "5")[0] == 3
    assert run(capsys, "solve", "tc", str(tmp_path / "missing"))[0] == 2


def test_verify(capsys):
    code, a, _ = run(capsys, "verify", "ov", "--trials", "5", "--seed", "4")
    assert code == 0 and "result PASS" in a
    assert run(capsys, "verify", "ov", "--trials", "5", "--seed", "4")[1] == a
    assert run(capsys, "verify", "nope", "--seed", "1")[0] == 2
    with pytest.raises(SystemExit):
        main(["verify", "ov"])
