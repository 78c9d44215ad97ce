from __future__ import annotations

import itertools
import math
import random

import networkx as nx
import pytest

from fgreduce import oracles
from fgreduce.circuit_compile import (
    DecompositionError,
    build_adder,
    build_binth,
    constraint_to_cnf,
    dag_depth,
    decompose_tree,
    depth_exponent,
    extract_subcircuit,
    fold_constants,
    formula_to_kcnf,
    plan_branching,
    table_to_cnf,
    tc_to_kcnf,
    tc_to_kcnf_branching,
    truth_table,
    valiant_reduce_depth,
    verify_decomposition,
)
from fgreduce.generators import random_dag, random_formula, random_threshold_circuit
from fgreduce.instances import CnfFormula, Gate, ThresholdCircuit


def _circuit(n, body, out):
    gates = {i: Gate(i, "INPUT") for i in range(n)}
    for gid, kind, ins, *theta in body:
        gates[gid] = Gate(gid, kind, tuple(ins), theta[0] if theta else None)
    return ThresholdCircuit(gates, (out,))


def _strong_equisat(circuit, cnf):
    """For every input x: C(x) = 1 iff some setting of the auxiliaries satisfies the CNF."""
    n = circuit.n
    for x in itertools.product((0, 1), repeat=n):
        units = tuple((v if b else -v,) for v, b in zip(range(1, n + 1), x))
        pinned = CnfFormula(cnf.num_vars, cnf.clauses + units)
        assert (oracles.solve_cnf_sat(pinned) is not None) == bool(oracles.eval_circuit(circuit, x)[0]), x


# --- gadgets ------------------------------------------------------------------


def test_adder_examples():
    c = build_adder(1, 2)
    assert oracles.eval_outputs(c, (1, 1)) == (0, 1)
    ident = build_adder(3, 1)
    assert ident.outputs == ident.input_ids


def test_binth_examples():
    assert oracles.eval_outputs(build_binth(3, 5), (1, 0, 1)) == (1,)
    assert oracles.eval_outputs(build_binth(3, 6), (1, 0, 1)) == (0,)


# --- decomposition ------------------------------------------------------------


def _random_tree(rng, m):
    children = {0: []}
    for v in range(1, m):
        cands = [u for u in children if len(children[u]) < 2]
        p = rng.choice(cands)
        children[p].append(v)
        children[v] = []
    return children


def test_decompose_small_tree():
    dec = decompose_tree({0: [1], 1: []}, 0, 4)
    assert dec.A == frozenset() or len(dec.A) * 4 <= 12


def test_decompose_path():
    path = {i: [i + 1] for i in range(15)}
    path[15] = []
    dec = decompose_tree(path, 0, 4)
    verify_decomposition(dec, 16)
    assert len(dec.A) <= 24 and all(c.size <= 4 for c in dec.components)


@pytest.mark.parametrize("ell", [8, 16, 32])
def test_decompose_random_trees(ell):
    rng = random.Random(ell)
    for _ in range(70):
        m = rng.randint(1, 500)
        dec = decompose_tree(_random_tree(rng, m), 0, ell)
        verify_decomposition(dec, m)


def test_verify_decomposition_catches_bad_input():
    path = {i: [i + 1] for i in range(9)}
    path[9] = []
    dec = decompose_tree(path, 0, 4)
    with pytest.raises(DecompositionError):
        verify_decomposition(dec, 11)


# --- cones and CNF ------------------------------------------------------------


def test_extract_subcircuit():
    c = _circuit(2, [(2, "AND", (0, 1)), (3, "NEG", (2,))], 3)
    assert len(extract_subcircuit(c, set(), 3).gates) == 4
    only = extract_subcircuit(c, {2}, 3)
    assert only.n == 1 and only.input_ids == (2,)


def test_extract_subcircuit_semantics():
    rng = random.Random(8)
    for _ in range(20):
        c = random_threshold_circuit(rng, 5, 14, 4)
        gates = [g for g in c.gates if c.gates[g].kind != "INPUT"]
        A = set(rng.sample(gates, min(2, len(gates))))
        v = c.output
        sub = extract_subcircuit(c, A, v)
        for _ in range(10):
            x = tuple(rng.randint(0, 1) for _ in range(5))
            _, vals = oracles.eval_circuit(c, x)
            sx = tuple(vals[u] for u in sub.input_ids)
            assert oracles.eval_circuit(sub, sx)[0] == vals[v]


def test_constraint_and_gate():
    sub = _circuit(2, [(2, "AND", (0, 1))], 2)
    clauses = constraint_to_cnf(sub, 3, {0: 1, 1: 2})
    assert max(len(c) for c in clauses) == 3
    for a, b, y in itertools.product((0, 1), repeat=3):
        f = CnfFormula(3, tuple(clauses))
        assert f.satisfied_by((a, b, y)) == (y == (a & b))


def test_constraint_constant():
    sub = _circuit(0, [(0, "AND", ())], 0)
    assert constraint_to_cnf(sub, 1, {}) == [(1,)]


def test_table_to_cnf_exhaustive_random():
    rng = random.Random(1)
    for _ in range(200):
        table = rng.getrandbits(16)
        clauses = table_to_cnf(table, [1, 2, 3, 4], 5)
        f = CnfFormula(5, tuple(clauses))
        for row in range(32):
            bits = [(row >> j) & 1 for j in range(5)]
            want = (table >> (row & 15)) & 1
            assert f.satisfied_by(bits) == (bits[4] == want)


def test_truth_table_matches_eval():
    rng = random.Random(4)
    for _ in range(30):
        c = random_threshold_circuit(rng, 4, 10, 3)
        tab = truth_table(c)
        for row in range(16):
            x = tuple((row >> j) & 1 for j in range(4))
            assert (tab >> row) & 1 == oracles.eval_circuit(c, x)[0]


# --- formulas ----------------------------------------------------------------


def test_formula_examples():
    conj = _circuit(2, [(2, "AND", (0, 1))], 2)
    cnf, rep, _ = formula_to_kcnf(conj, 1.0)
    assert rep.width_cap >= 3 and cnf.satisfied_by((1, 1, 1))
    contra = _circuit(1, [(1, "NEG", (0,)), (2, "AND", (0, 1))], 2)
    assert oracles.solve_cnf_sat(formula_to_kcnf(contra, 1.0)[0]) is None


def test_formula_strong_equisat():
    rng = random.Random(10)
    for _ in range(40):
        n = rng.randint(1, 8)
        f = random_formula(rng, n, rng.randint(1, 3 * n))
        eps = rng.choice([0.5, 1.0, 2.0])
        cnf, rep, dec = formula_to_kcnf(f, eps)
        assert cnf.width <= rep.width_cap and cnf.num_vars <= (1 + eps) * n + 1
        _strong_equisat(f, cnf)


def test_formula_rejects_sharing():
    shared = _circuit(2, [(2, "AND", (0, 1)), (3, "NEG", (2,)), (4, "OR", (2, 3))], 4)
    with pytest.raises(ValueError):
        formula_to_kcnf(shared, 1.0)


# --- threshold circuits ---------------------------------------------------------


def test_tc_small_and():
    c = _circuit(2, [(2, "TH", (0, 1), 2)], 2)
    cnf, rep = tc_to_kcnf(c, 1.0, beta=4)
    assert not rep.gadget_gates and cnf.num_vars == 3
    assert oracles.solve_cnf_sat(cnf) == (1, 1, 1)


def test_tc_gadget_path():
    c = _circuit(5, [(5, "TH", tuple(range(5)), 3)], 5)
    cnf, rep = tc_to_kcnf(c, 1.0, beta=2)
    assert rep.gadget_gates
    _strong_equisat(c, cnf)


@pytest.mark.parametrize("beta", [2, 3, 4])
def test_tc_strong_equisat(beta):
    rng = random.Random(beta)
    for _ in range(25):
        n = rng.randint(1, 7)
        c = random_threshold_circuit(rng, n, rng.randint(1, 3 * n), rng.randint(1, 3))
        cnf, rep = tc_to_kcnf(c, 1.0, beta=beta)
        assert cnf.width <= max(beta ** fold_constants(c).depth, 3)
        _strong_equisat(c, cnf)


def test_tc_sampled_equisat_n12():
    rng = random.Random(12)
    for _ in range(4):
        c = random_threshold_circuit(rng, 12, 30, 3)
        cnf, _ = tc_to_kcnf(c, 1.0, beta=3)
        n = c.n
        for _ in range(40):
            x = tuple(rng.randint(0, 1) for _ in range(n))
            units = tuple((v if b else -v,) for v, b in zip(range(1, n + 1), x))
            pinned = CnfFormula(cnf.num_vars, cnf.clauses + units)
            assert (oracles.solve_cnf_sat(pinned) is not None) == bool(oracles.eval_circuit(c, x)[0])


def test_fold_constants_preserves_function():
    rng = random.Random(3)
    for _ in range(30):
        c = random_threshold_circuit(rng, 4, 10, 3)
        gates = dict(c.gates)
        g = rng.choice([u for u in gates if gates[u].kind != "INPUT"])
        gates[g] = Gate(g, "AND") if rng.random() < 0.5 else Gate(g, "OR")
        mod = ThresholdCircuit(gates, c.outputs)
        folded = fold_constants(mod)
        for x in itertools.product((0, 1), repeat=4):
            assert oracles.eval_circuit(folded, x)[0] == oracles.eval_circuit(mod, x)[0]


def test_tc_auto_beta():
    c = _circuit(3, [(3, "TH", (0, 1, 2), 2)], 3)
    cnf, rep = tc_to_kcnf(c, 1.0)
    assert rep.beta >= 2
    _strong_equisat(c, cnf)


# --- Valiant and branching -------------------------------------------------------


def _nx_depth(nodes, edges):
    g = nx.DiGraph()
    g.add_nodes_from(nodes)
    g.add_edges_from(edges)
    return nx.dag_longest_path_length(g)


def test_valiant_path():
    edges = [(i, i + 1) for i in range(4)]
    assert depth_exponent(4) == 2
    R = valiant_reduce_depth(edges, 1)
    rest = [e for i, e in enumerate(edges) if i not in R]
    assert len(R) <= 2 and _nx_depth(range(5), rest) <= 2
    R = valiant_reduce_depth(edges, 2)
    rest = [e for i, e in enumerate(edges) if i not in R]
    assert _nx_depth(range(5), rest) <= 1


def test_valiant_against_networkx():
    rng = random.Random(21)
    for _ in range(100):
        nodes = rng.randint(5, 60)
        edges = random_dag(rng, nodes, rng.randint(1, 200), rng.randint(1, 16))
        D = _nx_depth(range(nodes), edges)
        assert dag_depth(range(nodes), edges) == D
        delta = depth_exponent(D)
        for r in range(1, min(delta, 2) + 1):
            R = valiant_reduce_depth(edges, r)
            rest = [e for i, e in enumerate(edges) if i not in set(R)]
            assert len(R) <= math.ceil(r * len(edges) / delta)
            assert _nx_depth(range(nodes), rest) <= 2 ** (delta - r)


def test_branching_depth_one():
    c = _circuit(2, [(2, "AND", (0, 1))], 2)
    out = list(tc_to_kcnf_branching(c, 1.0))
    assert len(out) == 1 and out[0][0] == ()


def test_branching_depth_four():
    rng = random.Random(5)
    hit = 0
    for _ in range(30):
        c = random_threshold_circuit(rng, 6, rng.randint(3, 6), 4)
        plan = plan_branching(c, 1.0)
        branches = list(tc_to_kcnf_branching(c, 1.0))
        hit += len(branches) > 1
        assert len(branches) == 2 ** len(plan.sources) <= 2 ** math.ceil(c.n / 2)
        got = any(oracles.solve_cnf_sat(cnf) is not None for _, cnf, _ in branches)
        assert got == (oracles.solve_circuit_sat(c) is not None)
    assert hit > 0
