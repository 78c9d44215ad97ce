from __future__ import annotations

import random

import pytest

from fgreduce import oracles
from fgreduce.generators import random_cnf
from fgreduce.instances import CnfFormula
from fgreduce.sat_reductions import assignment_to_clique, maxsat_to_minweight_clique, partition_variables


def test_partition_variables():
    assert partition_variables(4, 2) == [(1, 2), (3, 4)]
    assert [len(b) for b in partition_variables(5, 2)] == [3, 2]
    assert partition_variables(3, 3) == [(1,), (2,), (3,)]
    with pytest.raises(ValueError):
        partition_variables(2, 3)


def test_single_clause():
    inst, blocks = maxsat_to_minweight_clique(CnfFormula(2, ((1, 2),)), 2)
    assert inst.n == 4
    pairs = {e: w for e, w in inst.edges.items() if len(e) == 2}
    assert pairs == {(0, 2): 0, (0, 3): -1, (1, 2): -1, (1, 3): -1}
    assert oracles.solve_min_weight_clique(inst)[1] == -1


def test_empty_formula():
    inst, _ = maxsat_to_minweight_clique(CnfFormula(4, ()), 2)
    assert set(inst.edges.values()) == {0}
    assert oracles.solve_min_weight_clique(inst)[1] == 0


def test_clique_weight_counts_satisfied():
    import itertools

    rng = random.Random(3)
    for _ in range(25):
        n = rng.randint(3, 10)
        f = random_cnf(rng, n, rng.randint(1, 12), 2)
        k = rng.randint(2, min(n, 4))
        inst, blocks = maxsat_to_minweight_clique(f, k)
        for x in itertools.product((0, 1), repeat=n):
            S = set(assignment_to_clique(x, blocks))
            w = sum(w for e, w in inst.edges.items() if set(e) <= S)
            assert w == -f.count_satisfied(x)


def test_tautology_and_duplicates():
    f = CnfFormula(2, ((1, -1), (2, 2)))
    inst, _ = maxsat_to_minweight_clique(f, 2)
    assert -oracles.solve_min_weight_clique(inst)[1] == oracles.solve_max_sat(f)[0] == 2


def test_random_equivalence():
    for seed in range(40):
        rng = random.Random(seed)
        n = rng.randint(4, 8)
        f = random_cnf(rng, n, rng.randint(1, 12), 2)
        inst, _ = maxsat_to_minweight_clique(f, 4)
        assert -oracles.solve_min_weight_clique(inst)[1] == oracles.solve_max_sat(f)[0]


def test_width_guard():
    with pytest.raises(ValueError):
        maxsat_to_minweight_clique(CnfFormula(3, ((1, 2, 3),)), 2, d=2)
