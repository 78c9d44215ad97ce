from __future__ import annotations

import math
import random

from hypothesis import given, settings
from hypothesis import strategies as st

from fgreduce import oracles
from fgreduce.generators import random_clique_instance, random_ov_instance
from fgreduce.instances import OVInstance, WeightedCliqueInstance
from fgreduce.ov_reductions import PipelineParams, clique_to_kov, kov_to_2ov, non_edges, pipeline_clique_to_2ov


def test_complete_partite_has_dimension_zero():
    inst = random_clique_instance(random.Random(1), 6, 2, 3, 0, t=0, partitioned=True)
    ov = clique_to_kov(inst)
    assert ov.D == 0 and oracles.solve_k_ov(ov) is not None and oracles.has_clique(inst)


def test_missing_pair_hand_trace():
    inst = WeightedCliqueInstance(n=2, d=2, k=2, t=0, edges={(): 0, (0,): 0, (1,): 0}, partition=(0, 1))
    assert non_edges(inst) == [(0, 1)]
    ov = clique_to_kov(inst)
    assert ov.D == 1 and ov.families == ((1,), (1,))
    assert oracles.solve_k_ov(ov) is None and not oracles.has_clique(inst)


def test_kov_to_2ov_counts():
    ov = random_ov_instance(random.Random(0), 4, 3, 2)
    two = kov_to_2ov(ov)
    assert len(two.families[0]) == len(two.families[1]) == 4
    pair = OVInstance.from_bits([["10", "11"], ["01"]])
    assert kov_to_2ov(pair) == pair


@given(st.integers(2, 5), st.integers(0, 8), st.integers(1, 4), st.integers(0, 10**6))
@settings(max_examples=100, deadline=None)
def test_kov_to_2ov_property(k, D, size, seed):
    ov = random_ov_instance(random.Random(seed), k, D, size, 0.6)
    two = kov_to_2ov(ov)
    assert (oracles.solve_k_ov(ov) is None) == (oracles.solve_k_ov(two) is None)
    h = k // 2
    assert len(two.families[0]) == math.prod(len(f) for f in ov.families[:h])


@given(st.integers(0, 10**6))
@settings(max_examples=80, deadline=None)
def test_clique_to_kov_property(seed):
    rng = random.Random(seed)
    k = rng.randint(1, 4)
    d = rng.randint(0, min(3, k))
    inst = random_clique_instance(rng, rng.randint(k, 8), d, k, 0, density=0.85, t=0, partitioned=True)
    ov = clique_to_kov(inst)
    assert ov.N == inst.n
    assert (oracles.solve_k_ov(ov) is not None) == oracles.has_clique(inst)


def test_pipeline_zero_weight_yes():
    inst = random_clique_instance(random.Random(2), 4, 2, 3, 0, t=0)
    out = pipeline_clique_to_2ov(inst)
    assert any(oracles.solve_k_ov(q) is not None for q in out.queries)


def test_pipeline_unweighted_counts():
    inst = random_clique_instance(random.Random(8), 6, 2, 4, 0, t=0, density=0.9)
    out = pipeline_clique_to_2ov(inst)
    assert len(out.queries) == 1
    q = out.queries[0]
    # each of the 4 parts holds a copy of all 6 vertices; halves pair up two parts
    assert len(q.families[0]) == len(q.families[1]) == 36
    assert q.N == 36 + 36
    assert (oracles.solve_k_ov(q) is not None) == oracles.has_clique(inst)


def test_pipeline_weighted_small():
    for seed in range(10):
        rng = random.Random(seed)
        inst = random_clique_instance(rng, 4, 2, 3, 30, planted=seed % 2 == 0)
        out = pipeline_clique_to_2ov(inst, PipelineParams(p=2), random.Random(seed))
        got = any(oracles.solve_k_ov(q) is not None for q in out.queries)
        assert got == (oracles.solve_exact_weight_clique(inst) is not None)
        names = [s.stage for s in out.trace.stages]
        assert names[0] == "nonnegative"


def test_tuplewise_orthogonality_equals_clique():
    import itertools

    for seed in range(40):
        rng = random.Random(seed)
        k = rng.randint(2, 3)
        d = rng.randint(1, k)
        inst = random_clique_instance(rng, rng.randint(k, 8), d, k, 0, density=0.8, t=0, partitioned=True)
        ov = clique_to_kov(inst)
        full = (1 << ov.D) - 1
        for idx in itertools.product(*(range(len(p)) for p in inst.parts)):
            S = tuple(sorted(inst.parts[i][j] for i, j in enumerate(idx)))
            acc = full
            for i, j in enumerate(idx):
                acc &= ov.families[i][j]
            is_clique = all(e in inst.edges for s in range(d + 1) for e in itertools.combinations(S, s))
            assert (acc == 0) == is_clique


def test_pipeline_trace_counts():
    inst = random_clique_instance(random.Random(4), 4, 2, 3, 20, planted=True)
    out = pipeline_clique_to_2ov(inst, PipelineParams(p=2), random.Random(1))
    by = {s.stage: s for s in out.trace.stages}
    assert [s.stage for s in out.trace.stages] == [
        "nonnegative", "prime-hash", "square-trick", "strip-weights", "clique-to-kov", "kov-to-2ov"
    ]
    assert all(s.query_count >= 1 for s in out.trace.stages)
    assert by["strip-weights"].query_count == by["clique-to-kov"].query_count == len(out.queries)
