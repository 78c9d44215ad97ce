"""Seeded random instance generators for every problem family."""

from __future__ import annotations

import itertools
import random

from .instances import (
    CnfFormula,
    Edge,
    Gate,
    OVInstance,
    ThresholdCircuit,
    WeightedCliqueInstance,
    subsets_upto,
)


def random_clique_instance(
    rng: random.Random,
    n: int,
    d: int,
    k: int,
    wmax: int,
    density: float = 1.0,
    t: int | None = None,
    planted: bool = False,
    partitioned: bool = False,
    wmin: int | None = None,
) -> WeightedCliqueInstance:
    """Random edge set (each admissible set kept with ``density``) and uniform weights.

    With ``planted`` a random k-set is made a clique. If t is given one of its
    edges is adjusted so the clique weighs exactly t, otherwise t becomes the
    clique's weight. With
    ``partitioned`` vertices get random part labels (every part non-empty when
    n >= k).
    """
    lo = -wmax if wmin is None else wmin
    partition = None
    if partitioned:
        labels = list(range(k)) * (n // k) + rng.sample(range(k), n % k) if k else []
        rng.shuffle(labels)
        partition = tuple(labels)
    probe = WeightedCliqueInstance(n=n, d=d, k=k, t=0, edges={}, partition=partition)
    universe = probe.edge_universe()
    edges: dict[Edge, int] = {}
    for e in universe:
        if rng.random() < density:
            edges[e] = rng.randint(lo, wmax)
    if t is None and not planted:
        t = rng.randint(lo, wmax) * max(1, len(list(subsets_upto(range(k), d)))) // 2
    if planted and n >= k:
        if partition is None:
            S = tuple(sorted(rng.sample(range(n), k)))
        else:
            S = tuple(sorted(rng.choice([v for v in range(n) if partition[v] == p]) for p in range(k)))
        sub = list(subsets_upto(S, d))
        for e in sub:
            edges.setdefault(e, rng.randint(lo, wmax))
        current = sum(edges[e] for e in sub)
        if t is None:
            t = current
        else:
            edges[sub[-1]] += t - current
    if t is None:
        t = 0
    return WeightedCliqueInstance(n=n, d=d, k=k, t=t, edges=edges, partition=partition)


def random_ov_instance(rng: random.Random, k: int, D: int, size: int, density: float = 0.5) -> OVInstance:
    fams = []
    for _ in range(k):
        fams.append([sum(1 << j for j in range(D) if rng.random() < density) for _ in range(size)])
    return OVInstance(k=k, D=D, families=fams)


def random_cnf(rng: random.Random, n: int, m: int, width: int, exact_width: bool = False) -> CnfFormula:
    clauses = []
    for _ in range(m):
        w = width if exact_width else rng.randint(1, width)
        vs = rng.sample(range(1, n + 1), min(w, n))
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in vs))
    return CnfFormula(n, tuple(clauses), {v: f"x {v}" for v in range(1, n + 1)})


def random_threshold_circuit(rng: random.Random, n: int, wires: int, depth: int, max_fanin: int | None = None) -> ThresholdCircuit:
    """Random DAG with at most ``wires`` wires and depth at most ``depth``.

    Later gates prefer recent gates as inputs so the output cone is large.
    The output is the last gate created.
    """
    if n < 1 or wires < 1 or depth < 1:
        raise ValueError("need n, wires, depth >= 1")
    gates: dict[int, Gate] = {i: Gate(i, "INPUT") for i in range(n)}
    level = {i: 0 for i in range(n)}
    budget = wires
    nxt = n
    max_fanin = max_fanin or max(2, wires // 3)
    while budget > 0:
        pool = [g for g in gates if level[g] < depth]
        fan = rng.randint(1, min(max_fanin, budget, max(1, len(pool))))
        recent = pool[-max(4, fan):]
        ins = []
        for _ in range(fan):
            src = recent if rng.random() < 0.6 else pool
            ins.append(rng.choice(src))
        kind = rng.choice(["NEG", "AND"]) if fan == 1 else rng.choice(["AND", "OR", "TH", "TH"])
        theta = rng.randint(1, fan) if kind == "TH" else None
        gates[nxt] = Gate(nxt, kind, tuple(ins), theta)
        level[nxt] = 1 + max(level[u] for u in ins)
        budget -= fan
        nxt += 1
    return ThresholdCircuit(gates, (nxt - 1,))


def random_formula(rng: random.Random, n: int, m: int) -> ThresholdCircuit:
    """Random fan-in-2 NEG/AND/OR formula with exactly m non-input gates (m >= 1)."""
    if n < 1 or m < 1:
        raise ValueError("need n, m >= 1")
    gates: dict[int, Gate] = {i: Gate(i, "INPUT") for i in range(n)}
    roots: list[int] = []
    nxt = n
    for made in range(m):
        left = m - made  # gates still to create, this one included
        # every root beyond the first must be consumed by a later gate
        must_merge = len(roots) - 1 >= left - 1 and len(roots) >= 2
        if must_merge:
            a, b = roots.pop(rng.randrange(len(roots))), roots.pop(rng.randrange(len(roots)))
            gates[nxt] = Gate(nxt, rng.choice(["AND", "OR"]), (a, b))
        elif left == 1 and len(roots) == 1:
            a = roots.pop()
            if rng.random() < 0.3:
                gates[nxt] = Gate(nxt, "NEG", (a,))
            else:
                gates[nxt] = Gate(nxt, rng.choice(["AND", "OR"]), (a, rng.randrange(n)))
        else:
            kind = rng.choice(["NEG", "AND", "OR", "AND", "OR"])
            arity = 1 if kind == "NEG" else 2
            ins = []
            for _ in range(arity):
                if roots and rng.random() < 0.6:
                    ins.append(roots.pop(rng.randrange(len(roots))))
                else:
                    ins.append(rng.randrange(n))
            gates[nxt] = Gate(nxt, kind, tuple(ins))
        roots.append(nxt)
        nxt += 1
    assert len(roots) == 1
    return ThresholdCircuit(gates, (roots[0],))


def random_dag(rng: random.Random, nodes: int, edges: int, depth: int) -> list[tuple[int, int]]:
    """Random DAG edges over nodes 0..nodes-1 with longest path at most ``depth``."""
    level = sorted(rng.randint(0, depth) for _ in range(nodes))
    pairs = [(u, v) for u, v in itertools.combinations(range(nodes), 2) if level[u] < level[v]]
    rng.shuffle(pairs)
    return sorted(pairs[:edges])
