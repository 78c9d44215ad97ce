"""Max-d-SAT as Min-Weight k-clique on a complete k-partite d-hypergraph."""

from __future__ import annotations

import itertools
from collections.abc import Sequence

from .clique_reductions import check_bound
from .instances import CnfFormula, Edge, WeightedCliqueInstance


def partition_variables(n: int, k: int) -> list[tuple[int, ...]]:
    """k contiguous blocks of 1-based variables; the first n % k blocks get one extra."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    size, extra = divmod(n, k)
    blocks = []
    start = 1
    for i in range(k):
        length = size + (1 if i < extra else 0)
        blocks.append(tuple(range(start, start + length)))
        start += length
    return blocks


def _normalize(clause: Sequence[int]) -> tuple[int, ...]:
    return tuple(dict.fromkeys(clause))


def block_offsets(blocks: Sequence[Sequence[int]]) -> list[int]:
    offs, acc = [], 0
    for b in blocks:
        offs.append(acc)
        acc += 1 << len(b)
    return offs


def assignment_to_clique(assignment: Sequence[int], blocks: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Vertex per block: block offset plus the little-endian value of its bits."""
    offs = block_offsets(blocks)
    return tuple(
        off + sum(int(assignment[v - 1]) << j for j, v in enumerate(b)) for off, b in zip(offs, blocks)
    )


def maxsat_to_minweight_clique(
    cnf: CnfFormula, k: int, t: int = 0, d: int | None = None
) -> tuple[WeightedCliqueInstance, list[tuple[int, ...]]]:
    """Build the clique instance and return it with the variable blocks.

    Each clause is charged -1 on the unique edge whose parts are exactly the
    blocks the clause touches, if the partial assignments on that edge
    satisfy it. Hence the k-clique of a full assignment x weighs minus the
    number of clauses x satisfies, and the instance target is -t.
    Clauses with a complementary pair are always satisfied and are kept as
    such; repeated literals are merged.
    """
    # an empty clause is never satisfied and charges nothing
    clauses = [_normalize(c) for c in cnf.clauses if c]
    width = max((len(c) for c in clauses), default=0)
    d = max(width, 1) if d is None else d
    if width > d:
        raise ValueError(f"clause of width {width} exceeds d={d}")
    if k < d:
        raise ValueError(f"need k >= d, got k={k}, d={d}")
    n = cnf.num_vars
    blocks = partition_variables(n, k)
    block_of = {v: i for i, b in enumerate(blocks) for v in b}
    offs = block_offsets(blocks)

    groups: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
    for c in clauses:
        key = tuple(sorted({block_of[abs(l)] for l in c}))
        groups.setdefault(key, []).append(c)

    def satisfied(c: tuple[int, ...], values: dict[int, int]) -> bool:
        return any((values[abs(l)] == 1) == (l > 0) for l in c)

    edges: dict[Edge, int] = {}
    partition = tuple(i for i, b in enumerate(blocks) for _ in range(1 << len(b)))
    for size in range(min(d, k) + 1):
        for labels in itertools.combinations(range(k), size):
            group = groups.get(labels, [])
            for xs in itertools.product(*(range(1 << len(blocks[i])) for i in labels)):
                values = {}
                for i, x in zip(labels, xs):
                    for j, v in enumerate(blocks[i]):
                        values[v] = x >> j & 1
                weight = -sum(1 for c in group if satisfied(c, values))
                edges[tuple(offs[i] + x for i, x in zip(labels, xs))] = weight
    inst = WeightedCliqueInstance(n=len(partition), d=d, k=k, t=-t, edges=edges, partition=partition)
    m = len(cnf.clauses)
    check_bound(all(-2 * m <= w <= 2 * m for w in edges.values()), "maxsat: weight outside [-2m, 2m]")
    check_bound(all(-m <= w <= 0 for w in edges.values()), "maxsat: weight outside [-m, 0]")
    n_ceil = -(-n // k)
    check_bound(inst.n <= k * 2**n_ceil, "maxsat: too many vertices")
    return inst, blocks
