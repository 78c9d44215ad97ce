"""Depth reduction of DAGs by deleting few edges (bit-class argument)."""

from __future__ import annotations

from collections.abc import Hashable, Iterable, Sequence


def longest_path_depths(nodes: Iterable[Hashable], edges: Sequence[tuple[Hashable, Hashable]]) -> dict:
    """Length (in edges) of the longest path ending at each node."""
    nodes = set(nodes)
    for u, v in edges:
        nodes.add(u)
        nodes.add(v)
    succ: dict = {u: [] for u in nodes}
    indeg = {u: 0 for u in nodes}
    for u, v in edges:
        succ[u].append(v)
        indeg[v] += 1
    depth = {u: 0 for u in nodes}
    ready = [u for u in nodes if indeg[u] == 0]
    seen = 0
    while ready:
        u = ready.pop()
        seen += 1
        for v in succ[u]:
            depth[v] = max(depth[v], depth[u] + 1)
            indeg[v] -= 1
            if indeg[v] == 0:
                ready.append(v)
    if seen != len(nodes):
        raise ValueError("graph has a cycle")
    return depth


def dag_depth(nodes: Iterable[Hashable], edges: Sequence[tuple[Hashable, Hashable]]) -> int:
    return max(longest_path_depths(nodes, edges).values(), default=0)


def depth_exponent(depth: int) -> int:
    """delta = ceil(lg depth), with delta = 0 for depth <= 1."""
    return max(0, (depth - 1).bit_length()) if depth > 1 else 0


def valiant_reduce_depth(edges: Sequence[tuple[Hashable, Hashable]], r: int) -> list[int]:
    """Indices of edges to delete so that the depth drops to at most 2^(delta - r).

    Nodes are labelled max(depth - 1, 0), which fits in delta bits. An edge
    is classed by the highest bit where its endpoint labels differ; the r
    lightest of the delta classes are deleted, at most ceil(r*m/delta) edges.
    Along a surviving path the labels restricted to the kept bit positions
    strictly increase, except possibly on a first edge leaving a source.
    """
    depth = longest_path_depths((), edges)
    D = max(depth.values(), default=0)
    delta = depth_exponent(D)
    if r < 0 or r > delta:
        raise ValueError(f"r={r} outside [0, delta={delta}]")
    if r == 0:
        return []
    label = {u: max(d - 1, 0) for u, d in depth.items()}
    classes: list[list[int]] = [[] for _ in range(delta)]
    for i, (u, v) in enumerate(edges):
        diff = label[u] ^ label[v]
        if diff:
            classes[diff.bit_length() - 1].append(i)
    order = sorted(range(delta), key=lambda j: (len(classes[j]), j))
    removed = sorted(i for j in order[:r] for i in classes[j])
    m = len(edges)
    if len(removed) * delta > r * m + delta - 1:
        raise AssertionError("valiant: removed more than ceil(r*m/delta) edges")
    keep = set(range(m)) - set(removed)
    rest = [edges[i] for i in sorted(keep)]
    if dag_depth(depth.keys(), rest) > 2 ** (delta - r):
        raise AssertionError("valiant: residual depth above 2^(delta - r)")
    return removed
