"""Separator sets for binary trees with small, few-boundary components."""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass


class DecompositionError(AssertionError):
    pass


@dataclass(frozen=True)
class Component:
    nodes: frozenset[int]
    boundary: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.nodes)


@dataclass(frozen=True)
class Decomposition:
    A: frozenset[int]
    ell: int
    components: tuple[Component, ...]


def _parents(children: Mapping[int, Sequence[int]], root: int) -> dict[int, int | None]:
    parent: dict[int, int | None] = {root: None}
    stack = [root]
    while stack:
        u = stack.pop()
        for c in children.get(u, ()):
            if c in parent:
                raise ValueError(f"node {c} is reached twice: not a tree")
            parent[c] = u
            stack.append(c)
    return parent


def decompose_tree(children: Mapping[int, Sequence[int]], root: int, ell: int) -> Decomposition:
    """Pick A so that T - A has components of at most ``ell`` nodes.

    Greedy bottom-up: a node whose not-yet-detached subtree has at least
    ell/2 nodes joins A and is detached. The pairwise lowest common
    ancestors of the chosen nodes are then added, after which every
    component borders at most one A-node above and one below. Resulting
    bounds: |A| <= 4m/ell, components below ell/2 nodes, boundary <= 2.
    """
    if ell < 1:
        raise ValueError("ell must be positive")
    if any(len(cs) > 2 for cs in children.values()):
        raise ValueError("tree is not binary")
    parent = _parents(children, root)
    nodes = list(parent)
    m = len(nodes)

    order: list[int] = []  # post-order
    stack: list[tuple[int, bool]] = [(root, False)]
    while stack:
        u, done = stack.pop()
        if done:
            order.append(u)
            continue
        stack.append((u, True))
        for c in children.get(u, ()):
            stack.append((c, False))

    cut: set[int] = set()
    rest: dict[int, int] = {}
    for u in order:
        s = 1 + sum(rest[c] for c in children.get(u, ()) if c not in cut)
        rest[u] = s
        if 2 * s >= ell:
            cut.add(u)

    # close under pairwise LCA: a node is an LCA of marked nodes iff at least
    # two of its child subtrees contain a marked node
    has_mark: dict[int, bool] = {}
    A = set(cut)
    for u in order:
        branches = sum(1 for c in children.get(u, ()) if has_mark[c])
        if branches >= 2:
            A.add(u)
        has_mark[u] = u in A or branches > 0

    comps = _components(children, parent, A)
    dec = Decomposition(frozenset(A), ell, comps)
    verify_decomposition(dec, m)
    return dec


def _components(
    children: Mapping[int, Sequence[int]], parent: Mapping[int, int | None], A: set[int]
) -> tuple[Component, ...]:
    seen: set[int] = set()
    comps = []
    for start in sorted(parent):
        if start in A or start in seen:
            continue
        group = {start}
        boundary: set[int] = set()
        stack = [start]
        seen.add(start)
        while stack:
            u = stack.pop()
            nbrs = list(children.get(u, ()))
            if parent[u] is not None:
                nbrs.append(parent[u])
            for w in nbrs:
                if w in A:
                    boundary.add(w)
                elif w not in seen:
                    seen.add(w)
                    group.add(w)
                    stack.append(w)
        comps.append(Component(frozenset(group), tuple(sorted(boundary))))
    return tuple(comps)


def verify_decomposition(dec: Decomposition, m: int) -> None:
    """Re-check the separator invariants from scratch."""
    if len(dec.A) * dec.ell > 6 * m:
        raise DecompositionError(f"|A|={len(dec.A)} exceeds 6m/ell")
    for comp in dec.components:
        if comp.size > dec.ell:
            raise DecompositionError(f"component of {comp.size} nodes exceeds ell={dec.ell}")
        if len(comp.boundary) > 3:
            raise DecompositionError(f"component touches {len(comp.boundary)} separator nodes")
    covered = sum(c.size for c in dec.components) + len(dec.A)
    if covered != m:
        raise DecompositionError("components and A do not partition the tree")
