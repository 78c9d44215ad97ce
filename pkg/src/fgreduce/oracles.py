"""Exhaustive reference solvers.

These are the ground truth that every reduction is checked against, so they
stay simple: enumerate candidates in a fixed lexicographic order and return
the first witness. The only exception is :func:`solve_cnf_sat`, which is a
plain DPLL (unit propagation + chronological backtracking) so that compiled
CNFs with a few dozen auxiliary variables stay tractable; it is exact.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass

from .instances import (
    CliqueSolution,
    CnfFormula,
    OVInstance,
    ThresholdCircuit,
    WeightedCliqueInstance,
)


class BudgetExceeded(RuntimeError):
    """Raised when a search examines more candidates than its budget allows."""


@dataclass(frozen=True)
class OracleBudget:
    max_candidates: int = 50_000_000
    time_hint: float = 600.0

    def __post_init__(self) -> None:
        if self.max_candidates <= 0 or self.time_hint <= 0:
            raise ValueError("budget caps must be positive")


DEFAULT_BUDGET = OracleBudget()


class _Counter:
    def __init__(self, budget: OracleBudget | None) -> None:
        self.left = (budget or DEFAULT_BUDGET).max_candidates

    def tick(self, amount: int = 1) -> None:
        self.left -= amount
        if self.left < 0:
            raise BudgetExceeded("oracle candidate budget exhausted")


# ---------------------------------------------------------------------------
# cliques


def _candidate_sets(inst: WeightedCliqueInstance) -> Iterator[tuple[int, ...]]:
    if inst.partition is None:
        yield from itertools.combinations(range(inst.n), inst.k)
    else:
        for combo in itertools.product(*inst.parts):
            yield tuple(sorted(combo))


def _position_patterns(k: int, d: int) -> list[tuple[int, ...]]:
    return [c for size in range(min(k, d) + 1) for c in itertools.combinations(range(k), size)]


def enumerate_k_cliques(
    inst: WeightedCliqueInstance, budget: OracleBudget | None = None
) -> Iterator[CliqueSolution]:
    """Yield every k-clique with its weight, in lexicographic vertex order."""
    counter = _Counter(budget)
    patterns = _position_patterns(inst.k, inst.d)
    edges = inst.edges
    sets = _candidate_sets(inst)
    if inst.partition is not None:
        sets = iter(sorted(sets))
    for S in sets:
        counter.tick()
        total = 0
        for pat in patterns:
            w = edges.get(tuple(S[i] for i in pat))
            if w is None:
                break
            total += w
        else:
            yield CliqueSolution(S, total)


def solve_exact_weight_clique(
    inst: WeightedCliqueInstance, budget: OracleBudget | None = None
) -> CliqueSolution | None:
    for sol in enumerate_k_cliques(inst, budget):
        if sol.weight == inst.t:
            return sol
    return None


def has_clique(inst: WeightedCliqueInstance, budget: OracleBudget | None = None) -> bool:
    """Unweighted question: does any k-clique exist (weights ignored)?"""
    return next(enumerate_k_cliques(inst, budget), None) is not None


def solve_min_weight_clique(
    inst: WeightedCliqueInstance, budget: OracleBudget | None = None
) -> tuple[CliqueSolution, int] | None:
    best: CliqueSolution | None = None
    for sol in enumerate_k_cliques(inst, budget):
        if best is None or sol.weight < best.weight:
            best = sol
    return None if best is None else (best, best.weight)


# ---------------------------------------------------------------------------
# orthogonal vectors


def solve_k_ov(ov: OVInstance, budget: OracleBudget | None = None) -> tuple[int, ...] | None:
    """First index tuple (lexicographic) whose vectors have an all-zero product."""
    counter = _Counter(budget)
    full = (1 << ov.D) - 1
    if ov.k == 0:
        return ()
    if any(not fam for fam in ov.families):
        return None

    fams = ov.families

    def rec(i: int, acc: int, chosen: list[int]) -> tuple[int, ...] | None:
        if i == ov.k:
            return tuple(chosen) if acc == 0 else None
        for idx, x in enumerate(fams[i]):
            counter.tick()
            nxt = acc & x
            if i + 1 < ov.k or nxt == 0:
                chosen.append(idx)
                found = rec(i + 1, nxt, chosen)
                chosen.pop()
                if found is not None:
                    return found
        return None

    return rec(0, full, [])


# ---------------------------------------------------------------------------
# circuits


def eval_circuit(circuit: ThresholdCircuit, assignment: Sequence[int]) -> tuple[int, dict[int, int]]:
    """Evaluate all gates; ``assignment[i]`` feeds the i-th input by ascending id."""
    if len(assignment) != circuit.n:
        raise ValueError(f"expected {circuit.n} input bits, got {len(assignment)}")
    values = dict(zip(circuit.input_ids, (int(b) for b in assignment)))
    return _eval_into(circuit, values), values


def _eval_into(circuit: ThresholdCircuit, values: dict[int, int]) -> int:
    gates = circuit.gates
    for gid in circuit.topological_order:
        if gid in values:
            continue
        g = gates[gid]
        if g.kind == "NEG":
            values[gid] = 1 - values[g.inputs[0]]
        elif g.kind == "INPUT":
            raise ValueError(f"input gate {gid} has no value")
        else:
            ones = sum(values[u] for u in g.inputs)
            values[gid] = int(ones >= g.threshold)
    return values[circuit.outputs[0]] if len(circuit.outputs) == 1 else 0


def eval_outputs(circuit: ThresholdCircuit, assignment: Sequence[int]) -> tuple[int, ...]:
    _, values = eval_circuit(circuit, assignment)
    return tuple(values[o] for o in circuit.outputs)


def eval_with_inputs(circuit: ThresholdCircuit, input_values: Mapping[int, int]) -> dict[int, int]:
    """Evaluate with input values given by gate id."""
    values = {gid: int(input_values[gid]) for gid in circuit.input_ids}
    _eval_into(circuit, values)
    return values


def solve_circuit_sat(circuit: ThresholdCircuit, budget: OracleBudget | None = None) -> tuple[int, ...] | None:
    counter = _Counter(budget)
    if circuit.n > 40:
        raise BudgetExceeded("too many inputs for exhaustive search")
    for x in itertools.product((0, 1), repeat=circuit.n):
        counter.tick()
        if eval_circuit(circuit, x)[0]:
            return x
    return None


# ---------------------------------------------------------------------------
# CNF


def solve_cnf_sat(
    cnf: CnfFormula,
    budget: OracleBudget | None = None,
    assumptions: Sequence[int] = (),
) -> tuple[int, ...] | None:
    """Exact DPLL with two watched literals; free variables default to 0.

    Branches on the lowest unassigned variable, trying 0 before 1.
    """
    counter = _Counter(budget)
    n = cnf.num_vars
    clauses = [list(dict.fromkeys(c)) for c in cnf.clauses]
    if any(not c for c in clauses):
        return None
    value = [0] * (n + 1)  # 0 unassigned, 1 true, -1 false

    def lit_val(lit: int) -> int:
        v = value[abs(lit)]
        return v if lit > 0 else -v

    watches: dict[int, list[int]] = {}
    units: list[int] = list(assumptions)
    for ci, c in enumerate(clauses):
        if len(c) == 1:
            units.append(c[0])
            continue
        watches.setdefault(c[0], []).append(ci)
        watches.setdefault(c[1], []).append(ci)

    trail: list[int] = []

    def assign(lit: int) -> bool:
        cur = lit_val(lit)
        if cur == 1:
            return True
        if cur == -1:
            return False
        value[abs(lit)] = 1 if lit > 0 else -1
        trail.append(lit)
        return True

    def propagate(start: int) -> bool:
        head = start
        while head < len(trail):
            false_lit = -trail[head]
            head += 1
            wl = watches.get(false_lit)
            if not wl:
                continue
            keep: list[int] = []
            i = 0
            ok = True
            while i < len(wl):
                ci = wl[i]
                i += 1
                c = clauses[ci]
                if c[0] == false_lit:
                    c[0], c[1] = c[1], c[0]
                if lit_val(c[0]) == 1:
                    keep.append(ci)
                    continue
                for j in range(2, len(c)):
                    if lit_val(c[j]) != -1:
                        c[1], c[j] = c[j], c[1]
                        watches.setdefault(c[1], []).append(ci)
                        break
                else:
                    keep.append(ci)
                    if not assign(c[0]):
                        ok = False
                        keep.extend(wl[i:])
                        break
            watches[false_lit] = keep
            if not ok:
                return False
        return True

    for lit in units:
        if abs(lit) > n or lit == 0:
            raise ValueError(f"literal {lit} out of range")
        if not assign(lit):
            return None
    if not propagate(0):
        return None

    # explicit stack of (trail length before decision, decision literal)
    stack: list[tuple[int, int]] = []
    nxt = 1
    while True:
        while nxt <= n and value[nxt] != 0:
            nxt += 1
        if nxt > n:
            return tuple(1 if value[v] == 1 else 0 for v in range(1, n + 1))
        counter.tick()
        mark = len(trail)
        stack.append((mark, -nxt))
        assign(-nxt)
        while not propagate(mark):
            # backtrack to the most recent decision still holding its first branch
            while stack:
                mark, lit = stack.pop()
                for undo in trail[mark:]:
                    value[abs(undo)] = 0
                del trail[mark:]
                if lit < 0:
                    counter.tick()
                    stack.append((mark, -lit))
                    assign(-lit)
                    break
            else:
                return None
        nxt = 1


def solve_max_sat(cnf: CnfFormula, budget: OracleBudget | None = None) -> tuple[int, tuple[int, ...]]:
    """Maximum number of satisfied clauses; ties broken by lexicographic order."""
    counter = _Counter(budget)
    n = cnf.num_vars
    if n > 30:
        raise BudgetExceeded("too many variables for exhaustive max-sat")
    best = -1
    best_x: tuple[int, ...] = ()
    for x in itertools.product((0, 1), repeat=n):
        counter.tick()
        count = cnf.count_satisfied(x)
        if count > best:
            best, best_x = count, x
    return best, best_x
