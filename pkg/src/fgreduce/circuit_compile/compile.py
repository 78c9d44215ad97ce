"""Satisfiability-preserving compilation of formulas and threshold circuits to k-CNF.

Every compiler keeps the original inputs as variables 1..n (ascending gate
id) and adds one auxiliary variable per gate of a cut set A, plus the output.
For each such gate v, the cone of v cut at A is encoded as a truth-table CNF
of ``y_v <-> cone``; finally the output variable is asserted.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterator, Mapping
from dataclasses import dataclass, field

from ..instances import CnfFormula, Gate, ThresholdCircuit
from .builder import CircuitBuilder, fold_constants, threshold_gate
from .cnf import constraint_to_cnf, extract_subcircuit
from .decompose import Decomposition, decompose_tree
from .gadgets import build_adder, build_binth, ceil_log2
from .valiant import depth_exponent, valiant_reduce_depth


class CompileBudgetError(AssertionError):
    """A proven variable or width budget was exceeded."""


@dataclass
class CompileReport:
    epsilon: float
    c: float
    depth: int
    width_cap: int
    a_size: int
    width: int
    num_vars: int
    beta: int | None = None
    ell: int | None = None
    gadget_gates: list[int] = field(default_factory=list)

    def rows(self, stage: str) -> list[tuple[str, str, str]]:
        out = []
        for key in ("epsilon", "c", "depth", "beta", "ell", "width_cap", "a_size", "width", "num_vars"):
            val = getattr(self, key)
            if val is None:
                continue
            if isinstance(val, float):
                val = f"{val:.6g}"
            out.append((stage, key, str(val)))
        if self.gadget_gates:
            out.append((stage, "gadgets", str(len(self.gadget_gates))))
            out.append((stage, "max_gadget_gates", str(max(self.gadget_gates))))
        return out


def _encode(
    circuit: ThresholdCircuit,
    A: set[int],
    width_cap: int | None,
    pins: Mapping[int, int] | None = None,
) -> CnfFormula:
    """Auxiliary variables for A (and the output), cone constraints, output unit clause."""
    o = circuit.output
    inputs = circuit.input_ids
    var_of = {u: i + 1 for i, u in enumerate(inputs)}
    names = {i + 1: f"x {u}" for i, u in enumerate(inputs)}
    marked = set(A) | {o} | set(pins or ())
    for u in sorted(marked):
        if u not in var_of:
            var_of[u] = len(var_of) + 1
            names[var_of[u]] = f"y {u}"
    clauses: list[tuple[int, ...]] = []
    for v in sorted(marked):
        if circuit.gates[v].kind == "INPUT":
            continue
        sub = extract_subcircuit(circuit, marked, v)
        clauses.extend(constraint_to_cnf(sub, var_of[v], var_of, width_cap))
    for u, bit in sorted((pins or {}).items()):
        clauses.append((var_of[u] if bit else -var_of[u],))
    clauses.append((var_of[o],))
    return CnfFormula(len(var_of), tuple(clauses), names)


# ---------------------------------------------------------------------------
# formulas


def _formula_tree(formula: ThresholdCircuit) -> tuple[dict[int, tuple[int, ...]], list[int]]:
    """Children map of the non-input gates in the output's cone."""
    o = formula.output
    children: dict[int, tuple[int, ...]] = {}
    users: dict[int, set[int]] = {}
    stack = [o]
    while stack:
        u = stack.pop()
        g = formula.gates[u]
        if g.kind == "INPUT" or u in children:
            continue
        if g.kind not in ("NEG", "AND", "OR"):
            raise ValueError(f"gate {u}: formulas use NEG/AND/OR only")
        if len(g.inputs) > 2:
            raise ValueError(f"gate {u}: formula fan-in above 2")
        kids = tuple(dict.fromkeys(w for w in g.inputs if formula.gates[w].kind != "INPUT"))
        children[u] = kids
        for w in kids:
            users.setdefault(w, set()).add(u)
            stack.append(w)
    for w, us in users.items():
        if len(us) > 1:
            raise ValueError(f"gate {w} feeds several gates: not a formula")
    return children, sorted(children)


def formula_to_kcnf(formula: ThresholdCircuit, epsilon: float) -> tuple[CnfFormula, CompileReport, Decomposition | None]:
    """Compile a fan-in-2 NEG/AND/OR formula to an equisatisfiable k-CNF.

    With c = m/n, ell = ceil(6c/eps) and k = 4*ell, the separator has at most
    4m/ell <= eps*n gates and every cone reads at most ell + 1 variables.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    n = formula.n
    children, tree_nodes = _formula_tree(formula)
    m = len(tree_nodes)
    c = max(m, 1) / max(n, 1)
    ell = max(1, math.ceil(6 * c / epsilon))
    k = 4 * ell
    o = formula.output
    dec = None
    A: set[int] = set()
    if tree_nodes:
        dec = decompose_tree(children, o, ell)
        A = set(dec.A)
    cnf = _encode(formula, A, width_cap=k)
    report = CompileReport(
        epsilon=epsilon, c=c, depth=formula.depth, width_cap=k, a_size=len(A),
        width=cnf.width, num_vars=cnf.num_vars, ell=ell,
    )
    if cnf.width > k:
        raise CompileBudgetError(f"width {cnf.width} above k={k}")
    if cnf.num_vars > (1 + epsilon) * n + 1:
        raise CompileBudgetError(f"{cnf.num_vars} variables above (1+eps)n+1")
    return cnf, report, dec


# ---------------------------------------------------------------------------
# threshold circuits


def choose_beta(c: float, epsilon: float) -> int:
    """Smallest beta >= 2 with 100*c*(ceil(lg beta) + 1)/beta <= eps, c taken as at least 1."""
    c = max(c, 1.0)
    beta = 2
    while 100 * c * (ceil_log2(beta) + 1) > epsilon * beta:
        beta += 1
    return beta


def beta_cap(c: float, epsilon: float) -> float:
    c = max(c, 1.0)
    eps = min(epsilon, 1.0)
    return 2000 * (c / eps) * math.log2(2 * c / eps)


@dataclass
class _Rewrite:
    circuit: ThresholdCircuit
    A: set[int]
    gadget_sizes: list[int]
    a_budget: int


def replace_large_gates(circuit: ThresholdCircuit, beta: int) -> _Rewrite:
    """Swap every threshold gate of fan-in >= beta for block adders + adder + BINTH.

    Blocks of at most s = max(beta - 1, 2) consecutive in-wires are counted
    by 1-bit adders, so with the y literal no cone clause exceeds beta^depth.
    The block counts b_i (padded to b = 1 + ceil(lg beta) bits) feed a b-bit
    adder and a BINTH test; the gate itself becomes AND over the BINTH output.
    The b_i, the adder and BINTH gates and the gate itself join A.
    """
    bld = CircuitBuilder(circuit)
    A: set[int] = set()
    sizes: list[int] = []
    budget = 0
    b = 1 + ceil_log2(beta)
    size = max(beta - 1, 2)
    for gid in sorted(circuit.gates):
        g = circuit.gates[gid]
        if g.kind in ("INPUT", "NEG") or len(g.inputs) < beta:
            continue
        theta = g.threshold
        blocks = [g.inputs[i:i + size] for i in range(0, len(g.inputs), size)]
        ell = len(blocks)
        counts: list[int] = []
        for blk in blocks:
            add = build_adder(1, len(blk))
            wiring = dict(zip(add.input_ids, blk))
            # a private copy per bit keeps each count cone free of other A nodes
            outs = [bld.embed(add, wiring)[0][j] for j in range(len(add.outputs))]
            counts.extend(outs + [bld.const(0)] * (b - len(outs)))
        total = build_adder(b, ell)
        sums, made_add = bld.embed(total, dict(zip(total.input_ids, counts)))
        test = build_binth(len(sums), theta)
        (top,), made_th = bld.embed(test, dict(zip(test.input_ids, sums)))
        bld.replace(gid, Gate(gid, "AND", (top,)))
        gadget = len(made_add) + len(made_th)
        if gadget > 44 * b * ell or gadget > 50 * b * ell:
            raise CompileBudgetError(f"gadget for gate {gid} has {gadget} gates")
        added = set(made_add) | set(made_th) | set(counts) | set(sums) | {top, gid}
        if len(added) > 50 * b * ell:
            raise CompileBudgetError(f"gate {gid} adds {len(added)} gates to A")
        A |= added
        sizes.append(gadget)
        budget += 50 * b * ell
    return _Rewrite(bld.build(circuit.outputs), A, sizes, budget)


def _compile_tc(
    circuit: ThresholdCircuit,
    epsilon: float,
    beta: int | None,
    pins: Mapping[int, int] | None = None,
    c: float | None = None,
) -> tuple[CnfFormula, CompileReport]:
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    n = circuit.n
    c = circuit.wire_count / max(n, 1) if c is None else c
    auto = beta is None
    if auto:
        beta = choose_beta(c, epsilon)
        if beta > beta_cap(c, epsilon):
            raise CompileBudgetError(f"beta={beta} above the closed-form cap")
    if beta < 2:
        raise ValueError("beta must be at least 2")
    folded = fold_constants(circuit)
    d = folded.depth
    rw = replace_large_gates(folded, beta)
    A = set(rw.A) | {folded.output}
    width_cap = max(beta**d, 3)
    cnf = _encode(rw.circuit, A, width_cap, pins)
    report = CompileReport(
        epsilon=epsilon, c=c, depth=d, width_cap=width_cap, a_size=len(A),
        width=cnf.width, num_vars=cnf.num_vars, beta=beta, gadget_gates=rw.gadget_sizes,
    )
    if cnf.width > width_cap:
        raise CompileBudgetError(f"width {cnf.width} above {width_cap}")
    if len(A) > 1 + rw.a_budget:
        raise CompileBudgetError(f"|A|={len(A)} above the gadget budget")
    if len(A) > 1 + 100 * c * n * (1 + ceil_log2(beta)) / beta:
        raise CompileBudgetError(f"|A|={len(A)} above 100cn(lg beta + 1)/beta")
    if auto and len(A) > epsilon * n + 1:
        raise CompileBudgetError(f"|A|={len(A)} above eps*n + 1")
    return cnf, report


def tc_to_kcnf(
    circuit: ThresholdCircuit, epsilon: float, beta: int | None = None
) -> tuple[CnfFormula, CompileReport]:
    """Compile a threshold circuit to an equisatisfiable CNF of width at most beta^depth.

    Without an explicit ``beta`` the smallest beta keeping |A| <= eps*n is used.
    """
    return _compile_tc(circuit, epsilon, beta)


# ---------------------------------------------------------------------------
# branching on removed wires


@dataclass
class BranchPlan:
    delta: int
    r: int
    removed: list[tuple[int, int, int]]  # (source, sink, slot)
    sources: list[int]


def plan_branching(circuit: ThresholdCircuit, epsilon: float) -> BranchPlan:
    n = max(circuit.n, 1)
    c = max(circuit.wire_count / n, 1e-12)
    delta = depth_exponent(circuit.depth)
    r = max(0, min(delta, math.floor(epsilon * delta / (2 * c))))
    slots = [(u, gid, i) for gid in sorted(circuit.gates) for i, u in enumerate(circuit.gates[gid].inputs)]
    removed_idx = valiant_reduce_depth([(u, v) for u, v, _ in slots], r) if r else []
    removed = [slots[i] for i in removed_idx]
    sources = sorted({u for u, _, _ in removed})
    return BranchPlan(delta, r, removed, sources)


def restrict_circuit(
    circuit: ThresholdCircuit, removed: list[tuple[int, int, int]], values: Mapping[int, int]
) -> ThresholdCircuit:
    """Delete the removed wires, feeding their guessed source values into the sinks."""
    drop: dict[int, list[int]] = {}
    for u, v, slot in removed:
        drop.setdefault(v, []).append(slot)
    gates = dict(circuit.gates)
    for v, slots in drop.items():
        g = gates[v]
        gone = set(slots)
        ones = sum(values[g.inputs[i]] for i in gone)
        rest = [u for i, u in enumerate(g.inputs) if i not in gone]
        if g.kind == "NEG":
            gates[v] = threshold_gate(v, (), 0 if ones == 0 else 1)
        else:
            gates[v] = threshold_gate(v, rest, g.threshold - ones)
    return fold_constants(ThresholdCircuit(gates, circuit.outputs))


def tc_to_kcnf_branching(
    circuit: ThresholdCircuit, epsilon: float, beta: int | None = None
) -> Iterator[tuple[tuple[int, ...], CnfFormula, CompileReport]]:
    """One CNF per guess of the sources of the deleted wires, in lexicographic order.

    The circuit is satisfiable iff some emitted CNF is. Each guessed source is
    pinned by a unit clause so a wrong guess cannot fake satisfiability.
    """
    plan = plan_branching(circuit, epsilon)
    c = circuit.wire_count / max(circuit.n, 1)
    if not plan.removed:
        cnf, rep = _compile_tc(circuit, epsilon / 2, beta, c=c)
        yield (), cnf, rep
        return
    for bits in itertools.product((0, 1), repeat=len(plan.sources)):
        values = dict(zip(plan.sources, bits))
        reduced = restrict_circuit(circuit, plan.removed, values)
        cnf, rep = _compile_tc(reduced, epsilon / 2, beta, pins=values, c=c)
        yield bits, cnf, rep
