"""Cone extraction and truth-table CNF encoding of single-output subcircuits."""

from __future__ import annotations

from collections.abc import Iterable, Mapping

from ..instances import Gate, ThresholdCircuit


class WidthCapExceeded(ValueError):
    """A constraint needs more variables than the configured clause width."""


def extract_subcircuit(circuit: ThresholdCircuit, A: Iterable[int], v: int) -> ThresholdCircuit:
    """Cone of ``v`` cut at ``A``: gates of A (other than v) and inputs become inputs.

    Gate ids are kept, so the result's input ids name the variables it reads.
    """
    stop = set(A)
    stop.discard(v)
    gates: dict[int, Gate] = {}
    stack = [v]
    while stack:
        u = stack.pop()
        if u in gates:
            continue
        g = circuit.gates[u]
        if u != v and (u in stop or g.kind == "INPUT"):
            gates[u] = Gate(u, "INPUT")
            continue
        gates[u] = g
        stack.extend(g.inputs)
    return ThresholdCircuit(gates, (v,))


def _var_patterns(r: int) -> list[int]:
    size = 1 << r
    full = (1 << size) - 1
    pats = []
    for j in range(r):
        half = 1 << j
        block = ((1 << half) - 1) << half
        pats.append(full // ((1 << (2 * half)) - 1) * block)
    return pats


def truth_table(circuit: ThresholdCircuit) -> int:
    """Output truth table as an int: bit i is the value on the input whose bit j is
    the value of the j-th input (ascending id)."""
    r = circuit.n
    full = (1 << (1 << r)) - 1
    val: dict[int, int] = dict(zip(circuit.input_ids, _var_patterns(r)))
    for gid in circuit.topological_order:
        if gid in val:
            continue
        g = circuit.gates[gid]
        if g.kind == "NEG":
            val[gid] = full ^ val[g.inputs[0]]
            continue
        theta = g.threshold
        ins = [val[u] for u in g.inputs]
        if theta <= 0:
            val[gid] = full
        elif theta > len(ins):
            val[gid] = 0
        elif theta == len(ins):
            acc = full
            for x in ins:
                acc &= x
            val[gid] = acc
        elif theta == 1:
            acc = 0
            for x in ins:
                acc |= x
            val[gid] = acc
        else:
            # at_least[i]: positions where at least i of the inputs seen so far are 1
            at_least = [full] + [0] * theta
            for x in ins:
                for i in range(theta, 0, -1):
                    at_least[i] |= at_least[i - 1] & x
            val[gid] = at_least[theta]
    return val[circuit.outputs[0]]


def table_to_cnf(table: int, variables: list[int], y: int) -> list[tuple[int, ...]]:
    """Clauses for y <-> f, where ``table`` is f over ``variables`` (bit j of the
    row index is ``variables[j]``).

    Shannon expansion on the highest variable; variables the current
    restriction does not depend on are skipped, and each constant leaf emits
    one clause excluding its path.
    """
    clauses: list[tuple[int, ...]] = []

    def rec(tab: int, r: int, path: list[int]) -> None:
        size = 1 << r
        if tab == 0 or tab == (1 << size) - 1:
            clauses.append(tuple(path) + ((y,) if tab else (-y,)))
            return
        half = 1 << (r - 1)
        lo = tab & ((1 << half) - 1)
        hi = tab >> half
        if lo == hi:
            rec(lo, r - 1, path)
            return
        x = variables[r - 1]
        rec(lo, r - 1, path + [x])  # branch x = 0: clause contains +x
        rec(hi, r - 1, path + [-x])

    rec(table, len(variables), [])
    return clauses


def constraint_to_cnf(
    sub: ThresholdCircuit,
    y: int,
    var_of: Mapping[int, int],
    width_cap: int | None = None,
) -> list[tuple[int, ...]]:
    """Clauses satisfied exactly when variable ``y`` equals the subcircuit's output."""
    if width_cap is not None and sub.n + 1 > width_cap:
        raise WidthCapExceeded(f"constraint on {sub.n} inputs exceeds width {width_cap}")
    variables = [var_of[u] for u in sub.input_ids]
    return table_to_cnf(truth_table(sub), variables, y)
