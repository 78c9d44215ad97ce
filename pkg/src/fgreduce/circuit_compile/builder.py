"""Incremental construction and rewriting of threshold circuits."""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence

from ..instances import Gate, ThresholdCircuit


def threshold_gate(gid: int, inputs: Sequence[int], theta: int) -> Gate:
    """Gate that fires when at least ``theta`` of ``inputs`` are 1, in canonical kind.

    Constants come out as AND() (true) and OR() (false).
    """
    inputs = tuple(inputs)
    if theta <= 0:
        return Gate(gid, "AND", ())
    if theta > len(inputs):
        return Gate(gid, "OR", ())
    if theta == len(inputs):
        return Gate(gid, "AND", inputs)
    if theta == 1:
        return Gate(gid, "OR", inputs)
    return Gate(gid, "TH", inputs, theta)


def constant_value(g: Gate) -> int | None:
    if g.kind in ("AND", "OR") and not g.inputs:
        return 1 if g.kind == "AND" else 0
    return None


class CircuitBuilder:
    """Mutable gate table with fresh-id allocation."""

    def __init__(self, base: ThresholdCircuit | None = None) -> None:
        self.gates: dict[int, Gate] = dict(base.gates) if base is not None else {}
        self.next_id = max(self.gates, default=-1) + 1
        self._consts: dict[int, int] = {}

    def _fresh(self) -> int:
        gid = self.next_id
        self.next_id += 1
        return gid

    def add(self, kind: str, inputs: Iterable[int] = (), theta: int | None = None) -> int:
        gid = self._fresh()
        self.gates[gid] = Gate(gid, kind, tuple(inputs), theta)
        return gid

    def input(self) -> int:
        return self.add("INPUT")

    def const(self, bit: int) -> int:
        if bit not in self._consts:
            self._consts[bit] = self.add("AND" if bit else "OR")
        return self._consts[bit]

    def replace(self, gid: int, gate: Gate) -> None:
        self.gates[gid] = gate

    def embed(self, sub: ThresholdCircuit, input_map: Mapping[int, int]) -> tuple[list[int], list[int]]:
        """Copy ``sub`` in, wiring its inputs to existing gates.

        Returns (output ids, ids of the newly created gates).
        """
        where = {u: input_map[u] for u in sub.input_ids}
        created = []
        for gid in sub.topological_order:
            if gid in where:
                continue
            g = sub.gates[gid]
            new = self.add(g.kind, (where[u] for u in g.inputs), g.theta)
            where[gid] = new
            created.append(new)
        return [where[o] for o in sub.outputs], created

    def build(self, outputs: Sequence[int]) -> ThresholdCircuit:
        return ThresholdCircuit(dict(self.gates), tuple(outputs))


def fold_constants(circuit: ThresholdCircuit) -> ThresholdCircuit:
    """Propagate constant gates; ids and inputs are preserved."""
    gates = dict(circuit.gates)
    const: dict[int, int] = {}
    for gid in circuit.topological_order:
        g = gates[gid]
        if g.kind == "INPUT":
            continue
        c = constant_value(g)
        if c is not None:
            const[gid] = c
            continue
        if g.kind == "NEG":
            u = g.inputs[0]
            if u in const:
                const[gid] = 1 - const[u]
                gates[gid] = threshold_gate(gid, (), 0 if const[gid] else 1)
            continue
        if not any(u in const for u in g.inputs):
            continue
        ones = sum(const.get(u, 0) for u in g.inputs)
        rest = [u for u in g.inputs if u not in const]
        new = threshold_gate(gid, rest, g.threshold - ones)
        gates[gid] = new
        c = constant_value(new)
        if c is not None:
            const[gid] = c
    return ThresholdCircuit(gates, circuit.outputs)
