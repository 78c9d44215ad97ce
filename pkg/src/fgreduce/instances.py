"""Data model and text formats for the five problem families.

Formats (UTF-8, LF-terminated, whitespace-separated, ``#`` starts a comment):

hypergraph::

    hg <n> <d> <k> <t>
    e <arity> <v1> ... <v_arity> <w>
    p <v> <part>

orthogonal vectors::

    ov <k> <D>
    x <family> <bitstring>

threshold circuit::

    tc <n_inputs>
    g <id> INPUT|NEG|AND|OR|TH [<theta>] <in ...>
    out <id>

CNF formulas use DIMACS.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from math import comb
from types import MappingProxyType

Edge = tuple[int, ...]


class FormatError(ValueError):
    """Malformed instance text or an instance violating its type invariants."""


def binom_le(k: int, d: int) -> int:
    """Number of subsets of a k-set of size at most d."""
    return sum(comb(k, i) for i in range(min(k, d) + 1))


def subsets_upto(vertices: Sequence[int], d: int) -> Iterable[Edge]:
    """All sorted sub-tuples of ``vertices`` (assumed sorted) of size <= d."""
    for size in range(min(d, len(vertices)) + 1):
        yield from itertools.combinations(vertices, size)


def edge_order(e: Edge) -> tuple[int, Edge]:
    return (len(e), e)


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _lines(text: str) -> Iterable[tuple[int, list[str]]]:
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = _strip(raw)
        if body:
            yield lineno, body.split()


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise FormatError(f"line {lineno}: expected an integer, got {tok!r}") from None


# ---------------------------------------------------------------------------
# weighted hypergraph cliques


@dataclass(frozen=True)
class WeightedCliqueInstance:
    """Exact-weight k-clique on a d-hypergraph with vertices ``0..n-1``.

    ``edges`` maps sorted vertex tuples (including ``()`` and singletons) to
    integer weights. ``partition`` optionally assigns every vertex to one of
    ``k`` parts; a k-clique of a partitioned instance takes one vertex per part.
    """

    n: int
    d: int
    k: int
    t: int
    edges: Mapping[Edge, int]
    partition: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if self.n < 0 or self.d < 0 or self.k < 0:
            raise FormatError("n, d and k must be non-negative")
        edges = {}
        for e, w in self.edges.items():
            e = tuple(e)
            if len(e) > self.d:
                raise FormatError(f"edge {e} has cardinality > d={self.d}")
            if any(v < 0 or v >= self.n for v in e):
                raise FormatError(f"edge {e} has a vertex out of range")
            if any(a >= b for a, b in zip(e, e[1:])):
                raise FormatError(f"edge {e} is not a sorted set")
            edges[e] = int(w)
        object.__setattr__(self, "edges", MappingProxyType(edges))
        if self.partition is not None:
            part = tuple(int(p) for p in self.partition)
            if len(part) != self.n:
                raise FormatError("partition must assign every vertex")
            if any(p < 0 or p >= self.k for p in part):
                raise FormatError("partition index out of range")
            for e in edges:
                labels = [part[v] for v in e]
                if len(set(labels)) != len(labels):
                    raise FormatError(f"edge {e} meets a part twice")
            object.__setattr__(self, "partition", part)

    @property
    def M(self) -> int:
        return max([abs(self.t)] + [abs(w) for w in self.edges.values()])

    @property
    def max_weight(self) -> int:
        return max(self.edges.values(), default=0)

    @property
    def edges_per_clique(self) -> int:
        return binom_le(self.k, self.d)

    @cached_property
    def parts(self) -> tuple[tuple[int, ...], ...]:
        if self.partition is None:
            raise ValueError("instance is not partitioned")
        groups: list[list[int]] = [[] for _ in range(self.k)]
        for v, p in enumerate(self.partition):
            groups[p].append(v)
        return tuple(tuple(g) for g in groups)

    def respects_partition(self, e: Edge) -> bool:
        if self.partition is None:
            return True
        labels = [self.partition[v] for v in e]
        return len(set(labels)) == len(labels)

    def edge_universe(self, d: int | None = None) -> list[Edge]:
        """Every admissible edge of size <= d, sorted by (size, vertices)."""
        d = self.d if d is None else d
        if self.partition is None:
            return list(subsets_upto(range(self.n), d))
        out = []
        parts = self.parts
        for size in range(min(d, self.k) + 1):
            for labels in itertools.combinations(range(self.k), size):
                for combo in itertools.product(*(parts[i] for i in labels)):
                    out.append(tuple(sorted(combo)))
        out.sort(key=edge_order)
        return out

    def color_type(self, e: Edge) -> tuple[int, ...]:
        assert self.partition is not None
        return tuple(sorted(self.partition[v] for v in e))

    def replace(self, **changes) -> WeightedCliqueInstance:
        fields_ = dict(n=self.n, d=self.d, k=self.k, t=self.t, edges=self.edges, partition=self.partition)
        fields_.update(changes)
        return WeightedCliqueInstance(**fields_)


@dataclass(frozen=True)
class CliqueSolution:
    vertices: tuple[int, ...]
    weight: int


def parse_clique_instance(text: str) -> WeightedCliqueInstance:
    header = None
    edges: dict[Edge, int] = {}
    partition: dict[int, int] = {}
    for lineno, tok in _lines(text):
        if header is None:
            if tok[0] != "hg" or len(tok) != 5:
                raise FormatError(f"line {lineno}: expected 'hg <n> <d> <k> <t>'")
            header = [_int(x, lineno) for x in tok[1:]]
            continue
        n, d, k, _ = header
        if tok[0] == "e":
            if len(tok) < 3:
                raise FormatError(f"line {lineno}: truncated edge line")
            arity = _int(tok[1], lineno)
            if arity < 0 or len(tok) != arity + 3:
                raise FormatError(f"line {lineno}: edge arity does not match the vertex list")
            if arity > d:
                raise FormatError(f"line {lineno}: edge cardinality {arity} > d={d}")
            vs = [_int(x, lineno) for x in tok[2:2 + arity]]
            if any(v < 0 or v >= n for v in vs):
                raise FormatError(f"line {lineno}: vertex out of range")
            e = tuple(sorted(vs))
            if len(set(e)) != len(e):
                raise FormatError(f"line {lineno}: edge {vs} is not a set")
            if e in edges:
                raise FormatError(f"line {lineno}: duplicate edge {e}")
            edges[e] = _int(tok[-1], lineno)
        elif tok[0] == "p":
            if len(tok) != 3:
                raise FormatError(f"line {lineno}: expected 'p <v> <part>'")
            v, part = _int(tok[1], lineno), _int(tok[2], lineno)
            if not 0 <= v < n:
                raise FormatError(f"line {lineno}: vertex out of range")
            if not 0 <= part < k:
                raise FormatError(f"line {lineno}: partition index {part} >= k={k}")
            if v in partition:
                raise FormatError(f"line {lineno}: vertex {v} assigned twice")
            partition[v] = part
        else:
            raise FormatError(f"line {lineno}: unknown record {tok[0]!r}")
    if header is None:
        raise FormatError("missing 'hg' header")
    n, d, k, t = header
    part = None
    if partition:
        if len(partition) != n:
            raise FormatError("partition lines must cover every vertex")
        part = tuple(partition[v] for v in range(n))
    return WeightedCliqueInstance(n=n, d=d, k=k, t=t, edges=edges, partition=part)


def serialize_clique_instance(inst: WeightedCliqueInstance) -> str:
    out = [f"hg {inst.n} {inst.d} {inst.k} {inst.t}"]
    for e in sorted(inst.edges, key=edge_order):
        out.append(" ".join(["e", str(len(e)), *map(str, e), str(inst.edges[e])]))
    if inst.partition is not None:
        out.extend(f"p {v} {p}" for v, p in enumerate(inst.partition))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# orthogonal vectors


@dataclass(frozen=True)
class OVInstance:
    """k families of D-dimensional 0/1 vectors.

    A vector is stored as an int bitmask: bit j is coordinate j, which is
    character j of its bitstring.
    """

    k: int
    D: int
    families: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        fams = tuple(tuple(int(x) for x in fam) for fam in self.families)
        if len(fams) != self.k:
            raise FormatError(f"expected {self.k} families, got {len(fams)}")
        if self.D < 0:
            raise FormatError("dimension must be non-negative")
        limit = 1 << self.D
        for fam in fams:
            for x in fam:
                if x < 0 or x >= limit:
                    raise FormatError(f"vector {x} does not fit in dimension {self.D}")
        object.__setattr__(self, "families", fams)

    @classmethod
    def from_bits(cls, families: Sequence[Sequence[Sequence[int] | str]], D: int | None = None) -> OVInstance:
        fams = []
        for fam in families:
            vecs = []
            for vec in fam:
                bits = [int(c) for c in vec]
                if D is None:
                    D = len(bits)
                if len(bits) != D:
                    raise FormatError("ragged vector lengths")
                if any(b not in (0, 1) for b in bits):
                    raise FormatError("non-binary coordinate")
                vecs.append(sum(b << j for j, b in enumerate(bits)))
            fams.append(vecs)
        return cls(k=len(fams), D=D or 0, families=fams)

    @property
    def N(self) -> int:
        return sum(len(f) for f in self.families)

    def bits(self, x: int) -> str:
        return "".join("1" if x >> j & 1 else "0" for j in range(self.D))


def parse_ov(text: str) -> OVInstance:
    header = None
    fams: list[list[int]] = []
    for lineno, tok in _lines(text):
        if header is None:
            if tok[0] != "ov" or len(tok) != 3:
                raise FormatError(f"line {lineno}: expected 'ov <k> <D>'")
            header = (_int(tok[1], lineno), _int(tok[2], lineno))
            fams = [[] for _ in range(header[0])]
            continue
        k, D = header
        if tok[0] != "x" or len(tok) not in (2, 3):
            raise FormatError(f"line {lineno}: expected 'x <family> <bitstring>'")
        fam = _int(tok[1], lineno)
        if not 0 <= fam < k:
            raise FormatError(f"line {lineno}: family index out of range")
        bits = tok[2] if len(tok) == 3 else ""
        if len(bits) != D:
            raise FormatError(f"line {lineno}: vector length {len(bits)} != D={D}")
        if set(bits) - {"0", "1"}:
            raise FormatError(f"line {lineno}: non-binary character in {bits!r}")
        fams[fam].append(sum(1 << j for j, c in enumerate(bits) if c == "1"))
    if header is None:
        raise FormatError("missing 'ov' header")
    return OVInstance(k=header[0], D=header[1], families=fams)


def serialize_ov(ov: OVInstance) -> str:
    out = [f"ov {ov.k} {ov.D}"]
    for i, fam in enumerate(ov.families):
        for x in fam:
            out.append(f"x {i} {ov.bits(x)}".rstrip())
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# threshold circuits

GATE_KINDS = ("INPUT", "NEG", "AND", "OR", "TH")


@dataclass(frozen=True)
class Gate:
    id: int
    kind: str
    inputs: tuple[int, ...] = ()
    theta: int | None = None

    @property
    def threshold(self) -> int:
        """Number of 1-inputs needed for the gate to output 1 (not for NEG/INPUT).

        AND over no inputs is the constant 1 and OR over no inputs the constant 0.
        """
        if self.kind == "AND":
            return len(self.inputs)
        if self.kind == "OR":
            return 1
        if self.kind == "TH":
            return self.theta
        raise ValueError(f"{self.kind} gate has no threshold")


@dataclass(frozen=True)
class ThresholdCircuit:
    """DAG over INPUT/NEG/AND/OR/TH gates.

    Circuits parsed from text have a single output. Gadget circuits built in
    code may carry several outputs, in order.
    """

    gates: Mapping[int, Gate]
    outputs: tuple[int, ...]

    def __post_init__(self) -> None:
        gates = dict(self.gates) if isinstance(self.gates, Mapping) else {g.id: g for g in self.gates}
        for gid, g in gates.items():
            if gid != g.id:
                raise FormatError(f"gate key {gid} does not match id {g.id}")
            if g.kind not in GATE_KINDS:
                raise FormatError(f"gate {gid}: unknown kind {g.kind!r}")
            for u in g.inputs:
                if u not in gates:
                    raise FormatError(f"gate {gid}: dangling wire from {u}")
            if g.kind == "INPUT" and g.inputs:
                raise FormatError(f"gate {gid}: INPUT with fan-in")
            if g.kind == "NEG" and len(g.inputs) != 1:
                raise FormatError(f"gate {gid}: NEG needs fan-in 1")
            if g.kind == "TH":
                if g.theta is None or not 1 <= g.theta <= len(g.inputs):
                    raise FormatError(f"gate {gid}: threshold {g.theta} out of range")
            elif g.theta is not None:
                raise FormatError(f"gate {gid}: only TH gates carry a threshold")
        for o in self.outputs:
            if o not in gates:
                raise FormatError(f"output {o} is not a gate")
        object.__setattr__(self, "gates", MappingProxyType(gates))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        self.topological_order  # raises on cycles

    @property
    def output(self) -> int:
        if len(self.outputs) != 1:
            raise ValueError("circuit does not have exactly one output")
        return self.outputs[0]

    @cached_property
    def input_ids(self) -> tuple[int, ...]:
        return tuple(sorted(g.id for g in self.gates.values() if g.kind == "INPUT"))

    @property
    def n(self) -> int:
        return len(self.input_ids)

    @cached_property
    def topological_order(self) -> tuple[int, ...]:
        indeg = {gid: len(g.inputs) for gid, g in self.gates.items()}
        succ: dict[int, list[int]] = {gid: [] for gid in self.gates}
        for gid, g in self.gates.items():
            for u in g.inputs:
                succ[u].append(gid)
        ready = sorted(gid for gid, k in indeg.items() if k == 0)
        order = []
        while ready:
            u = ready.pop()
            order.append(u)
            for v in succ[u]:
                indeg[v] -= 1
                if indeg[v] == 0:
                    ready.append(v)
        if len(order) != len(self.gates):
            raise FormatError("cycle detected in circuit")
        return tuple(order)

    @cached_property
    def successors(self) -> Mapping[int, tuple[int, ...]]:
        succ: dict[int, list[int]] = {gid: [] for gid in self.gates}
        for gid in sorted(self.gates):
            for u in self.gates[gid].inputs:
                succ[u].append(gid)
        return {u: tuple(vs) for u, vs in succ.items()}

    @cached_property
    def gate_depths(self) -> Mapping[int, int]:
        depth: dict[int, int] = {}
        for gid in self.topological_order:
            ins = self.gates[gid].inputs
            depth[gid] = 1 + max(depth[u] for u in ins) if ins else 0
        return depth

    @property
    def depth(self) -> int:
        return max(self.gate_depths.values(), default=0)

    @property
    def wire_count(self) -> int:
        return sum(len(g.inputs) for g in self.gates.values())

    def wires(self) -> list[tuple[int, int]]:
        """(source, sink) per wire, sinks in id order, sources in slot order."""
        return [(u, gid) for gid in sorted(self.gates) for u in self.gates[gid].inputs]


def parse_circuit(text: str) -> ThresholdCircuit:
    n_inputs = None
    gates: dict[int, Gate] = {}
    outputs: list[int] = []
    for lineno, tok in _lines(text):
        if n_inputs is None:
            if tok[0] != "tc" or len(tok) != 2:
                raise FormatError(f"line {lineno}: expected 'tc <n_inputs>'")
            n_inputs = _int(tok[1], lineno)
            continue
        if tok[0] == "out":
            if len(tok) != 2:
                raise FormatError(f"line {lineno}: expected 'out <id>'")
            outputs.append(_int(tok[1], lineno))
            continue
        if tok[0] != "g" or len(tok) < 3:
            raise FormatError(f"line {lineno}: expected a gate line")
        gid, kind = _int(tok[1], lineno), tok[2].upper()
        if kind not in GATE_KINDS:
            raise FormatError(f"line {lineno}: unknown gate kind {tok[2]!r}")
        rest = [_int(x, lineno) for x in tok[3:]]
        theta = None
        if kind == "TH":
            if not rest:
                raise FormatError(f"line {lineno}: TH gate needs a threshold")
            theta, rest = rest[0], rest[1:]
        if gid in gates:
            raise FormatError(f"line {lineno}: duplicate gate id {gid}")
        gates[gid] = Gate(gid, kind, tuple(rest), theta)
    if n_inputs is None:
        raise FormatError("missing 'tc' header")
    if len(outputs) != 1:
        raise FormatError(f"expected exactly one output, got {len(outputs)}")
    circuit = ThresholdCircuit(gates, tuple(outputs))
    if circuit.n != n_inputs:
        raise FormatError(f"header declares {n_inputs} inputs, found {circuit.n}")
    return circuit


def serialize_circuit(circuit: ThresholdCircuit) -> str:
    out = [f"tc {circuit.n}"]
    for gid in sorted(circuit.gates):
        g = circuit.gates[gid]
        toks = ["g", str(gid), g.kind]
        if g.kind == "TH":
            toks.append(str(g.theta))
        toks.extend(map(str, g.inputs))
        out.append(" ".join(toks))
    out.extend(f"out {o}" for o in circuit.outputs)
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# CNF


@dataclass(frozen=True)
class CnfFormula:
    """Clauses over variables ``1..num_vars`` in DIMACS literal convention.

    ``var_names`` tags variables with their origin, e.g. ``"x 3"`` for the
    input gate 3 or ``"y 17"`` for the auxiliary variable of gate 17.
    """

    num_vars: int
    clauses: tuple[tuple[int, ...], ...]
    var_names: Mapping[int, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clauses = tuple(tuple(int(l) for l in c) for c in self.clauses)
        for c in clauses:
            for lit in c:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise FormatError(f"literal {lit} out of range")
        if any(not c for c in clauses) and clauses != ((),):
            raise FormatError("empty clause outside the canonical FALSE formula")
        object.__setattr__(self, "clauses", clauses)
        object.__setattr__(self, "var_names", MappingProxyType(dict(self.var_names)))

    @property
    def width(self) -> int:
        return max((len(c) for c in self.clauses), default=0)

    def satisfied_by(self, assignment: Sequence[int]) -> bool:
        return all(any((assignment[abs(l) - 1] == 1) == (l > 0) for l in c) for c in self.clauses)

    def count_satisfied(self, assignment: Sequence[int]) -> int:
        return sum(any((assignment[abs(l) - 1] == 1) == (l > 0) for l in c) for c in self.clauses)


def write_dimacs(cnf: CnfFormula, comments: Iterable[str] = ()) -> str:
    out = [f"c {line}" for line in comments]
    out.append(f"c width {cnf.width}")
    out.extend(f"c origin {v} {cnf.var_names[v]}" for v in sorted(cnf.var_names))
    out.append(f"p cnf {cnf.num_vars} {len(cnf.clauses)}")
    out.extend(" ".join([*map(str, c), "0"]) for c in cnf.clauses)
    return "\n".join(out) + "\n"


def parse_dimacs(text: str) -> CnfFormula:
    header = None
    names: dict[int, str] = {}
    clauses: list[tuple[int, ...]] = []
    pending: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        tok = line.split()
        if tok[0] == "c":
            if len(tok) >= 4 and tok[1] == "origin":
                names[_int(tok[2], lineno)] = " ".join(tok[3:])
            continue
        if tok[0] == "p":
            if len(tok) != 4 or tok[1] != "cnf":
                raise FormatError(f"line {lineno}: expected 'p cnf <vars> <clauses>'")
            header = (_int(tok[2], lineno), _int(tok[3], lineno))
            continue
        if header is None:
            raise FormatError(f"line {lineno}: clause before header")
        for x in tok:
            lit = _int(x, lineno)
            if lit == 0:
                clauses.append(tuple(pending))
                pending = []
            else:
                pending.append(lit)
    if header is None:
        raise FormatError("missing 'p cnf' header")
    if pending:
        clauses.append(tuple(pending))
    if len(clauses) != header[1]:
        raise FormatError(f"header declares {header[1]} clauses, found {len(clauses)}")
    return CnfFormula(header[0], tuple(clauses), names)


# ---------------------------------------------------------------------------
# traces


@dataclass
class StageTrace:
    stage: str
    query_count: int = 0
    max_weights: list[int] = field(default_factory=list)
    sizes: list[int] = field(default_factory=list)
    scalars: dict[str, int | str] = field(default_factory=dict)


@dataclass
class ReductionTrace:
    """Per-stage bookkeeping for a (composed) reduction."""

    stages: list[StageTrace] = field(default_factory=list)

    def stage(self, name: str) -> StageTrace:
        st = StageTrace(name)
        self.stages.append(st)
        return st

    def extend(self, other: ReductionTrace) -> None:
        self.stages.extend(other.stages)

    def rows(self) -> list[tuple[str, str, str]]:
        rows = []
        for st in self.stages:
            rows.append((st.stage, "queries", str(st.query_count)))
            if st.max_weights:
                rows.append((st.stage, "max_weight", str(max(st.max_weights))))
            if st.sizes:
                rows.append((st.stage, "max_size", str(max(st.sizes))))
            for key in sorted(st.scalars):
                rows.append((st.stage, key, str(st.scalars[key])))
        return rows

    def to_text(self) -> str:
        return "".join("\t".join(r) + "\n" for r in self.rows())
