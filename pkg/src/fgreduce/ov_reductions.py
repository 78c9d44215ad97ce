"""From unweighted k-partite hypergraph cliques to k-OV and on to 2-OV."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .clique_reductions import (
    QuerySet,
    TriviallyNo,
    check_bound,
    default_p,
    make_k_partite,
    make_nonnegative,
    reduce_weights_mod_prime,
    strip_weights,
)
from .instances import Edge, OVInstance, ReductionTrace, StageTrace, WeightedCliqueInstance


def non_edges(inst: WeightedCliqueInstance) -> list[Edge]:
    """Partition-respecting sets of size <= d missing from E, in sorted-tuple order."""
    return sorted(e for e in inst.edge_universe() if e not in inst.edges)


def clique_to_kov(inst: WeightedCliqueInstance) -> OVInstance:
    """One vector per vertex, one coordinate per non-edge.

    Family i lists the vertices of part i in increasing order. Coordinate h
    of vertex v in part i is 1 iff h misses part i or meets it exactly in v,
    so a tuple is orthogonal iff it contains no non-edge.
    """
    if inst.partition is None:
        raise ValueError("clique_to_kov requires a k-partite instance")
    holes = non_edges(inst)
    part = inst.partition
    families = []
    for members in inst.parts:
        fam = []
        for v in members:
            mask = 0
            for j, h in enumerate(holes):
                hit = [u for u in h if part[u] == part[v]]
                if not hit or hit[0] == v:
                    mask |= 1 << j
            fam.append(mask)
        families.append(fam)
    out = OVInstance(k=inst.k, D=len(holes), families=families)
    check_bound(out.N == inst.n, "clique_to_kov: vector count differs from n")
    return out


def kov_to_2ov(ov: OVInstance) -> OVInstance:
    """Collapse each half of the families into coordinate-wise products."""
    if ov.k < 2:
        raise ValueError("kov_to_2ov requires k >= 2")
    h = ov.k // 2

    def products(fams: tuple[tuple[int, ...], ...]) -> list[int]:
        full = (1 << ov.D) - 1
        out = []
        for combo in itertools.product(*fams):
            acc = full
            for x in combo:
                acc &= x
            out.append(acc)
        return out

    left, right = products(ov.families[:h]), products(ov.families[h:])
    expect_l = 1
    for fam in ov.families[:h]:
        expect_l *= len(fam)
    expect_r = 1
    for fam in ov.families[h:]:
        expect_r *= len(fam)
    check_bound(len(left) == expect_l and len(right) == expect_r, "kov_to_2ov: half sizes")
    return OVInstance(k=2, D=ov.D, families=(left, right))


@dataclass(frozen=True)
class PipelineParams:
    p: int | None = None
    strip_mode: str = "supported"


def is_unweighted(inst: WeightedCliqueInstance) -> bool:
    return inst.t == 0 and all(w == 0 for w in inst.edges.values())


def _merge(into: dict[str, StageTrace], order: list[str], trace: ReductionTrace) -> None:
    for st in trace.stages:
        if st.stage not in into:
            into[st.stage] = StageTrace(st.stage)
            order.append(st.stage)
        agg = into[st.stage]
        agg.query_count += st.query_count
        agg.max_weights.extend(st.max_weights)
        agg.sizes.extend(st.sizes)
        for key, val in st.scalars.items():
            if isinstance(val, int) and isinstance(agg.scalars.get(key, 0), int):
                agg.scalars[key] = max(agg.scalars.get(key, val), val)
            else:
                agg.scalars[key] = val


def pipeline_clique_to_2ov(
    inst: WeightedCliqueInstance,
    params: PipelineParams | None = None,
    rng: random.Random | None = None,
) -> QuerySet[OVInstance]:
    """Exact-weight k-clique to a disjunction of 2-OV instances.

    Weighted input goes through non-negativity, prime hashing, the square
    trick with weight stripping, then the two OV steps. Input with all
    weights and the target equal to zero is a plain clique question and only
    takes the two OV steps.
    """
    params = params or PipelineParams()
    rng = rng or random.Random(0)
    stages: dict[str, StageTrace] = {}
    order: list[str] = []
    result: QuerySet[OVInstance] = QuerySet()

    if is_unweighted(inst):
        cliques = [make_k_partite(inst)]
    else:
        nn = make_nonnegative(inst)
        pre = ReductionTrace()
        st = pre.stage("nonnegative")
        if isinstance(nn, TriviallyNo):
            st.scalars["trivially_no"] = 1
            _merge(stages, order, pre)
            result.trace.stages = [stages[s] for s in order]
            return result
        st.query_count = 1
        st.max_weights = [nn.M]
        _merge(stages, order, pre)
        hashed = reduce_weights_mod_prime(nn, rng)
        _merge(stages, order, hashed.trace)
        p = params.p if params.p is not None else default_p(inst.n)
        cliques = []
        for q in hashed.queries:
            stripped = strip_weights(q, p, mode=params.strip_mode)
            _merge(stages, order, stripped.trace)
            cliques.extend(stripped.queries)

    tail = ReductionTrace()
    st_k = tail.stage("clique-to-kov")
    st_2 = tail.stage("kov-to-2ov")
    for g in cliques:
        kov = clique_to_kov(g)
        st_k.sizes.append(kov.N)
        two = kov_to_2ov(kov)
        st_2.sizes.append(two.N)
        st_2.scalars["max_dimension"] = max(int(st_2.scalars.get("max_dimension", 0)), two.D)
        result.queries.append(two)
    st_k.query_count = st_2.query_count = len(result.queries)
    _merge(stages, order, tail)
    result.trace.stages = [stages[s] for s in order]
    return result
