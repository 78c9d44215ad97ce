"""Weight-manipulating self-reductions for weighted hypergraph k-clique.

Every reduction returns either a single instance or a :class:`QuerySet`
whose answer is the OR of its queries' answers. Proven size bounds are
asserted at runtime; a failing assertion is a defect, not an input error.
"""

from __future__ import annotations

import itertools
import math
import random
from collections.abc import Callable, Iterator, Sequence
from dataclasses import dataclass, field
from typing import Generic, TypeVar

from sympy import isprime

from .instances import (
    CliqueSolution,
    Edge,
    ReductionTrace,
    WeightedCliqueInstance,
    binom_le,
    edge_order,
)
from .oracles import solve_exact_weight_clique

Q_ = TypeVar("Q_")


class BoundViolation(AssertionError):
    """A proven size bound failed to hold: a bug in the reduction."""


class PrimeSamplingError(RuntimeError):
    pass


def check_bound(ok: bool, message: str) -> None:
    if not ok:
        raise BoundViolation(message)


@dataclass(frozen=True)
class TriviallyNo:
    reason: str


@dataclass
class QuerySet(Generic[Q_]):
    """Queries combined by disjunction: the answer is yes iff some query is yes."""

    queries: list[Q_] = field(default_factory=list)
    trace: ReductionTrace = field(default_factory=ReductionTrace)

    combiner = "or"

    def __len__(self) -> int:
        return len(self.queries)


def _M_eff(inst: WeightedCliqueInstance) -> int:
    return max(inst.M, 1)


# ---------------------------------------------------------------------------
# basic preprocessing


def make_complete(inst: WeightedCliqueInstance) -> WeightedCliqueInstance:
    """Add every admissible edge of size <= d; new edges get weight +-B*M.

    The sign is chosen so that any clique using a new edge lands strictly on
    the far side of the target: +B*M when t < M, otherwise -B*M. For
    partitioned instances only partition-respecting sets are added.
    """
    B = inst.edges_per_clique
    M = _M_eff(inst)
    filler = B * M if inst.t < M else -B * M
    edges = dict(inst.edges)
    for e in inst.edge_universe():
        edges.setdefault(e, filler)
    out = inst.replace(edges=edges)
    check_bound(out.M <= B * M, "make_complete: M' > B*M")
    return out


def make_k_partite(inst: WeightedCliqueInstance) -> WeightedCliqueInstance:
    """Copy every edge onto each choice of distinct part labels.

    Vertex (a, v) becomes ``a*n + v``. Already-partitioned input is returned
    unchanged. With d < 2 and k >= 2 nothing would stop a clique from taking
    one original vertex in two parts, so d is lifted to 2 and zero-weight
    pairs are added between copies of distinct original vertices.
    """
    if inst.partition is not None:
        return inst
    n, k, d = inst.n, inst.k, inst.d
    lift = d < 2 and k >= 2
    new_d = 2 if lift else d
    edges: dict[Edge, int] = {}
    base = dict(inst.edges)
    if lift:
        if d == 0:
            base.update({(v,): 0 for v in range(n)})
        base.update({(u, v): 0 for u, v in itertools.combinations(range(n), 2)})
    for e, w in base.items():
        for labels in itertools.permutations(range(k), len(e)):
            f = tuple(sorted(a * n + v for a, v in zip(labels, e)))
            edges[f] = w
    partition = tuple(a for a in range(k) for _ in range(n))
    out = WeightedCliqueInstance(n=k * n, d=new_d, k=k, t=inst.t, edges=edges, partition=partition)
    check_bound(out.M == inst.M or not inst.edges, "make_k_partite: M changed")
    return out


def make_target_zero(inst: WeightedCliqueInstance) -> WeightedCliqueInstance:
    """Move the target onto the size-d edges spanning parts 0..d-1."""
    if inst.partition is None:
        raise ValueError("make_target_zero requires a k-partite instance")
    if inst.k < inst.d:
        raise ValueError("make_target_zero requires k >= d")
    if inst.t == 0:
        return inst
    span = tuple(range(inst.d))
    edges = {
        e: (w - inst.t if len(e) == inst.d and inst.color_type(e) == span else w)
        for e, w in inst.edges.items()
    }
    out = inst.replace(edges=edges, t=0)
    check_bound(out.M <= 2 * inst.M, "make_target_zero: M' > 2M")
    return out


def make_nonnegative(inst: WeightedCliqueInstance) -> WeightedCliqueInstance | TriviallyNo:
    """Complete the instance, then shift all weights by the most negative one."""
    B = inst.edges_per_clique
    M = _M_eff(inst)
    comp = make_complete(inst)
    L = max(0, -min(comp.edges.values(), default=0))
    edges = {e: w + L for e, w in comp.edges.items()}
    t = comp.t + L * B
    top = max(edges.values(), default=0)
    if t < 0 or t > top * B:
        return TriviallyNo(f"shifted target {t} outside [0, {top * B}]")
    out = comp.replace(edges=edges, t=t)
    check_bound(out.M <= 2 * B * B * M, "make_nonnegative: M' > 2*B^2*M")
    return out


# ---------------------------------------------------------------------------
# hashing modulo a random prime


def _zero_instance(k: int, d: int, answer: bool) -> WeightedCliqueInstance:
    universe = [e for size in range(min(k, d) + 1) for e in itertools.combinations(range(k), size)]
    return WeightedCliqueInstance(n=k, d=d, k=k, t=0 if answer else 1, edges={e: 0 for e in universe})


def reduce_weights_mod_prime(
    inst: WeightedCliqueInstance,
    rng: random.Random,
    sample_factor: int = 10,
) -> QuerySet[WeightedCliqueInstance]:
    """Shrink weights to n^O(k) by reducing them modulo a random prime.

    Yes-instances always map to some yes-query. Requires non-negative weights.
    """
    if inst.t < 0 or any(w < 0 for w in inst.edges.values()):
        raise ValueError("reduce_weights_mod_prime requires non-negative weights")
    n, k, d = inst.n, inst.k, inst.d
    B = inst.edges_per_clique
    M = inst.M
    qs: QuerySet[WeightedCliqueInstance] = QuerySet()
    st = qs.trace.stage("prime-hash")
    st.scalars["input_bits"] = M.bit_length()
    nk = n**k
    if M <= nk:
        st.scalars["mode"] = "passthrough"
        qs.queries.append(inst)
    elif math.log(M) >= nk:
        st.scalars["mode"] = "brute-force"
        qs.queries.append(_zero_instance(k, d, solve_exact_weight_clique(inst) is not None))
    else:
        st.scalars["mode"] = "hash"
        Q = 200 * nk * math.log2(max(k, 1) ** d * M)
        top = math.ceil(Q * math.log(Q))
        budget = sample_factor * math.ceil(2 * math.log(top))
        for _ in range(budget):
            p = rng.randint(2, top)
            if isprime(p):
                break
        else:
            raise PrimeSamplingError(f"no prime among {budget} samples from [2, {top}]")
        st.scalars["prime"] = p
        edges = {e: w % p for e, w in inst.edges.items()}
        for j in range(B + 1):
            qs.queries.append(inst.replace(edges=edges, t=j * p + inst.t % p))
        for q in qs.queries:
            check_bound(q.M <= B * p + p, "prime-hash: query weight above (B+1)*p")
    st.query_count = len(qs.queries)
    st.max_weights = [q.M for q in qs.queries]
    st.sizes = [q.n for q in qs.queries]
    return qs


# ---------------------------------------------------------------------------
# q-expansions and carries


@dataclass(frozen=True)
class QExpansion:
    q: int
    digits: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.q < 2:
            raise ValueError("base must be at least 2")
        if any(not 0 <= x < self.q for x in self.digits):
            raise ValueError("digit out of range")

    @property
    def L(self) -> int:
        return len(self.digits)

    @property
    def value(self) -> int:
        return sum(x * self.q**i for i, x in enumerate(self.digits))


@dataclass(frozen=True)
class CarryVector:
    carries: tuple[int, ...]
    bound: int

    def __post_init__(self) -> None:
        if not self.carries or self.carries[0] != 0:
            raise ValueError("first carry must be 0")
        if any(not 0 <= c <= self.bound for c in self.carries):
            raise ValueError("carry out of range")


def q_expand(N: int, q: int, L: int) -> QExpansion:
    if N < 0 or q < 2:
        raise ValueError("q_expand needs N >= 0 and q >= 2")
    if q**L <= N:
        raise ValueError(f"{N} does not fit in {L} base-{q} digits")
    digits = []
    for _ in range(L):
        N, r = divmod(N, q)
        digits.append(r)
    return QExpansion(q, tuple(digits))


def check_carry_conditions(
    edge_digit_sums: Sequence[int],
    t_digits: Sequence[int],
    carries: Sequence[int],
    q: int,
    k: int,
    d: int,
) -> tuple[bool, bool]:
    """Test the per-digit linear system and the sum-of-squares form.

    ``carries`` holds c_0..c_L for L digit positions. Both forms additionally
    need c_0 = 0, c_L = 0 (the carry out of the top digit, which for an
    infinite bounded sequence must vanish) and every c in [0, 2B].
    """
    L = len(t_digits)
    if len(edge_digit_sums) != L or len(carries) != L + 1:
        raise ValueError("ragged digit/carry sequences")
    B = binom_le(k, d)
    shape = carries[0] == 0 and carries[L] == 0 and all(0 <= c <= 2 * B for c in carries)
    resid = [carries[i] - t_digits[i] - q * carries[i + 1] + edge_digit_sums[i] for i in range(L)]
    lin_ok = shape and all(r == 0 for r in resid)
    quad_ok = shape and sum(r * r for r in resid) == 0
    return lin_ok, quad_ok


def inductive_carries(edge_digit_sums: Sequence[int], t_digits: Sequence[int], q: int) -> list[int] | None:
    """Carries forced by the linear system from c_0 = 0, or None if non-integral."""
    c = [0]
    for b, t in zip(edge_digit_sums, t_digits):
        num = c[-1] + b - t
        if num % q:
            return None
        c.append(num // q)
    return c


def digit_count(q: int, p: int, B: int) -> int:
    """L = p + ceil(log_q(2B+1)) + 1 digit positions."""
    s = 0
    while q**s < 2 * B + 1:
        s += 1
    return p + s + 1


def enumerate_carries(
    t_digits: Sequence[int], q: int, B: int, prune: bool = True
) -> Iterator[tuple[int, ...]]:
    """Carry vectors c_0..c_L with c_0 = c_L = 0 and entries in [0, 2B].

    With ``prune`` only vectors admitting some digit sums b_l in [0, B(q-1)]
    are produced, which is exactly the set that can satisfy the linear system
    for some clique.
    """
    L = len(t_digits)
    top = 2 * B
    if not prune:
        for mid in itertools.product(range(top + 1), repeat=max(L - 1, 0)):
            yield (0, *mid, 0) if L >= 1 else (0,)
        return
    bmax = B * (q - 1)

    def step_range(c: int, t: int) -> range:
        lo = max(0, -((t - c) // q))  # ceil((c - t) / q)
        hi = min(top, (c - t + bmax) // q)
        return range(lo, hi + 1)

    alive: list[set[int]] = [set() for _ in range(L + 1)]
    alive[L] = {0}
    for pos in range(L - 1, -1, -1):
        alive[pos] = {c for c in range(top + 1) if any(x in alive[pos + 1] for x in step_range(c, t_digits[pos]))}
    if 0 not in alive[0]:
        return

    def rec(pos: int, acc: list[int]) -> Iterator[tuple[int, ...]]:
        if pos == L:
            yield tuple(acc)
            return
        for x in step_range(acc[-1], t_digits[pos]):
            if x in alive[pos + 1]:
                acc.append(x)
                yield from rec(pos + 1, acc)
                acc.pop()

    yield from rec(0, [0])


# ---------------------------------------------------------------------------
# the square trick


def _smallest_base(M: int, p: int) -> int:
    """Smallest q >= 2 with q**p > M."""
    lo, hi = 2, max(2, M + 1)
    while lo < hi:
        mid = (lo + hi) // 2
        if mid**p > M:
            hi = mid
        else:
            lo = mid + 1
    return lo


def _union_pairs(size: int, d: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    subs = [c for s in range(min(size, d) + 1) for c in itertools.combinations(range(size), s)]
    full = set(range(size))
    return [(a, b) for a in subs for b in subs if set(a) | set(b) == full]


@dataclass
class SquareTrickPlan:
    """Everything about one square-trick reduction that is independent of the carries."""

    base: WeightedCliqueInstance
    q: int
    p: int
    L: int
    B: int
    t_digits: tuple[int, ...]
    universe: list[Edge]
    linear: dict[Edge, tuple[int, ...]]
    quadratic: dict[Edge, int]

    def query(self, carries: Sequence[int]) -> WeightedCliqueInstance:
        a = [carries[i] - self.t_digits[i] - self.q * carries[i + 1] for i in range(self.L)]
        edges = {}
        for f in self.universe:
            w = self.quadratic[f]
            lin = self.linear.get(f)
            if lin is not None:
                w += 2 * sum(x * y for x, y in zip(lin, a))
            edges[f] = w
        t = -sum(x * x for x in a)
        b = self.base
        return WeightedCliqueInstance(n=b.n, d=2 * b.d, k=b.k, t=t, edges=edges, partition=b.partition)


def plan_square_trick(inst: WeightedCliqueInstance, p: int) -> SquareTrickPlan | TriviallyNo:
    if p < 1:
        raise ValueError("p must be at least 1")
    base = make_nonnegative(make_k_partite(inst))
    if isinstance(base, TriviallyNo):
        return base
    B = base.edges_per_clique
    q = _smallest_base(base.M, p)
    L = digit_count(q, p, B)
    t_digits = q_expand(base.t, q, L).digits
    linear = {e: q_expand(w, q, L).digits for e, w in base.edges.items()}
    universe = base.edge_universe(2 * base.d)
    d = base.d
    pair_cache: dict[int, list] = {}
    quadratic: dict[Edge, int] = {}
    for f in universe:
        pairs = pair_cache.setdefault(len(f), _union_pairs(len(f), d))
        total = 0
        for ia, ib in pairs:
            da = linear[tuple(f[i] for i in ia)]
            db = linear[tuple(f[i] for i in ib)]
            total += sum(x * y for x, y in zip(da, db))
        quadratic[f] = total
    return SquareTrickPlan(base, q, p, L, B, t_digits, universe, linear, quadratic)


def square_trick_reduce(
    inst: WeightedCliqueInstance, p: int, prune: bool = True
) -> QuerySet[WeightedCliqueInstance]:
    """Replace the weight constraint by a sum of squares over guessed carries.

    Each query is a k-partite 2d-hypergraph on the preprocessed vertex set;
    the input has a weight-t clique iff some query has a weight-t' clique.
    """
    qs: QuerySet[WeightedCliqueInstance] = QuerySet()
    st = qs.trace.stage("square-trick")
    plan = plan_square_trick(inst, p)
    if isinstance(plan, TriviallyNo):
        st.scalars["trivially_no"] = 1
        return qs
    for carries in enumerate_carries(plan.t_digits, plan.q, plan.B, prune=prune):
        qs.queries.append(plan.query(carries))
    limit = 64 * plan.B**4 * plan.q**2 * (plan.L + 1)
    st.query_count = len(qs.queries)
    st.max_weights = [q.M for q in qs.queries]
    st.sizes = [q.n for q in qs.queries]
    st.scalars.update(q=plan.q, p=p, L=plan.L, query_bound=(2 * plan.B + 1) ** plan.L, weight_bound=limit)
    check_bound(len(qs.queries) <= (2 * plan.B + 1) ** plan.L, "square-trick: too many queries")
    check_bound(all(q.M <= limit for q in qs.queries), "square-trick: query weight above bound")
    return qs


# ---------------------------------------------------------------------------
# weight stripping

STRIP_MODES = ("supported", "occurring", "full")


def _class_vectors(query: WeightedCliqueInstance, mode: str) -> Iterator[dict[tuple[int, ...], int]]:
    """Weight vectors a (one value per color class) summing to the query target."""
    by_class: dict[tuple[int, ...], list[Edge]] = {}
    for e in sorted(query.edges, key=edge_order):
        by_class.setdefault(query.color_type(e), []).append(e)
    top = min(query.d, query.k)
    classes = [c for s in range(top + 1) for c in itertools.combinations(range(query.k), s)]
    if any(c not in by_class for c in classes):
        return
    w = query.edges
    target = query.t

    if mode in ("occurring", "full"):
        if mode == "occurring":
            values = [sorted({w[e] for e in by_class[c]}) for c in classes]
        else:
            bound = query.M
            values = [range(-bound, bound + 1) for _ in classes]
        last = classes[-1]
        allowed_last = set(values[-1])
        for head in itertools.product(*values[:-1]):
            rest = target - sum(head)
            if rest in allowed_last:
                yield {**dict(zip(classes[:-1], head)), last: rest}
        return

    alive: set[Edge] = set()
    chosen: dict[tuple[int, ...], int] = {}

    def facets_alive(e: Edge) -> bool:
        return all(e[:i] + e[i + 1:] in alive for i in range(len(e)))

    def rec(i: int, acc: int) -> Iterator[dict[tuple[int, ...], int]]:
        c = classes[i]
        cand = [e for e in by_class[c] if facets_alive(e)]
        vals = sorted({w[e] for e in cand})
        if i == len(classes) - 1:
            need = target - acc
            vals = [need] if need in vals else []
        for v in vals:
            keep = [e for e in cand if w[e] == v]
            alive.update(keep)
            chosen[c] = v
            if i == len(classes) - 1:
                yield dict(chosen)
            else:
                yield from rec(i + 1, acc + v)
            del chosen[c]
            alive.difference_update(keep)

    yield from rec(0, 0)


def strip_weights(
    inst: WeightedCliqueInstance,
    p: int | None = None,
    mode: str = "supported",
    weight_exponent: int | None = None,
    prune: bool = True,
) -> QuerySet[WeightedCliqueInstance]:
    """Square trick followed by guessing each color class's weight contribution.

    Emits unweighted k-partite 2d-hypergraph queries (all weights 0, target 0)
    keeping an edge of class C iff its weight equals the guessed a_C.

    ``mode`` picks the candidate values per class: ``"full"`` is the whole
    range [-M', M'], ``"occurring"`` only values that occur on the class, and
    ``"supported"`` additionally requires the edge's sub-edges to survive.
    """
    if mode not in STRIP_MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if weight_exponent is not None:
        cap = max(inst.n, 2) ** weight_exponent
        if inst.M > cap:
            raise ValueError(f"weights exceed n^{weight_exponent}")
    if p is None:
        p = default_p(inst.n)
    st_qs = square_trick_reduce(inst, p, prune=prune)
    qs: QuerySet[WeightedCliqueInstance] = QuerySet(trace=st_qs.trace)
    st = qs.trace.stage("strip-weights")
    for query in st_qs.queries:
        for a in _class_vectors(query, mode):
            edges = {e: 0 for e, w in query.edges.items() if w == a[query.color_type(e)]}
            qs.queries.append(query.replace(edges=edges, t=0))
    st.query_count = len(qs.queries)
    st.sizes = [len(q.edges) for q in qs.queries]
    st.scalars["mode"] = mode
    return qs


def default_p(n: int) -> int:
    return max(1, math.ceil(math.sqrt(math.log2(max(n, 2)))))


# ---------------------------------------------------------------------------
# minimisation via exact-weight queries


def min_to_exact(
    inst: WeightedCliqueInstance,
    exact_oracle: Callable[[WeightedCliqueInstance], CliqueSolution | None] = solve_exact_weight_clique,
) -> tuple[CliqueSolution, int] | None:
    """Minimum clique weight using only exact-weight queries.

    Adds a slack part s_0..s_W (s_j has singleton weight j) so that an exact
    query at target T answers "is there a clique of weight at most T", then
    binary-searches T.
    """
    B = inst.edges_per_clique
    shift = max(0, -min(inst.edges.values(), default=0))
    shifted = inst.replace(edges={e: w + shift for e, w in inst.edges.items()}, t=0)
    part = make_k_partite(shifted)
    if part.d < 1:
        raise ValueError("min_to_exact needs d >= 1")
    n0, k = part.n, part.k
    W = part.edges_per_clique * max(part.edges.values(), default=0)
    edges = dict(part.edges)
    for j in range(W + 1):
        s = n0 + j
        for e in part.edges:
            if len(e) < part.d:
                edges[e + (s,)] = j if not e else 0
    partition = part.partition + (k,) * (W + 1)
    slack = WeightedCliqueInstance(n=n0 + W + 1, d=part.d, k=k + 1, t=0, edges=edges, partition=partition)

    decisions: dict[int, CliqueSolution | None] = {}

    def decide(T: int) -> CliqueSolution | None:
        if T not in decisions:
            decisions[T] = exact_oracle(slack.replace(t=T))
        return decisions[T]

    if decide(W) is None:
        _check_monotone(decisions)
        return None
    lo, hi = 0, W
    while lo < hi:
        mid = (lo + hi) // 2
        if decide(mid) is not None:
            hi = mid
        else:
            lo = mid + 1
    _check_monotone(decisions)
    sol = decide(lo)
    assert sol is not None
    core = [v for v in sol.vertices if v < n0]
    if inst.partition is None:
        core = [v % inst.n for v in core]
    vertices = tuple(sorted(core))
    weight = sum(inst.edges[e] for e in _subsets(vertices, inst.d))
    min_weight = lo - shift * B
    check_bound(weight == min_weight, "min_to_exact: witness weight disagrees with search")
    return CliqueSolution(vertices, weight), min_weight


def _subsets(vertices: tuple[int, ...], d: int) -> Iterator[Edge]:
    for s in range(min(d, len(vertices)) + 1):
        yield from itertools.combinations(vertices, s)


def _check_monotone(decisions: dict[int, CliqueSolution | None]) -> None:
    yes = [T for T, s in decisions.items() if s is not None]
    no = [T for T, s in decisions.items() if s is None]
    if yes and no and min(yes) <= max(no):
        raise BoundViolation("min_to_exact: decision predicate is not monotone")
