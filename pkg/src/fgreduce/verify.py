"""Seeded property suites: each reduction against the exhaustive oracles.

Every suite takes ``(trials, seed)`` and returns a :class:`SuiteResult`
whose text report depends only on those arguments (no timings, canonical
ordering), so reruns are byte-identical.
"""

from __future__ import annotations

import itertools
import math
import random
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from . import oracles
from .circuit_compile import (
    build_adder,
    build_binth,
    ceil_log2,
    depth_exponent,
    formula_to_kcnf,
    tc_to_kcnf,
    tc_to_kcnf_branching,
    valiant_reduce_depth,
    verify_decomposition,
)
from .circuit_compile.valiant import dag_depth
from .clique_reductions import (
    TriviallyNo,
    check_carry_conditions,
    make_complete,
    make_k_partite,
    make_nonnegative,
    make_target_zero,
    reduce_weights_mod_prime,
    square_trick_reduce,
    strip_weights,
)
from .generators import (
    random_clique_instance,
    random_cnf,
    random_dag,
    random_formula,
    random_threshold_circuit,
)
from .instances import WeightedCliqueInstance, binom_le
from .ov_reductions import PipelineParams, clique_to_kov, kov_to_2ov, pipeline_clique_to_2ov
from .sat_reductions import maxsat_to_minweight_clique


@dataclass
class Check:
    name: str
    passed: int = 0
    total: int = 0
    required: int | None = None  # defaults to total

    def record(self, ok: bool) -> None:
        self.total += 1
        self.passed += int(ok)

    @property
    def ok(self) -> bool:
        need = self.total if self.required is None else self.required
        return self.passed >= need


@dataclass
class Bound:
    name: str
    limit_text: str
    worst: float = 0.0
    violations: int = 0

    def record(self, value: float, ok: bool) -> None:
        self.worst = max(self.worst, value)
        self.violations += int(not ok)

    @property
    def ok(self) -> bool:
        return self.violations == 0


@dataclass
class SuiteResult:
    suite: str
    trials: int
    seed: int
    checks: dict[str, Check] = field(default_factory=dict)
    bounds: dict[str, Bound] = field(default_factory=dict)

    def check(self, name: str, required: int | None = None) -> Check:
        if name not in self.checks:
            self.checks[name] = Check(name, required=required)
        return self.checks[name]

    def bound(self, name: str, limit_text: str) -> Bound:
        if name not in self.bounds:
            self.bounds[name] = Bound(name, limit_text)
        return self.bounds[name]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks.values()) and all(b.ok for b in self.bounds.values())

    def report(self) -> str:
        lines = [f"suite {self.suite} trials {self.trials} seed {self.seed}"]
        for c in self.checks.values():
            need = c.total if c.required is None else c.required
            lines.append(f"  check {c.name}: {c.passed}/{c.total} (need {need}) {'PASS' if c.ok else 'FAIL'}")
        for b in self.bounds.values():
            lines.append(
                f"  bound {b.name}: worst {b.worst:.6g} vs {b.limit_text}, "
                f"{b.violations} violations {'PASS' if b.ok else 'FAIL'}"
            )
        lines.append(f"  result {'PASS' if self.ok else 'FAIL'}")
        return "\n".join(lines) + "\n"


def trial_rng(seed: int, suite: str, i: int) -> random.Random:
    return random.Random(f"{seed}:{suite}:{i}")


def _exact(inst: WeightedCliqueInstance) -> bool:
    return oracles.solve_exact_weight_clique(inst) is not None


def _any_exact(queries) -> bool:
    return any(_exact(q) for q in queries)


def _any_clique(queries) -> bool:
    return any(oracles.has_clique(q) for q in queries)


# ---------------------------------------------------------------------------


def suite_preprocessing(trials: int, seed: int) -> SuiteResult:
    res = SuiteResult("preprocessing", trials, seed)
    for i in range(trials):
        rng = trial_rng(seed, "preprocessing", i)
        n, d = rng.randint(3, 8), rng.randint(1, 2)
        inst = random_clique_instance(
            rng, n, d, 3, 100, density=rng.choice([0.6, 0.8, 1.0]), planted=rng.random() < 0.5,
        )
        truth = _exact(inst)
        B = binom_le(inst.k, inst.d)
        M = max(inst.M, 1)

        comp = make_complete(inst)
        res.check("make_complete answer").record(_exact(comp) == truth)
        res.bound("make_complete M'/M", "<= binom_le(k,d)").record(comp.M / M, comp.M <= B * M)

        part = make_k_partite(inst)
        res.check("make_k_partite answer").record(_exact(part) == truth)
        res.bound("make_k_partite M'-M", "== 0").record(part.M - inst.M, part.M == inst.M)

        zero = make_target_zero(part)
        res.check("make_target_zero answer").record(_exact(zero) == truth and zero.t == 0)
        res.bound("make_target_zero M'/M", "<= 2").record(zero.M / M, zero.M <= 2 * M)

        nn = make_nonnegative(inst)
        if isinstance(nn, TriviallyNo):
            res.check("make_nonnegative answer").record(not truth)
        else:
            ok = _exact(nn) == truth and min(nn.edges.values(), default=0) >= 0 and nn.t >= 0
            res.check("make_nonnegative answer").record(ok)
            res.bound("make_nonnegative M'/M", "<= 2*binom_le(k,d)^2").record(nn.M / M, nn.M <= 2 * B * B * M)
    return res


def _no_instance(rng: random.Random, n: int, d: int, k: int, wmax: int) -> WeightedCliqueInstance:
    while True:
        inst = random_clique_instance(rng, n, d, k, wmax, wmin=0, t=rng.randint(0, wmax * binom_le(k, d)))
        if not _exact(inst):
            return inst


def suite_prime_hash(trials: int, seed: int) -> SuiteResult:
    res = SuiteResult("prime-hash", trials, seed)
    yes = res.check("yes-instances answer yes")
    no = res.check("no-instances answer no", required=math.ceil(0.99 * trials))
    wmax = 1 << 128
    for i in range(trials):
        rng = trial_rng(seed, "prime-hash", i)
        n, d = rng.randint(5, 8), rng.randint(1, 2)
        inst = random_clique_instance(rng, n, d, 3, wmax, wmin=0, planted=True)
        qs = reduce_weights_mod_prime(inst, rng)
        yes.record(_any_exact(qs.queries))
        top = max(q.M for q in qs.queries)
        res.bound("query weight / n^k", "finite (reported)").record(top / n**3, True)

        bad = _no_instance(rng, n, d, 3, wmax)
        qs = reduce_weights_mod_prime(bad, rng)
        no.record(not _any_exact(qs.queries))
        res.check("hash path taken").record(
            all(st.scalars.get("mode") == "hash" for st in qs.trace.stages)
        )
    return res


def carry_equivalence(q: int, L: int, m: int) -> tuple[int, int]:
    """Exhaustive check that "digit sums b reach target t" matches the carry system.

    Any multiset of m weights below q^L is summarised by its digit sums
    b_l in [0, m(q-1)], and every such vector arises. For each b and every
    t < q^L, the sum identity must hold exactly when the forced carries are
    integral, within [0, 2m] and vanish at the top. Returns (cases, counterexamples).
    """
    top = m * (q - 1)
    grid = np.array(list(itertools.product(range(top + 1), repeat=L)), dtype=np.int64)
    value = grid @ (q ** np.arange(L, dtype=np.int64))
    bad = 0
    for t in range(q**L):
        tdig = [(t // q**i) % q for i in range(L)]
        c = np.zeros(len(grid), dtype=np.int64)
        ok = np.ones(len(grid), dtype=bool)
        for pos in range(L):
            num = c + grid[:, pos] - tdig[pos]
            ok &= num % q == 0
            c = num // q
            ok &= (c >= 0) & (c <= 2 * m)
        ok &= c == 0
        bad += int(np.count_nonzero(ok != (value == t)))
    return len(grid) * q**L, bad


def carry_quadratic_check(q: int, L: int, m: int) -> tuple[int, int]:
    """Explicit enumeration of every carry vector: linear form, quadratic form and
    the sum identity must agree. Returns (cases, counterexamples)."""
    top = m * (q - 1)
    cases = bad = 0
    for b in itertools.product(range(top + 1), repeat=L):
        value = sum(x * q**i for i, x in enumerate(b))
        for t in range(q**L):
            tdig = [(t // q**i) % q for i in range(L)]
            lin_any = quad_any = False
            for c in itertools.product(range(2 * m + 1), repeat=L - 1):
                carries = (0, *c, 0)
                lin, quad = check_carry_conditions(b, tdig, carries, q, m, 1)
                if lin != quad:
                    bad += 1
                lin_any |= lin
                quad_any |= quad
            cases += 1
            bad += int(lin_any != (value == t)) + int(quad_any != (value == t))
    return cases, bad


def carry_quadratic_dp(q: int, L: int, m: int) -> tuple[int, int]:
    """Minimum of the sum-of-squares form over every admissible carry vector,
    by dynamic programming along the digit positions; it must vanish exactly
    when the sum identity holds. Returns (cases, counterexamples)."""
    top = m * (q - 1)
    grid = np.array(list(itertools.product(range(top + 1), repeat=L)), dtype=np.int64)
    value = grid @ (q ** np.arange(L, dtype=np.int64))
    carries = np.arange(2 * m + 1, dtype=np.int64)
    bad = 0
    for t in range(q**L):
        tdig = [(t // q**i) % q for i in range(L)]
        # cost[:, c] = best partial sum with carry c entering the next position
        cost = np.full((len(grid), len(carries)), np.iinfo(np.int64).max // 4, dtype=np.int64)
        cost[:, 0] = 0
        for pos in range(L):
            resid = (carries[:, None] - tdig[pos] - q * carries[None, :])[None, :, :] + grid[:, pos][:, None, None]
            cost = (cost[:, :, None] + resid * resid).min(axis=1)
        bad += int(np.count_nonzero((cost[:, 0] == 0) != (value == t)))
    return len(grid) * q**L, bad


def suite_carries(trials: int, seed: int) -> SuiteResult:
    res = SuiteResult("carries", trials, seed)
    chk = res.check("digit-sum/carry equivalence cases without counterexample")
    for q in (2, 3, 4):
        for L in range(1, 6):
            for m in range(1, 5):
                cases, bad = carry_equivalence(q, L, m)
                chk.passed += cases - bad
                chk.total += cases
    dp = res.check("sum-of-squares minimum over all carries vanishes iff the sum matches")
    for q in (2, 3, 4):
        for L in range(1, 4):
            for m in range(1, 5):
                cases, bad = carry_quadratic_dp(q, L, m)
                dp.passed += cases - bad
                dp.total += cases
    quad = res.check("linear/quadratic agreement on explicit carries")
    for q in (2, 3):
        for L in (1, 2):
            for m in (1, 2):
                cases, bad = carry_quadratic_check(q, L, m)
                quad.passed += cases - bad
                quad.total += cases
    return res


def suite_square_trick(trials: int, seed: int) -> SuiteResult:
    res = SuiteResult("square-trick", trials, seed)
    for i in range(trials):
        rng = trial_rng(seed, "square-trick", i)
        n = rng.randint(3, 6)
        p = 1 + i % 3
        inst = random_clique_instance(rng, n, 2, 3, 100, density=rng.choice([0.7, 1.0]), planted=rng.random() < 0.5)
        truth = _exact(inst)
        sq = square_trick_reduce(inst, p)
        res.check("square-trick answer").record(_any_exact(sq.queries) == truth)
        st = sq.trace.stages[0]
        if "L" in st.scalars:
            limit = int(st.scalars["query_bound"])
            res.bound("queries / (2B+1)^L", "<= 1").record(len(sq.queries) / limit, len(sq.queries) <= limit)
            wb = int(st.scalars["weight_bound"])
            top = max((q.M for q in sq.queries), default=0)
            res.bound("query weight / 64B^4q^2(L+1)", "<= 1").record(top / wb, top <= wb)
    return res


def suite_strip_weights(trials: int, seed: int) -> SuiteResult:
    res = SuiteResult("strip-weights", trials, seed)
    for i in range(trials):
        rng = trial_rng(seed, "strip-weights", i)
        n = rng.randint(3, 6)
        p = 1 + i % 3
        inst = random_clique_instance(rng, n, 2, 3, 100, density=rng.choice([0.7, 1.0]), planted=rng.random() < 0.5)
        truth = _exact(inst)
        qs = strip_weights(inst, p)
        res.check("strip-weights answer").record(_any_clique(qs.queries) == truth)
        sq = qs.trace.stages[0]
        if "L" in sq.scalars:
            limit = int(sq.scalars["query_bound"])
            res.bound("carry guesses / (2B+1)^L", "<= 1").record(sq.query_count / limit, sq.query_count <= limit)
        res.check("queries unweighted and k-partite").record(
            all(q.partition is not None and q.t == 0 and not any(q.edges.values()) for q in qs.queries)
        )
    return res


def suite_ov(trials: int, seed: int) -> SuiteResult:
    res = SuiteResult("ov", trials, seed)
    for i in range(trials):
        rng = trial_rng(seed, "ov", i)
        k = rng.randint(2, 4)
        d = rng.randint(1, min(3, k))
        n = rng.randint(k, 8)
        inst = random_clique_instance(
            rng, n, d, k, 0, density=rng.choice([0.7, 0.85, 0.95]), t=0, partitioned=True
        )
        truth = oracles.has_clique(inst)
        kov = clique_to_kov(inst)
        two = kov_to_2ov(kov)
        a = oracles.solve_k_ov(kov) is not None
        b = oracles.solve_k_ov(two) is not None
        res.check("clique = k-OV = 2-OV").record(truth == a == b)
        h = k // 2
        left = math.prod(len(f) for f in kov.families[:h])
        right = math.prod(len(f) for f in kov.families[h:])
        res.check("2-OV family sizes are half products").record(
            len(two.families[0]) == left and len(two.families[1]) == right and two.D == kov.D
        )
        res.check("k-OV has n vectors").record(kov.N == inst.n)
    return res


def suite_pipeline(trials: int, seed: int) -> SuiteResult:
    res = SuiteResult("pipeline", trials, seed)
    yes = res.check("yes-instances answer yes")
    no = res.check("no-instances answer no", required=math.ceil(0.99 * trials))
    for i in range(trials):
        rng = trial_rng(seed, "pipeline", i)
        n = rng.randint(3, 5)
        inst = random_clique_instance(rng, n, 2, 3, 50, planted=True, density=rng.choice([0.8, 1.0]))
        out = pipeline_clique_to_2ov(inst, PipelineParams(), rng)
        yes.record(any(oracles.solve_k_ov(q) is not None for q in out.queries))
        while True:
            bad = random_clique_instance(rng, n, 2, 3, 50, density=rng.choice([0.8, 1.0]))
            if not _exact(bad):
                break
        out = pipeline_clique_to_2ov(bad, PipelineParams(), rng)
        no.record(not any(oracles.solve_k_ov(q) is not None for q in out.queries))
    return res


def suite_maxsat(trials: int, seed: int) -> SuiteResult:
    res = SuiteResult("maxsat", trials, seed)
    k = 4
    for i in range(trials):
        rng = trial_rng(seed, "maxsat", i)
        n, m = rng.randint(k, 8), rng.randint(1, 12)
        cnf = random_cnf(rng, n, m, 2)
        best, _ = oracles.solve_max_sat(cnf)
        inst, _ = maxsat_to_minweight_clique(cnf, k, best)
        found = oracles.solve_min_weight_clique(inst)
        res.check("-min weight = max-sat").record(found is not None and -found[1] == best)
        limit = k * 2 ** math.ceil(n / k)
        res.bound("vertices / k*2^ceil(n/k)", "<= 1").record(inst.n / limit, inst.n <= limit)
        wmax = max(abs(w) for w in inst.edges.values())
        res.bound("|weight| / 2m", "<= 1").record(wmax / (2 * m), wmax <= 2 * m)
    return res


def suite_formula(trials: int, seed: int) -> SuiteResult:
    res = SuiteResult("formula", trials, seed)
    eps = 1.0
    for i in range(trials):
        rng = trial_rng(seed, "formula", i)
        n = rng.randint(2, 12)
        m = rng.randint(1, 3 * n)
        f = random_formula(rng, n, m)
        cnf, rep, dec = formula_to_kcnf(f, eps)
        truth = oracles.solve_circuit_sat(f) is not None
        res.check("equisatisfiable").record((oracles.solve_cnf_sat(cnf) is not None) == truth)
        res.bound("width / k", "<= 1").record(cnf.width / rep.width_cap, cnf.width <= rep.width_cap)
        lim = (1 + eps) * n + 1
        res.bound("variables / ((1+eps)n+1)", "<= 1").record(cnf.num_vars / lim, cnf.num_vars <= lim)
        if dec is not None:
            try:
                verify_decomposition(dec, m)
                ok = True
            except AssertionError:
                ok = False
            res.check("decomposition invariants").record(ok)
            worst = max((c.size for c in dec.components), default=0)
            res.bound("component size / ell", "<= 1").record(worst / dec.ell, worst <= dec.ell)
            res.bound("|A| / (6m/ell)", "<= 1").record(len(dec.A) * dec.ell / (6 * m), len(dec.A) * dec.ell <= 6 * m)
    return res


def suite_gadgets(trials: int, seed: int) -> SuiteResult:
    """Exhaustive over the full input spaces; trials and seed do not matter."""
    res = SuiteResult("gadgets", trials, seed)
    for b in range(1, 4):
        for ell in range(1, 6):
            c = build_adder(b, ell)
            gates = sum(1 for g in c.gates.values() if g.kind != "INPUT")
            res.bound("adder gates / 40*b*ell", "<= 1").record(gates / (40 * b * ell), gates <= 40 * b * ell)
            ok = len(c.outputs) == b + ceil_log2(ell)
            for x in itertools.product((0, 1), repeat=b * ell):
                out = oracles.eval_outputs(c, x)
                want = sum(sum(x[i * b + j] << j for j in range(b)) for i in range(ell))
                ok &= sum(bit << j for j, bit in enumerate(out)) == want
            res.check("adder exhaustive").record(ok)
    for r in range(1, 7):
        for theta in range(0, 2**r + 1):
            c = build_binth(r, theta)
            gates = sum(1 for g in c.gates.values() if g.kind != "INPUT")
            res.bound("binth gates / 2r", "<= 1").record(gates / (2 * r), gates <= 2 * r)
            ok = True
            for x in itertools.product((0, 1), repeat=r):
                value = sum(bit << i for i, bit in enumerate(x))
                ok &= oracles.eval_outputs(c, x)[0] == int(value >= theta)
            res.check("binth exhaustive").record(ok)
    return res


def suite_tc(trials: int, seed: int) -> SuiteResult:
    res = SuiteResult("tc", trials, seed)
    beta = 3
    for i in range(trials):
        rng = trial_rng(seed, "tc", i)
        n = rng.randint(2, 10)
        circuit = random_threshold_circuit(rng, n, rng.randint(1, 3 * n), rng.randint(1, 3))
        cnf, rep = tc_to_kcnf(circuit, 1.0, beta=beta)
        truth = oracles.solve_circuit_sat(circuit) is not None
        res.check("equisatisfiable").record((oracles.solve_cnf_sat(cnf) is not None) == truth)
        limit = max(beta**circuit.depth, 3)
        res.bound("width / max(beta^d, 3)", "<= 1").record(cnf.width / limit, cnf.width <= limit)
        if rep.gadget_gates:
            res.check("gadget path exercised").record(True)
    return res


def suite_valiant(trials: int, seed: int) -> SuiteResult:
    res = SuiteResult("valiant", trials, seed)
    for i in range(trials):
        rng = trial_rng(seed, "valiant", i)
        nodes = rng.randint(10, 80)
        edges = random_dag(rng, nodes, rng.randint(nodes, 200), rng.randint(2, 16))
        D = dag_depth(range(nodes), edges)
        delta = depth_exponent(D)
        for r in (1, 2):
            if r > delta:
                continue
            R = valiant_reduce_depth(edges, r)
            m = len(edges)
            cap = math.ceil(r * m / delta)
            res.bound("|R| / ceil(rm/delta)", "<= 1").record(len(R) / cap if cap else 0, len(R) <= cap)
            rest = [e for j, e in enumerate(edges) if j not in set(R)]
            depth = dag_depth(range(nodes), rest)
            res.bound("residual depth / 2^(delta-r)", "<= 1").record(
                depth / 2 ** (delta - r), depth <= 2 ** (delta - r)
            )
    branch_trials = max(1, trials // 2)
    eps = 1.0
    for i in range(branch_trials):
        rng = trial_rng(seed, "branching", i)
        n = rng.randint(3, 8)
        wires = rng.randint(max(1, n // 2), n if i % 2 == 0 else 2 * n)
        circuit = random_threshold_circuit(rng, n, wires, rng.randint(2, 4))
        truth = oracles.solve_circuit_sat(circuit) is not None
        count = 0
        found = False
        for _, cnf, _ in tc_to_kcnf_branching(circuit, eps):
            count += 1
            found = found or oracles.solve_cnf_sat(cnf) is not None
        res.check("branching preserves satisfiability").record(found == truth)
        cap = 2 ** math.ceil(eps * n / 2)
        res.bound("branches / 2^ceil(eps*n/2)", "<= 1").record(count / cap, count <= cap)
        if count > 1:
            res.check("branching exercised").record(True)
    return res


SUITES: dict[str, Callable[[int, int], SuiteResult]] = {
    "preprocessing": suite_preprocessing,
    "prime-hash": suite_prime_hash,
    "carries": suite_carries,
    "square-trick": suite_square_trick,
    "strip-weights": suite_strip_weights,
    "ov": suite_ov,
    "maxsat": suite_maxsat,
    "formula": suite_formula,
    "gadgets": suite_gadgets,
    "tc": suite_tc,
    "valiant": suite_valiant,
    "pipeline": suite_pipeline,
}


def run_suite(name: str, trials: int, seed: int) -> list[SuiteResult]:
    if name == "all":
        return [fn(trials, seed) for fn in SUITES.values()]
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}")
    return [SUITES[name](trials, seed)]
