"""Command-line driver: ``fgreduce gen|reduce|solve|verify``."""

from __future__ import annotations

import argparse
import os
import random
import sys
import tempfile
from collections.abc import Sequence
from pathlib import Path

from . import oracles
from .circuit_compile import formula_to_kcnf, tc_to_kcnf, tc_to_kcnf_branching
from .clique_reductions import BoundViolation
from .circuit_compile.compile import CompileBudgetError
from .circuit_compile.cnf import WidthCapExceeded
from .generators import (
    random_clique_instance,
    random_cnf,
    random_formula,
    random_ov_instance,
    random_threshold_circuit,
)
from .instances import (
    FormatError,
    parse_circuit,
    parse_clique_instance,
    parse_dimacs,
    parse_ov,
    serialize_circuit,
    serialize_clique_instance,
    serialize_ov,
    write_dimacs,
)
from .ov_reductions import PipelineParams, pipeline_clique_to_2ov
from .sat_reductions import maxsat_to_minweight_clique
from .verify import SUITES, run_suite

EXIT_YES, EXIT_NO, EXIT_PARSE, EXIT_BUDGET = 0, 1, 2, 3
PIPELINES = ("clique-to-2ov", "tc-to-cnf", "tc-to-cnf-branching", "formula-to-cnf", "maxsat-to-clique")
PROBLEMS = ("clique", "min-clique", "ov", "cnf", "maxsat", "tc")


class CliError(Exception):
    def __init__(self, message: str, code: int = 2) -> None:
        super().__init__(message)
        self.code = code


def _positive(name: str, value: int | None, low: int = 1) -> int:
    if value is None or value < low:
        raise CliError(f"--{name} must be at least {low}")
    return value


# ---------------------------------------------------------------------------
# gen


def cmd_gen(args: argparse.Namespace) -> str:
    rng = random.Random(args.seed)
    if args.kind == "clique":
        n, d, k = _positive("n", args.n), _positive("d", args.d, 0), _positive("k", args.k)
        if d > k:
            raise CliError("--d may not exceed --k")
        if args.wmax is None or args.wmax < 0:
            raise CliError("--wmax must be non-negative")
        if args.planted and n < k:
            raise CliError("--planted needs n >= k")
        inst = random_clique_instance(
            rng, n, d, k, args.wmax, density=args.density, t=args.t,
            planted=args.planted, partitioned=args.partitioned,
        )
        return serialize_clique_instance(inst)
    if args.kind == "ov":
        k, D = _positive("k", args.k), _positive("dim", args.dim, 0)
        return serialize_ov(random_ov_instance(rng, k, D, _positive("n", args.n), args.density))
    if args.kind == "cnf":
        n, m = _positive("n", args.n), _positive("m", args.m, 0)
        return write_dimacs(random_cnf(rng, n, m, _positive("width", args.width), args.exact_width))
    n = _positive("n", args.n)
    if args.formula:
        return serialize_circuit(random_formula(rng, n, _positive("m", args.m)))
    circuit = random_threshold_circuit(rng, n, _positive("wires", args.wires), _positive("depth", args.depth))
    return serialize_circuit(circuit)


# ---------------------------------------------------------------------------
# reduce


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from exc


def _write_all(outdir: Path, files: dict[str, str]) -> None:
    """Write every file to a temporary name first and rename into place at the end."""
    outdir.mkdir(parents=True, exist_ok=True)
    staged = []
    try:
        for name, text in files.items():
            fd, tmp = tempfile.mkstemp(dir=outdir, prefix=f".{name}.")
            with os.fdopen(fd, "w") as fh:
                fh.write(text)
            staged.append((tmp, outdir / name))
    except BaseException:
        for tmp, _ in staged:
            os.unlink(tmp)
        raise
    for tmp, dest in staged:
        os.replace(tmp, dest)


def _trace_text(rows: list[tuple[str, str, str]]) -> str:
    return "".join("\t".join(r) + "\n" for r in rows)


def cmd_reduce(args: argparse.Namespace) -> dict[str, str]:
    text = _read(args.infile)
    files: dict[str, str] = {}
    rows: list[tuple[str, str, str]] = []
    if args.pipeline == "clique-to-2ov":
        inst = parse_clique_instance(text)
        out = pipeline_clique_to_2ov(inst, PipelineParams(p=args.p), random.Random(args.seed))
        for i, q in enumerate(out.queries):
            files[f"query_{i:05d}.ov"] = serialize_ov(q)
        rows = out.trace.rows()
    elif args.pipeline == "maxsat-to-clique":
        cnf = parse_dimacs(text)
        if args.k is None:
            raise CliError("maxsat-to-clique needs --k")
        inst, blocks = maxsat_to_minweight_clique(cnf, args.k, args.t or 0)
        files["query_00000.clique"] = serialize_clique_instance(inst)
        rows = [
            ("maxsat-to-clique", "queries", "1"),
            ("maxsat-to-clique", "vertices", str(inst.n)),
            ("maxsat-to-clique", "max_weight", str(inst.M)),
            ("maxsat-to-clique", "edges", str(len(inst.edges))),
        ]
    elif args.pipeline == "formula-to-cnf":
        cnf, rep, _ = formula_to_kcnf(parse_circuit(text), args.epsilon)
        files["query_00000.cnf"] = write_dimacs(cnf)
        rows = [("formula-to-cnf", "queries", "1"), *rep.rows("formula-to-cnf")]
    elif args.pipeline == "tc-to-cnf":
        cnf, rep = tc_to_kcnf(parse_circuit(text), args.epsilon, beta=args.beta)
        files["query_00000.cnf"] = write_dimacs(cnf)
        rows = [("tc-to-cnf", "queries", "1"), *rep.rows("tc-to-cnf")]
    else:
        count = 0
        worst: dict[str, int] = {}
        for bits, cnf, rep in tc_to_kcnf_branching(parse_circuit(text), args.epsilon, beta=args.beta):
            guess = "".join(map(str, bits))
            files[f"query_{count:05d}.cnf"] = write_dimacs(cnf, [f"guess {guess}"] if guess else [])
            count += 1
            for key in ("width", "num_vars", "a_size"):
                worst[key] = max(worst.get(key, 0), getattr(rep, key))
        rows = [("tc-to-cnf-branching", "queries", str(count))]
        rows += [("tc-to-cnf-branching", f"max_{k}", str(v)) for k, v in sorted(worst.items())]
    files["trace.tsv"] = _trace_text(rows)
    _write_all(Path(args.outdir), files)
    return files


# ---------------------------------------------------------------------------
# solve


def cmd_solve(args: argparse.Namespace) -> tuple[bool, str]:
    text = _read(args.file)
    budget = oracles.OracleBudget(max_candidates=args.budget) if args.budget else None
    if args.problem in ("clique", "min-clique"):
        inst = parse_clique_instance(text)
        if args.problem == "clique":
            sol = oracles.solve_exact_weight_clique(inst, budget)
            if sol is None:
                return False, "NO\n"
            return True, f"YES\nclique {' '.join(map(str, sol.vertices))}\nweight {sol.weight}\n"
        best = oracles.solve_min_weight_clique(inst, budget)
        if best is None:
            return False, "NO\n"
        sol, w = best
        return True, f"YES\nclique {' '.join(map(str, sol.vertices))}\nweight {w}\n"
    if args.problem == "ov":
        hit = oracles.solve_k_ov(parse_ov(text), budget)
        if hit is None:
            return False, "NO\n"
        return True, f"YES\nindices {' '.join(map(str, hit))}\n"
    if args.problem in ("cnf", "maxsat"):
        cnf = parse_dimacs(text)
        if args.problem == "cnf":
            sol = oracles.solve_cnf_sat(cnf, budget)
            if sol is None:
                return False, "NO\n"
            return True, f"YES\nassignment {''.join(map(str, sol))}\n"
        best, assignment = oracles.solve_max_sat(cnf, budget)
        return True, f"YES\nsatisfied {best}\nassignment {''.join(map(str, assignment))}\n"
    circuit = parse_circuit(text)
    sol = oracles.solve_circuit_sat(circuit, budget)
    if sol is None:
        return False, "NO\n"
    return True, f"YES\ninputs {''.join(map(str, sol))}\n"


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fgreduce", description="Fine-grained reduction toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a seeded random instance on stdout")
    gen.add_argument("kind", choices=("clique", "ov", "cnf", "tc"))
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--n", type=int, help="vertices, vectors per family, variables or inputs")
    gen.add_argument("--d", type=int, default=2)
    gen.add_argument("--k", type=int, default=3)
    gen.add_argument("--wmax", type=int, default=50)
    gen.add_argument("--t", type=int, default=None)
    gen.add_argument("--planted", action="store_true")
    gen.add_argument("--partitioned", action="store_true")
    gen.add_argument("--density", type=float, default=None)
    gen.add_argument("--dim", type=int, default=8, help="OV dimension")
    gen.add_argument("--m", type=int, help="clauses (cnf) or gates (tc --formula)")
    gen.add_argument("--width", type=int, default=2)
    gen.add_argument("--exact-width", action="store_true")
    gen.add_argument("--wires", type=int)
    gen.add_argument("--depth", type=int, default=3)
    gen.add_argument("--formula", action="store_true", help="fan-in-2 NEG/AND/OR formula")

    red = sub.add_parser("reduce", help="run a reduction pipeline and write its queries")
    red.add_argument("pipeline", choices=PIPELINES)
    red.add_argument("infile")
    red.add_argument("outdir")
    red.add_argument("--seed", type=int, default=0)
    red.add_argument("--beta", type=int, default=None)
    red.add_argument("--epsilon", type=float, default=1.0)
    red.add_argument("--k", type=int, default=None)
    red.add_argument("--t", type=int, default=None)
    red.add_argument("--p", type=int, default=None, help="digits per weight in the square trick")

    sol = sub.add_parser("solve", help="answer an instance with the exhaustive oracle")
    sol.add_argument("problem", choices=PROBLEMS)
    sol.add_argument("file")
    sol.add_argument("--budget", type=int, default=None, help="maximum candidates examined")

    ver = sub.add_parser("verify", help="run a seeded property suite")
    ver.add_argument("suite", help=f"one of {', '.join([*SUITES, 'all'])}")
    ver.add_argument("--trials", type=int, default=50)
    ver.add_argument("--seed", type=int, required=True)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "gen":
            if args.density is None:
                args.density = 0.5 if args.kind == "ov" else 1.0
            sys.stdout.write(cmd_gen(args))
            return 0
        if args.command == "reduce":
            files = cmd_reduce(args)
            print(f"wrote {len(files) - 1} queries to {args.outdir}")
            return 0
        if args.command == "solve":
            yes, text = cmd_solve(args)
            sys.stdout.write(text)
            return EXIT_YES if yes else EXIT_NO
        if args.suite != "all" and args.suite not in SUITES:
            raise CliError(f"unknown suite {args.suite!r}")
        ok = True
        for result in run_suite(args.suite, _positive("trials", args.trials), args.seed):
            sys.stdout.write(result.report())
            ok &= result.ok
        return 0 if ok else 1
    except oracles.BudgetExceeded as exc:
        print(f"error: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except FormatError as exc:
        print(f"error: parse: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (BoundViolation, CompileBudgetError, WidthCapExceeded) as exc:
        print(f"error: {args.command}: bound check failed: {exc}", file=sys.stderr)
        return 4
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except ValueError as exc:
        stage = getattr(args, "pipeline", args.command)
        print(f"error: {stage}: {exc}", file=sys.stderr)
        return 2
