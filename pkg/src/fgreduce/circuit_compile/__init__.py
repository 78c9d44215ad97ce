"""Formula and threshold-circuit satisfiability compiled to bounded-width CNF."""

from .builder import CircuitBuilder, fold_constants, threshold_gate
from .cnf import WidthCapExceeded, constraint_to_cnf, extract_subcircuit, table_to_cnf, truth_table
from .compile import (
    CompileBudgetError,
    CompileReport,
    beta_cap,
    choose_beta,
    formula_to_kcnf,
    plan_branching,
    replace_large_gates,
    restrict_circuit,
    tc_to_kcnf,
    tc_to_kcnf_branching,
)
from .decompose import Component, Decomposition, DecompositionError, decompose_tree, verify_decomposition
from .gadgets import build_adder, build_binth, ceil_log2
from .valiant import dag_depth, depth_exponent, longest_path_depths, valiant_reduce_depth

__all__ = [
    "CircuitBuilder",
    "CompileBudgetError",
    "CompileReport",
    "Component",
    "Decomposition",
    "DecompositionError",
    "WidthCapExceeded",
    "beta_cap",
    "build_adder",
    "build_binth",
    "ceil_log2",
    "choose_beta",
    "constraint_to_cnf",
    "dag_depth",
    "decompose_tree",
    "depth_exponent",
    "extract_subcircuit",
    "fold_constants",
    "formula_to_kcnf",
    "longest_path_depths",
    "plan_branching",
    "replace_large_gates",
    "restrict_circuit",
    "table_to_cnf",
    "tc_to_kcnf",
    "tc_to_kcnf_branching",
    "threshold_gate",
    "truth_table",
    "valiant_reduce_depth",
    "verify_decomposition",
]
