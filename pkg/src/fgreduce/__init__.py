"""Reductions between weighted hypergraph cliques, orthogonal vectors, Max-SAT,
and threshold-circuit satisfiability, with exhaustive oracles to check them."""

__version__ = "0.1.0"
