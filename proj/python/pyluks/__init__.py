"""Isomorphism of ternary graphs and phylogenetic networks."""

from ._core import (
    Graph,
    InputError,
    Network,
    ParseError,
    aut_e_generators,
    bench_csv,
    group_order,
    is_isomorphic,
    oracle_isomorphic,
    phylo_isomorphic,
    random_network,
    random_ternary_graph,
    relabel_graph,
)

__all__ = [
    "Graph",
    "InputError",
    "Network",
    "ParseError",
    "aut_e_generators",
    "bench_csv",
    "group_order",
    "is_isomorphic",
    "oracle_isomorphic",
    "phylo_isomorphic",
    "random_network",
    "random_ternary_graph",
    "relabel_graph",
]
