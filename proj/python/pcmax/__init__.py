"""PC-family causal structure learning (PC, CPC, PC-Stable, PC-Max)."""

from ._pcmax import (
    DegenerateDataError,
    Graph,
    InvalidInputError,
    d_separated,
    dag_to_cpdag,
    evaluate,
    graph_to_text,
    parse_graph_text,
    random_dag,
    search,
    search_oracle,
    simulate,
    topological_order,
)

__all__ = [
    "DegenerateDataError",
    "Graph",
    "InvalidInputError",
    "d_separated",
    "dag_to_cpdag",
    "evaluate",
    "graph_to_text",
    "parse_graph_text",
    "random_dag",
    "search",
    "search_oracle",
    "simulate",
    "topological_order",
]
