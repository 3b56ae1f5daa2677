"""Input validation helpers shared by the estimators and the CLI."""
from __future__ import annotations

import numbers

METRICS = ("we", "wd", "wh")
ALGORITHMS = ("mwm", "mwpm", "mwrm", "mwmt")


def check_graph(graph):
    """Accept a LayerGraph/AggregateGraph or a networkx graph; return a simple-graph object."""
    from .mln import LayerGraph

    if hasattr(graph, "nodes") and hasattr(graph, "edges") and isinstance(graph.nodes, frozenset):
        return graph
    try:
        import networkx as nx
    except ImportError:  # pragma: no cover
        nx = None
    if nx is not None and isinstance(graph, nx.Graph):
        if graph.is_directed():
            raise ValueError("directed graphs are not supported")
        name = graph.graph.get("name", "")
        return LayerGraph.from_edges(name, ((str(u), str(v)) for u, v in graph.edges()),
                                     (str(n) for n in graph.nodes()))
    raise TypeError(f"expected a LayerGraph or networkx.Graph, got {type(graph).__name__}")


def check_mln(mln):
    from .mln import MultilayerNetwork

    if not isinstance(mln, MultilayerNetwork):
        raise TypeError(f"expected a MultilayerNetwork, got {type(mln).__name__}")
    return mln


def check_metric(metric) -> str:
    m = str(metric).lower().replace("ω_", "w").replace("w_", "w")
    if m not in METRICS:
        raise ValueError(f"metric must be one of {METRICS}, got {metric!r}")
    return m


def check_algorithm(algorithm) -> str:
    a = str(algorithm).lower()
    if a not in ALGORITHMS:
        raise ValueError(f"algorithm must be one of {ALGORITHMS}, got {algorithm!r}")
    return a


def check_random_seed(seed):
    if seed is None:
        return None
    if isinstance(seed, numbers.Integral) and not isinstance(seed, bool):
        return int(seed)
    raise TypeError(f"seed must be an int or None, got {seed!r}")
