"""Modularity comparison of k-community results against the aggregate baseline."""
from __future__ import annotations

from .composer import KCommunityResult
from .louvain import louvain, newman_modularity
from .mln import collapse_type_independent


def baseline_modularity(mln, seed=42, resolution: float = 1.0):
    """Louvain on the type-independent aggregate graph; returns ``(membership, Q)``."""
    graph = collapse_type_independent(mln)
    membership, _ = louvain(graph, seed=seed, resolution=resolution)
    return membership, newman_modularity(graph, membership)


def project_tuples(mln, result: KCommunityResult) -> dict:
    """Partition of the aggregate graph induced by the result's tuples.

    Each tuple becomes one block holding every member of its communities.
    A node claimed by several tuples goes to the tuple with the most
    expanded inter-layer edges (earlier sort order wins ties). Nodes in no
    tuple become singleton blocks. Block labels are ``("t", i)`` for tuple
    ``i`` and ``("n", node)`` for singletons.
    """
    owner = {}
    ranked = sorted(enumerate(result.tuples), key=lambda it: (-it[1].edge_count(), it[0]))
    for i, t in ranked:
        for layer, cid in zip(result.layers, t.community_ids):
            if not cid:
                continue
            for node in result.assignments[layer].members(cid):
                owner.setdefault(node, ("t", i))
    graph = collapse_type_independent(mln)
    return {n: owner.get(n, ("n", n)) for n in graph.nodes}


def hemln_modularity(mln, result: KCommunityResult) -> float:
    graph = collapse_type_independent(mln)
    return newman_modularity(graph, project_tuples(mln, result))


def modularity_report(rows, baseline_q: float) -> str:
    """Aligned text table: algorithm, pairs, tuples, Q, baseline Q.

    ``rows`` are ``(algorithm, pairs, tuples, q)`` tuples.
    """
    header = ("algorithm", "pairs", "tuples", "Q", "baseline_Q")
    body = [(a.upper(), str(p), str(t), f"{q:.3f}", f"{baseline_q:.3f}") for a, p, t, q in rows]
    widths = [max(len(r[i]) for r in [header] + body) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in [header] + body]
    lines[0] = "#" + lines[0]
    return "\n".join(lines)
