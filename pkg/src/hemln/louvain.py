"""Per-layer community detection (Louvain) and Newman modularity."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_graph, check_random_seed
from .exceptions import FileError, MissingMembership, ParseError


@dataclass(frozen=True)
class CommunityAssignment:
    """A disjoint, complete partition of one layer's nodes.

    Community ids are positive integers, numbered 1..k by decreasing size.
    """

    layer_name: str
    membership: Mapping[str, int]
    community_index: Mapping[int, frozenset] = field(default=None)

    def __post_init__(self):
        membership = dict(self.membership)
        index = {}
        for node, cid in membership.items():
            index.setdefault(cid, set()).add(node)
        object.__setattr__(self, "membership", MappingProxyType(membership))
        object.__setattr__(self, "community_index",
                           MappingProxyType({c: frozenset(index[c]) for c in sorted(index)}))

    def members(self, cid: int) -> frozenset:
        return self.community_index[cid]

    def size(self, cid: int) -> int:
        return len(self.community_index[cid])

    @property
    def n_communities(self) -> int:
        return len(self.community_index)

    def non_singleton(self) -> list:
        return [c for c, m in self.community_index.items() if len(m) > 1]

    @classmethod
    def from_groups(cls, layer_name, groups) -> "CommunityAssignment":
        """Build from an iterable of node groups, renumbering canonically."""
        return cls(layer_name, _renumber([set(g) for g in groups]))

    def dump(self, path):
        lines = [f"{n}\t{c}" for n, c in sorted(self.membership.items())]
        Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")

    @classmethod
    def load(cls, path, layer_name) -> "CommunityAssignment":
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise FileError(f"cannot read {path}: {exc}") from exc
        membership = {}
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[1].strip().isdigit():
                raise ParseError(path, lineno, line, reason="expected 'node<TAB>community-id'")
            membership[parts[0]] = int(parts[1])
        return cls(layer_name, membership)


@dataclass(frozen=True)
class CommunityStats:
    community_id: int
    size: int
    internal_edges: int
    density: float


def _renumber(groups) -> dict:
    """Community ids 1..k by decreasing size; ties by smallest member id."""
    groups = [g for g in groups if g]
    groups.sort(key=lambda g: (-len(g), min(g)))
    return {n: i for i, g in enumerate(groups, start=1) for n in g}


def newman_modularity(graph, membership: Mapping) -> float:
    """Newman modularity ``sum_c e_c/m - (d_c/2m)^2`` of a partition of a simple graph."""
    for n in graph.nodes:
        if n not in membership:
            raise MissingMembership(n)
    m = len(graph.edges)
    if m == 0:
        return 0.0
    internal = {}
    degree = {}
    for u, v in graph.edges:
        cu, cv = membership[u], membership[v]
        if cu == cv:
            internal[cu] = internal.get(cu, 0) + 1
        degree[cu] = degree.get(cu, 0) + 1
        degree[cv] = degree.get(cv, 0) + 1
    q = 0.0
    for c, d in degree.items():
        q += internal.get(c, 0) / m - (d / (2.0 * m)) ** 2
    return q


def community_stats(graph, assignment: CommunityAssignment) -> list[CommunityStats]:
    internal = dict.fromkeys(assignment.community_index, 0)
    member = assignment.membership
    for u, v in graph.edges:
        cu = member.get(u)
        if cu is not None and cu == member.get(v):
            internal[cu] += 1
    out = []
    for cid, nodes in assignment.community_index.items():
        s = len(nodes)
        e = internal[cid]
        density = 2.0 * e / (s * (s - 1)) if s >= 2 else 0.0
        out.append(CommunityStats(cid, s, e, density))
    return out


# -- Louvain -------------------------------------------------------------------

def _one_level(adj, degree, m2, resolution, order):
    """Greedy local moving on a weighted graph; returns (labels, moved)."""
    n = len(adj)
    comm = list(range(n))
    tot = list(degree)
    moved_any = False
    improved = True
    while improved:
        improved = False
        for i in order:
            ci = comm[i]
            ki = degree[i]
            links = {}
            for j, w in adj[i].items():
                cj = comm[j]
                links[cj] = links.get(cj, 0.0) + w
            tot[ci] -= ki
            best = ci
            best_gain = links.get(ci, 0.0) - resolution * tot[ci] * ki / m2
            for c, w in links.items():
                gain = w - resolution * tot[c] * ki / m2
                if gain > best_gain + 1e-12:
                    best, best_gain = c, gain
            tot[best] += ki
            if best != ci:
                comm[i] = best
                improved = True
                moved_any = True
    return comm, moved_any


def _aggregate(adj, loops, comm):
    ids = {}
    for c in comm:
        if c not in ids:
            ids[c] = len(ids)
    k = len(ids)
    new_adj = [dict() for _ in range(k)]
    new_loops = [0.0] * k
    for i, nbrs in enumerate(adj):
        ci = ids[comm[i]]
        new_loops[ci] += loops[i]
        for j, w in nbrs.items():
            cj = ids[comm[j]]
            if ci == cj:
                if i < j:
                    new_loops[ci] += w
            else:
                new_adj[ci][cj] = new_adj[ci].get(cj, 0.0) + w
    return new_adj, new_loops, [ids[c] for c in comm]


def louvain(graph, seed=None, resolution: float = 1.0):
    """Run Louvain on a simple graph.

    Returns ``(membership, q_history)``: the final node -> community-id map
    (renumbered by decreasing size) and the modularity of the partition of
    the original graph after every aggregation pass.
    """
    nodes = sorted(graph.nodes)
    rng = np.random.default_rng(seed)
    if not nodes:
        return {}, []
    index = {n: i for i, n in enumerate(nodes)}
    adj = [dict() for _ in nodes]
    for u, v in graph.edges:
        a, b = index[u], index[v]
        adj[a][b] = 1.0
        adj[b][a] = 1.0
    loops = [0.0] * len(nodes)
    node_comm = list(range(len(nodes)))
    m = len(graph.edges)
    history = []
    if m == 0:
        return _renumber([{n} for n in nodes]), [0.0]
    m2 = 2.0 * m
    history.append(newman_modularity(graph, dict(zip(nodes, node_comm))))
    while True:
        degree = [sum(nb.values()) + 2.0 * lp for nb, lp in zip(adj, loops)]
        order = [int(i) for i in rng.permutation(len(adj))]
        comm, moved = _one_level(adj, degree, m2, resolution, order)
        if not moved:
            break
        adj, loops, relabel = _aggregate(adj, loops, comm)
        node_comm = [relabel[c] for c in node_comm]
        history.append(newman_modularity(graph, dict(zip(nodes, node_comm))))
    groups = {}
    for n, c in zip(nodes, node_comm):
        groups.setdefault(c, set()).add(n)
    return _renumber(groups.values()), history


def detect_layer_communities(graph, seed=None, resolution: float = 1.0) -> CommunityAssignment:
    membership, _ = louvain(graph, seed=seed, resolution=resolution)
    return CommunityAssignment(getattr(graph, "name", ""), membership)


class LouvainCommunities(ClusterMixin, BaseEstimator):
    """Louvain modularity maximisation for one layer graph.

    Parameters
    ----------
    seed : int, default=42
        Seed for the node visiting order.
    resolution : float, default=1.0
        Modularity resolution.

    Attributes
    ----------
    assignment_ : CommunityAssignment
    labels_ : ndarray of community ids aligned with ``nodes_``
    nodes_ : list of node ids in ascending order
    modularity_ : float
    q_history_ : list of float
        Modularity after each aggregation pass.
    """

    def __init__(self, seed=42, resolution=1.0):
        self.seed = seed
        self.resolution = resolution

    def fit(self, X, y=None):
        graph = check_graph(X)
        seed = check_random_seed(self.seed)
        membership, history = louvain(graph, seed=seed, resolution=self.resolution)
        self.assignment_ = CommunityAssignment(getattr(graph, "name", ""), membership)
        self.nodes_ = sorted(graph.nodes)
        self.labels_ = np.array([membership[n] for n in self.nodes_], dtype=int)
        self.q_history_ = history
        self.modularity_ = newman_modularity(graph, membership)
        return self

    def fit_predict(self, X, y=None):
        return self.fit(X).labels_

    def predict_stats(self, X):
        check_is_fitted(self, "assignment_")
        return community_stats(check_graph(X), self.assignment_)
