"""Community bipartite graphs (CBGs) and the three meta-edge weight metrics.

A CBG has one meta node per non-singleton community of each of two layers
and one meta edge per community pair joined by at least one inter-layer
edge. Each meta edge keeps its expanded inter-layer edge set.

Weight metrics:

``we``
    inter-community edge count, divided by the largest count in the CBG.
``wd``
    density(left) * |x| / (|left| * |right|) * density(right).
``wh``
    hub fraction(left) * |x| / (|left| * |right|) * hub fraction(right), where
    a hub fraction is the share of a community's hubs with at least one
    inter-layer edge into the opposite community.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

import numpy as np

from ._validation import check_metric
from .exceptions import NoInterLayer, ParseError
from .louvain import CommunityAssignment, CommunityStats, community_stats


@dataclass(frozen=True)
class MetaNode:
    layer_name: str
    community_id: int
    members: frozenset


@dataclass(frozen=True)
class MetaEdge:
    left: int
    right: int
    expanded: frozenset
    weight: float
    count: int

    @property
    def key(self) -> tuple:
        return (self.left, self.right)


@dataclass(frozen=True)
class HubSet:
    community_id: int
    hubs: frozenset


@dataclass(frozen=True)
class CommunityBipartiteGraph:
    left_layer: str
    right_layer: str
    left: Mapping[int, MetaNode]
    right: Mapping[int, MetaNode]
    edges: tuple
    metric: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "left", MappingProxyType(dict(self.left)))
        object.__setattr__(self, "right", MappingProxyType(dict(self.right)))
        object.__setattr__(self, "edges", tuple(sorted(self.edges, key=lambda e: e.key)))

    def __len__(self):
        return len(self.edges)

    def match_weight(self, edge: MetaEdge):
        """Weight used by the pairing algorithms.

        Under ``we`` the raw integer count is used: it ranks identically to
        the normalised weight and keeps comparisons exact.
        """
        return edge.count if self.metric == "we" else edge.weight

    def edge(self, left: int, right: int) -> MetaEdge | None:
        index = self.__dict__.get("_edge_index")
        if index is None:
            index = {e.key: e for e in self.edges}
            self.__dict__["_edge_index"] = index
        return index.get((left, right))

    def swapped(self) -> "CommunityBipartiteGraph":
        edges = [MetaEdge(e.right, e.left, frozenset((b, a) for a, b in e.expanded), e.weight, e.count)
                 for e in self.edges]
        return CommunityBipartiteGraph(self.right_layer, self.left_layer, self.right, self.left,
                                       tuple(edges), self.metric)

    @classmethod
    def from_weights(cls, weights: Mapping, left_nodes=(), right_nodes=(),
                     left_layer="L", right_layer="R") -> "CommunityBipartiteGraph":
        """A CBG with explicit meta-edge weights and no expansion (testing/oracle use)."""
        lids = set(left_nodes) | {l for l, _ in weights}
        rids = set(right_nodes) | {r for _, r in weights}
        left = {c: MetaNode(left_layer, c, frozenset()) for c in lids}
        right = {c: MetaNode(right_layer, c, frozenset()) for c in rids}
        edges = tuple(MetaEdge(l, r, frozenset(), w, 0) for (l, r), w in weights.items())
        return cls(left_layer, right_layer, left, right, edges, None)


@dataclass(frozen=True)
class LayerSummary:
    """One-time per-layer data reused by every CBG built on that layer."""

    assignment: CommunityAssignment
    stats: Mapping[int, CommunityStats] = field(default_factory=dict)
    hubs: Mapping[int, HubSet] = field(default_factory=dict)


def detect_hubs(graph, assignment: CommunityAssignment, threshold: float = 1.0) -> dict:
    """Hubs per community by intra-community degree.

    A member is a hub when its intra-community degree is strictly greater
    than ``threshold`` times the community's mean intra-community degree.
    When all members have equal degree every member is a hub; when the
    threshold leaves no hub, the maximum-degree members are used.
    """
    member = assignment.membership
    intra = {n: 0 for n in member}
    for u, v in graph.edges:
        cu = member.get(u)
        if cu is not None and cu == member.get(v):
            intra[u] += 1
            intra[v] += 1
    out = {}
    for cid, nodes in assignment.community_index.items():
        degs = {n: intra[n] for n in nodes}
        values = set(degs.values())
        if len(values) <= 1:
            hubs = frozenset(nodes)
        else:
            mean = sum(degs.values()) / len(degs)
            hubs = frozenset(n for n, d in degs.items() if d > threshold * mean)
            if not hubs:
                top = max(values)
                hubs = frozenset(n for n, d in degs.items() if d == top)
        out[cid] = HubSet(cid, hubs)
    return out


def summarize_layer(graph, assignment, hub_threshold: float = 1.0) -> LayerSummary:
    stats = {s.community_id: s for s in community_stats(graph, assignment)}
    return LayerSummary(assignment, MappingProxyType(stats),
                        MappingProxyType(detect_hubs(graph, assignment, hub_threshold)))


def weight_edge_count(cbg: CommunityBipartiteGraph) -> CommunityBipartiteGraph:
    if not cbg.edges:
        return replace(cbg, metric="we")
    top = max(e.count for e in cbg.edges)
    edges = tuple(MetaEdge(e.left, e.right, e.expanded, e.count / top, e.count) for e in cbg.edges)
    return replace(cbg, edges=edges, metric="we")


def _edge_fraction(cbg, e):
    return e.count / (len(cbg.left[e.left].members) * len(cbg.right[e.right].members))


def weight_density_fraction(cbg: CommunityBipartiteGraph, stats_i: Mapping, stats_j: Mapping):
    edges = []
    for e in cbg.edges:
        w = stats_i[e.left].density * _edge_fraction(cbg, e) * stats_j[e.right].density
        if w > 0:
            edges.append(replace(e, weight=w))
    return replace(cbg, edges=tuple(edges), metric="wd")


def weight_hub_participation(cbg: CommunityBipartiteGraph, hubs_i: Mapping, hubs_j: Mapping):
    """Hub-participation weights; meta edges whose weight is 0 are dropped."""
    edges = []
    for e in cbg.edges:
        hi = hubs_i[e.left].hubs
        hj = hubs_j[e.right].hubs
        touching_i = {a for a, _ in e.expanded if a in hi}
        touching_j = {b for _, b in e.expanded if b in hj}
        w = (len(touching_i) / len(hi)) * _edge_fraction(cbg, e) * (len(touching_j) / len(hj))
        if w > 0:
            edges.append(replace(e, weight=w))
    return replace(cbg, edges=tuple(edges), metric="wh")


def _community_codes(mln, layer, assignment, keep) -> np.ndarray:
    """Community id per node index of ``layer``; 0 where the community is not kept."""
    index = mln.node_index(layer)
    codes = np.zeros(len(index), dtype=np.int64)
    for cid in keep:
        for n in assignment.members(cid):
            codes[index[n]] = cid
    return codes


def _group_links(mln, li, lj, assignment_i, assignment_j, left, right) -> tuple:
    """Bucket the inter-layer links of (li, lj) by community pair."""
    links, ia, ib = mln.link_arrays(li, lj)
    if not links or not left or not right:
        return ()
    ci = _community_codes(mln, li, assignment_i, left)[ia]
    cj = _community_codes(mln, lj, assignment_j, right)[ib]
    hit = np.nonzero((ci > 0) & (cj > 0))[0]
    if hit.size == 0:
        return ()
    ci, cj = ci[hit], cj[hit]
    order = np.lexsort((cj, ci))
    hit, ci, cj = hit[order], ci[order], cj[order]
    cuts = np.flatnonzero((np.diff(ci) != 0) | (np.diff(cj) != 0)) + 1
    starts = np.concatenate(([0], cuts)).tolist()
    ends = np.concatenate((cuts, [hit.size])).tolist()
    hit_list = hit.tolist()
    edges = []
    for s, e in zip(starts, ends):
        x = frozenset(map(links.__getitem__, hit_list[s:e]))
        edges.append(MetaEdge(int(ci[s]), int(cj[s]), x, float(e - s), e - s))
    return tuple(edges)


def build_cbg(mln, assignment_i, assignment_j, metric="we", *,
              left_communities=None, right_communities=None,
              summary_i: LayerSummary | None = None, summary_j: LayerSummary | None = None,
              hub_threshold: float = 1.0) -> CommunityBipartiteGraph:
    """Build and weight the CBG between two layers' communities.

    ``left_communities``/``right_communities`` restrict the meta nodes to a
    subset of community ids. Singleton communities never become meta nodes.
    """
    metric = check_metric(metric)
    li, lj = assignment_i.layer_name, assignment_j.layer_name
    if not mln.has_inter(li, lj):
        raise NoInterLayer(li, lj)

    def allowed(assignment, subset):
        ids = set(assignment.non_singleton())
        if subset is not None:
            ids &= set(subset)
        return {c: MetaNode(assignment.layer_name, c, assignment.members(c)) for c in ids}

    left = allowed(assignment_i, left_communities)
    right = allowed(assignment_j, right_communities)
    edges = _group_links(mln, li, lj, assignment_i, assignment_j, left, right)
    cbg = CommunityBipartiteGraph(li, lj, left, right, edges, None)

    if metric == "we":
        return weight_edge_count(cbg)
    graph_i, graph_j = mln.layers[li], mln.layers[lj]
    if summary_i is None:
        summary_i = summarize_layer(graph_i, assignment_i, hub_threshold)
    if summary_j is None:
        summary_j = summarize_layer(graph_j, assignment_j, hub_threshold)
    if metric == "wd":
        return weight_density_fraction(cbg, summary_i.stats, summary_j.stats)
    return weight_hub_participation(cbg, summary_i.hubs, summary_j.hubs)


def dump_cbg(cbg: CommunityBipartiteGraph, path):
    lines = ["#left-comm\tright-comm\tweight\tedge-count"]
    lines += [f"{e.left}\t{e.right}\t{e.weight!r}\t{e.count}" for e in cbg.edges]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_cbg(path) -> CommunityBipartiteGraph:
    """Read a CBG dump back as a weights-only CBG (for the brute-force oracle)."""
    weights = {}
    counts = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 4:
            raise ParseError(path, lineno, line, reason="expected 4 tab-separated fields")
        key = (int(parts[0]), int(parts[1]))
        weights[key] = float(parts[2])
        counts[key] = int(parts[3])
    cbg = CommunityBipartiteGraph.from_weights(weights)
    edges = tuple(replace(e, count=counts[e.key]) for e in cbg.edges)
    return replace(cbg, edges=edges)
