"""Heterogeneous multilayer network model, edge-list IO and the aggregate baseline graph.

Edge-list files are UTF-8 text with one edge per line given as two
whitespace-separated node ids. Lines starting with ``#`` and blank lines are
ignored. A line holding a single id declares an isolated node.

The config file is YAML (JSON is accepted too, being a YAML subset)::

    layers:
      - name: A
        edges_path: actors.txt
      - name: D
        edges_path: directors.txt
    interlayer:
      - left: A
        right: D
        edges_path: actor_director.txt

Relative paths are resolved against the config file's directory.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping

import numpy as np
import yaml

from .exceptions import FileError, ParseError, ValidationError

logger = logging.getLogger(__name__)


def _canonical(u, v):
    return (u, v) if u <= v else (v, u)


class _GraphMixin:
    """Adjacency helpers shared by layer graphs and the aggregate graph."""

    @cached_property
    def adjacency(self) -> Mapping[str, frozenset]:
        adj = {n: set() for n in self.nodes}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return MappingProxyType({n: frozenset(s) for n, s in adj.items()})

    def degree(self, node) -> int:
        return len(self.adjacency[node])

    def number_of_nodes(self) -> int:
        return len(self.nodes)

    def number_of_edges(self) -> int:
        return len(self.edges)

    def sorted_nodes(self) -> list:
        return sorted(self.nodes)


@dataclass(frozen=True, eq=True)
class LayerGraph(_GraphMixin):
    """A simple undirected graph for one layer.

    Edges are stored as ``(u, v)`` tuples with ``u < v``.
    """

    name: str
    nodes: frozenset
    edges: frozenset

    @classmethod
    def from_edges(cls, name, edges: Iterable, nodes: Iterable = ()) -> "LayerGraph":
        graph, _ = _build_layer(name, edges, nodes)
        return graph


def _build_layer(name, edges, nodes=()):
    node_set = set(nodes)
    edge_set = set()
    dropped = 0
    for u, v in edges:
        node_set.add(u)
        node_set.add(v)
        if u == v:
            dropped += 1
            continue
        e = _canonical(u, v)
        if e in edge_set:
            dropped += 1
            continue
        edge_set.add(e)
    return LayerGraph(name, frozenset(node_set), frozenset(edge_set)), dropped


@dataclass(frozen=True)
class InterLayerEdges:
    """Bipartite links between layer ``layer_pair[0]`` and ``layer_pair[1]``."""

    layer_pair: tuple
    links: frozenset

    def oriented(self, left: str, right: str) -> frozenset:
        """Links as ``(left-node, right-node)`` pairs."""
        if (left, right) == tuple(self.layer_pair):
            return self.links
        if (right, left) == tuple(self.layer_pair):
            return frozenset((b, a) for a, b in self.links)
        raise KeyError((left, right))


@dataclass(frozen=True)
class AggregateGraph(_GraphMixin):
    """Untyped union of every layer and inter-layer edge set."""

    nodes: frozenset
    edges: frozenset


@dataclass(frozen=True)
class MultilayerNetwork:
    layers: Mapping[str, LayerGraph]
    inter_layer: Mapping[frozenset, InterLayerEdges] = field(default_factory=dict)
    load_stats: Mapping[str, int] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "layers", MappingProxyType(dict(self.layers)))
        object.__setattr__(self, "inter_layer", MappingProxyType(dict(self.inter_layer)))
        object.__setattr__(self, "load_stats", MappingProxyType(dict(self.load_stats)))

    @classmethod
    def from_parts(cls, layers: Iterable[LayerGraph], inter: Iterable[InterLayerEdges] = ()):
        inter_map = {}
        for x in inter:
            key = frozenset(x.layer_pair)
            if key in inter_map:
                prev = inter_map[key]
                merged = prev.links | x.oriented(*prev.layer_pair)
                x = InterLayerEdges(prev.layer_pair, merged)
            inter_map[key] = x
        return cls({g.name: g for g in layers}, inter_map)

    @property
    def layer_names(self) -> list:
        return list(self.layers)

    def has_inter(self, left: str, right: str) -> bool:
        return frozenset((left, right)) in self.inter_layer and left != right

    def links(self, left: str, right: str) -> frozenset:
        """Inter-layer links oriented as ``(node in left, node in right)``."""
        return self._oriented_cache(left, right)

    def _oriented_cache(self, left, right):
        cache = self.__dict__.setdefault("_links_cache", {})
        key = (left, right)
        if key not in cache:
            try:
                entry = self.inter_layer[frozenset(key)]
            except KeyError:
                cache[key] = frozenset()
            else:
                cache[key] = entry.oriented(left, right)
        return cache[key]

    def node_index(self, layer: str) -> dict:
        """Stable ``node -> int`` index for one layer (ascending node id)."""
        cache = self.__dict__.setdefault("_node_index", {})
        if layer not in cache:
            cache[layer] = {n: i for i, n in enumerate(sorted(self.layers[layer].nodes))}
        return cache[layer]

    def link_arrays(self, left: str, right: str):
        """``(links, left_idx, right_idx)``: oriented links as a list plus endpoint index arrays."""
        cache = self.__dict__.setdefault("_link_arrays", {})
        key = (left, right)
        if key not in cache:
            links = sorted(self.links(left, right))
            li, ri = self.node_index(left), self.node_index(right)
            cache[key] = (links,
                          np.fromiter((li[a] for a, _ in links), dtype=np.int64, count=len(links)),
                          np.fromiter((ri[b] for _, b in links), dtype=np.int64, count=len(links)))
        return cache[key]

    def layer_of(self, node) -> str | None:
        index = self.__dict__.get("_node_layer")
        if index is None:
            index = {}
            for name, g in self.layers.items():
                for n in g.nodes:
                    index.setdefault(n, name)
            self.__dict__["_node_layer"] = index
        return index.get(node)


def validate_mln(mln: MultilayerNetwork) -> list[str]:
    """Return one message per invariant violation; empty when the network is valid."""
    report = []
    owner = {}
    for name in sorted(mln.layers):
        g = mln.layers[name]
        if g.name != name:
            report.append(f"layer {name!r}: graph is named {g.name!r}")
        for u, v in sorted(g.edges):
            if u == v:
                report.append(f"layer {name!r}: self-loop on {u!r}")
            if u not in g.nodes or v not in g.nodes:
                report.append(f"layer {name!r}: edge ({u!r}, {v!r}) has an endpoint outside the node set")
        for n in sorted(g.nodes):
            if n in owner:
                report.append(f"node {n!r} appears in layers {owner[n]!r} and {name!r}")
            else:
                owner[n] = name
    for key in sorted(mln.inter_layer, key=sorted):
        x = mln.inter_layer[key]
        left, right = x.layer_pair
        if frozenset((left, right)) != key:
            report.append(f"inter-layer entry {sorted(key)} is labelled ({left!r}, {right!r})")
        missing = [n for n in (left, right) if n not in mln.layers]
        if missing:
            report.append(f"inter-layer ({left!r}, {right!r}) references undeclared layer(s) {missing}")
            continue
        if left == right:
            report.append(f"inter-layer ({left!r}, {right!r}) connects a layer to itself")
            continue
        lnodes, rnodes = mln.layers[left].nodes, mln.layers[right].nodes
        for a, b in sorted(x.links):
            if a not in lnodes:
                report.append(f"inter-layer ({left!r}, {right!r}) link ({a!r}, {b!r}): {a!r} not in layer {left!r}")
            if b not in rnodes:
                report.append(f"inter-layer ({left!r}, {right!r}) link ({a!r}, {b!r}): {b!r} not in layer {right!r}")
    return report


def collapse_type_independent(mln: MultilayerNetwork) -> AggregateGraph:
    nodes = set()
    edges = set()
    for g in mln.layers.values():
        nodes |= g.nodes
        edges |= g.edges
    for x in mln.inter_layer.values():
        for a, b in x.links:
            edges.add(_canonical(a, b))
    return AggregateGraph(frozenset(nodes), frozenset(edges))


# -- file IO -----------------------------------------------------------------

def read_edge_file(path) -> tuple[list, list]:
    """Parse an edge-list file into ``(edges, isolated_nodes)``."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise FileError(f"cannot read {path}: {exc}") from exc
    edges, isolated = [], []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split()
        if len(parts) == 2:
            edges.append((parts[0], parts[1]))
        elif len(parts) == 1:
            isolated.append(parts[0])
        else:
            raise ParseError(path, lineno, line)
    return edges, isolated


def write_edge_file(path, edges: Iterable, isolated: Iterable = (), header: str | None = None):
    lines = [f"# {header}"] if header else []
    lines += [f"{u}\t{v}" for u, v in sorted(edges)]
    lines += list(sorted(isolated))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


@dataclass
class LayerSpec:
    name: str
    edges_path: str


@dataclass
class InterLayerSpec:
    left: str
    right: str
    edges_path: str


@dataclass
class MLNConfig:
    layers: list = field(default_factory=list)
    interlayer: list = field(default_factory=list)
    base_dir: Path = field(default_factory=Path.cwd, compare=False)

    @classmethod
    def from_dict(cls, data, base_dir=None) -> "MLNConfig":
        if not isinstance(data, dict):
            raise ValidationError("config must be a mapping with 'layers' and 'interlayer'")
        try:
            layers = []
            for item in data.get("layers") or []:
                if item.get("directed"):
                    raise ValidationError(f"layer {item.get('name')!r}: directed layers are not supported")
                layers.append(LayerSpec(str(item["name"]), str(item["edges_path"])))
            inter = [InterLayerSpec(str(i["left"]), str(i["right"]), str(i["edges_path"]))
                     for i in data.get("interlayer") or []]
        except (KeyError, TypeError, AttributeError) as exc:
            raise ValidationError(f"malformed config entry: {exc}") from exc
        return cls(layers, inter, Path(base_dir) if base_dir else Path.cwd())

    @classmethod
    def from_file(cls, path) -> "MLNConfig":
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise FileError(f"cannot read config {path}: {exc}") from exc
        try:
            data = yaml.safe_load(text)
        except yaml.YAMLError as exc:
            mark = getattr(exc, "problem_mark", None)
            lineno = mark.line + 1 if mark else 0
            raise ParseError(path, lineno, "", reason=f"invalid YAML ({exc})") from exc
        return cls.from_dict(data or {}, base_dir=path.parent)

    def to_dict(self) -> dict:
        return {
            "layers": [{"name": s.name, "edges_path": s.edges_path} for s in self.layers],
            "interlayer": [{"left": s.left, "right": s.right, "edges_path": s.edges_path}
                           for s in self.interlayer],
        }

    def dump(self, path):
        Path(path).write_text(yaml.safe_dump(self.to_dict(), sort_keys=False), encoding="utf-8")

    def resolve(self, p) -> Path:
        p = Path(p)
        return p if p.is_absolute() else self.base_dir / p


def load_mln(config) -> MultilayerNetwork:
    """Load and validate a network from an :class:`MLNConfig`, a dict, or a config path.

    Self-loops and duplicate edges are dropped; counts land in ``load_stats``.
    """
    if isinstance(config, (str, Path)):
        config = MLNConfig.from_file(config)
    elif isinstance(config, dict):
        config = MLNConfig.from_dict(config)
    if not config.layers:
        raise ValidationError("config declares no layers")

    stats = {"dropped_self_loops_or_duplicates": 0, "dropped_duplicate_links": 0}
    layers = []
    seen = set()
    for spec in config.layers:
        if spec.name in seen:
            raise ValidationError(f"layer {spec.name!r} declared twice")
        seen.add(spec.name)
        edges, isolated = read_edge_file(config.resolve(spec.edges_path))
        graph, dropped = _build_layer(spec.name, edges, isolated)
        stats["dropped_self_loops_or_duplicates"] += dropped
        layers.append(graph)

    inter = []
    for spec in config.interlayer:
        for name in (spec.left, spec.right):
            if name not in seen:
                raise ValidationError(f"inter-layer file {spec.edges_path!r} references undeclared layer {name!r}")
        if spec.left == spec.right:
            raise ValidationError(f"inter-layer file {spec.edges_path!r} connects layer {spec.left!r} to itself")
        pairs, isolated = read_edge_file(config.resolve(spec.edges_path))
        if isolated:
            raise ParseError(spec.edges_path, 0, isolated[0], reason="inter-layer lines need two ids")
        links = set(pairs)
        stats["dropped_duplicate_links"] += len(pairs) - len(links)
        inter.append(InterLayerEdges((spec.left, spec.right), frozenset(links)))

    mln = MultilayerNetwork.from_parts(layers, inter)
    mln = MultilayerNetwork(mln.layers, mln.inter_layer, stats)
    report = validate_mln(mln)
    if report:
        raise ValidationError(report)
    dropped = sum(stats.values())
    if dropped:
        logger.warning("dropped %d self-loop/duplicate edges while loading", dropped)
    return mln


def dump_mln(mln: MultilayerNetwork, directory) -> MLNConfig:
    """Write a network as edge files plus ``config.yaml`` into ``directory``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    config = MLNConfig(base_dir=directory)
    for name, g in mln.layers.items():
        fname = f"layer_{name}.txt"
        touched = {n for e in g.edges for n in e}
        write_edge_file(directory / fname, g.edges, g.nodes - touched)
        config.layers.append(LayerSpec(name, fname))
    for x in mln.inter_layer.values():
        left, right = x.layer_pair
        fname = f"inter_{left}_{right}.txt"
        write_edge_file(directory / fname, x.links)
        config.interlayer.append(InterLayerSpec(left, right, fname))
    config.dump(directory / "config.yaml")
    return config
