"""Planted-partition multilayer networks for tests and benchmarks.

Every layer is a planted-partition graph. For each layer pair, block ``b`` of
one layer is coupled to block ``b`` of the other with the given link density;
uniform noise links are added at 10% of the signal link count.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .exceptions import InvalidParams
from .mln import InterLayerEdges, LayerGraph, MultilayerNetwork

NOISE_FRACTION = 0.10


@dataclass
class PlantedTruth:
    blocks: dict = field(default_factory=dict)      # layer -> {node: block}
    couplings: dict = field(default_factory=dict)   # (layer_i, layer_j) -> {(block_i, block_j)}


def _node(layer, index):
    return f"{layer}n{index}"


def _planted_layer(rng, name, n_blocks, size, p_in, p_out):
    n = n_blocks * size
    edges = set()
    iu, ju = np.triu_indices(size, 1)
    for b in range(n_blocks):
        keep = rng.random(iu.size) < p_in
        off = b * size
        edges.update(zip((iu[keep] + off).tolist(), (ju[keep] + off).tolist()))
    n_out_pairs = n * (n - 1) // 2 - n_blocks * size * (size - 1) // 2
    target = int(rng.binomial(n_out_pairs, p_out)) if n_out_pairs else 0
    out = set()
    while len(out) < target:
        u, v = rng.integers(0, n, size=2).tolist()
        if u // size == v // size:
            continue
        out.add((min(u, v), max(u, v)))
    edges |= out
    nodes = [_node(name, i) for i in range(n)]
    graph = LayerGraph.from_edges(name, ((nodes[u], nodes[v]) for u, v in edges), nodes)
    return graph, {nodes[i]: i // size for i in range(n)}


def gen_planted_mln(layers=2, blocks_per_layer=3, block_size=10, p_in=0.4, p_out=0.02,
                    coupling_density=0.3, seed=0):
    """Return ``(mln, truth)``; layers are named ``L1``, ``L2``, ..."""
    if layers < 1 or blocks_per_layer < 1 or block_size < 1:
        raise InvalidParams("layers, blocks_per_layer and block_size must be positive")
    if not (0 <= p_out < p_in <= 1):
        raise InvalidParams(f"need 0 <= p_out < p_in <= 1, got p_out={p_out}, p_in={p_in}")
    if not (0 <= coupling_density <= 1):
        raise InvalidParams(f"coupling_density must lie in [0, 1], got {coupling_density}")
    rng = np.random.default_rng(seed)
    names = [f"L{i}" for i in range(1, layers + 1)]
    truth = PlantedTruth()
    graphs = []
    for name in names:
        g, blocks = _planted_layer(rng, name, blocks_per_layer, block_size, p_in, p_out)
        graphs.append(g)
        truth.blocks[name] = blocks

    n = blocks_per_layer * block_size
    inter = []
    for li, lj in combinations(names, 2):
        links = set()
        for b in range(blocks_per_layer):
            mask = rng.random((block_size, block_size)) < coupling_density
            rows, cols = np.nonzero(mask)
            off = b * block_size
            links.update(zip((rows + off).tolist(), (cols + off).tolist()))
        noise = round(NOISE_FRACTION * len(links))
        signal = len(links)
        while len(links) < signal + noise and len(links) < n * n:
            links.add(tuple(rng.integers(0, n, size=2).tolist()))
        inter.append(InterLayerEdges((li, lj), frozenset((_node(li, a), _node(lj, b)) for a, b in links)))
        if coupling_density > 0:
            truth.couplings[(li, lj)] = {(b, b) for b in range(blocks_per_layer)}
        else:
            truth.couplings[(li, lj)] = set()
    return MultilayerNetwork.from_parts(graphs, inter), truth


def majority_blocks(assignment, blocks: dict) -> dict:
    """Planted block holding the majority of each community's members."""
    out = {}
    for cid, members in assignment.community_index.items():
        counts = Counter(blocks[n] for n in members)
        out[cid] = min(counts, key=lambda b: (-counts[b], b))
    return out


def planted_recovery(result, truth: PlantedTruth) -> float:
    """Fraction of planted couplings, over the result's composition steps, found in a total tuple."""
    slots = {name: i for i, name in enumerate(result.layers)}
    majority = {name: majority_blocks(result.assignments[name], truth.blocks[name])
                for name in result.layers}
    total = [t for t in result.tuples if t.is_total]
    found = expected = 0
    for s in result.expression.steps:
        li, lj = s.left_layer, s.right_layer
        planted = truth.couplings.get((li, lj))
        if planted is None:
            planted = {(b, a) for a, b in truth.couplings.get((lj, li), set())}
        seen = {(majority[li][t.community_ids[slots[li]]], majority[lj][t.community_ids[slots[lj]]])
                for t in total}
        expected += len(planted)
        found += len(planted & seen)
    return found / expected if expected else 1.0
