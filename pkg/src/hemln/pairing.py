"""Weighted bipartite pairing of community bipartite graphs.

``mwm`` and ``mwpm`` are classical matchings (each meta node used at most
once). ``mwrm`` and ``mwmt`` start from the ``mwm`` result and relax
uniqueness: ``mwrm`` swaps light matched edges for heavier incident ones,
``mwmt`` adds incident edges whose weight ties the matched edge.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from numbers import Integral

import numpy as np

from ._validation import check_algorithm
from .exceptions import TooLarge
from .meta_graph import CommunityBipartiteGraph, MetaEdge

REL_TOL = 1e-9
ORACLE_MAX_NODES = 16


@dataclass(frozen=True)
class Pairing:
    algorithm: str
    selected: tuple
    total_weight: float
    match_total: float

    def __len__(self):
        return len(self.selected)

    @property
    def pairs(self) -> frozenset:
        return frozenset(e.key for e in self.selected)

    def is_matching(self) -> bool:
        lefts = [e.left for e in self.selected]
        rights = [e.right for e in self.selected]
        return len(set(lefts)) == len(lefts) and len(set(rights)) == len(rights)


def _make(algorithm, cbg, edges) -> Pairing:
    edges = tuple(sorted(edges, key=lambda e: e.key))
    return Pairing(algorithm, edges,
                   math.fsum(e.weight for e in edges),
                   sum(cbg.match_weight(e) for e in edges))


def _ties(a, b) -> bool:
    if isinstance(a, Integral) and isinstance(b, Integral):
        return a == b
    return math.isclose(a, b, rel_tol=REL_TOL, abs_tol=0.0)


def _heavier(a, b) -> bool:
    return a > b and not _ties(a, b)


def _hungarian(cost: np.ndarray) -> np.ndarray:
    """Minimum-cost assignment of every row of an ``n x m`` matrix (``n <= m``).

    Shortest augmenting paths with row/column potentials, one row at a time.
    Returns the assigned column per row.
    """
    n, m = cost.shape
    u = np.zeros(n + 1)
    v = np.zeros(m + 1)
    p = np.zeros(m + 1, dtype=np.int64)
    way = np.zeros(m + 1, dtype=np.int64)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = np.full(m + 1, np.inf)
        used = np.zeros(m + 1, dtype=bool)
        while True:
            used[j0] = True
            i0 = p[j0]
            free = ~used
            free[0] = False
            cur = cost[i0 - 1] - u[i0] - v[1:]
            better = free[1:] & (cur < minv[1:])
            minv[1:][better] = cur[better]
            way[1:][better] = j0
            masked = np.where(free, minv, np.inf)
            j1 = int(np.argmin(masked))
            delta = masked[j1]
            u[p[used]] += delta
            v[used] -= delta
            minv[free] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
    assign = np.empty(n, dtype=np.int64)
    for j in range(1, m + 1):
        if p[j]:
            assign[p[j] - 1] = j - 1
    return assign


def _assignment_matching(cbg: CommunityBipartiteGraph, cardinality_first: bool) -> list:
    if not cbg.edges:
        return []
    lids = sorted({e.left for e in cbg.edges})
    rids = sorted({e.right for e in cbg.edges})
    li = {c: k for k, c in enumerate(lids)}
    ri = {c: k for k, c in enumerate(rids)}
    weights = np.zeros((len(lids), len(rids)))
    present = np.zeros_like(weights, dtype=bool)
    lookup = {}
    raw = [cbg.match_weight(e) for e in cbg.edges]
    # bonus per edge exceeds any matching's total weight, so cardinality dominates
    bonus = (sum(raw) + 1) if cardinality_first else 0
    for e, w in zip(cbg.edges, raw):
        a, b = li[e.left], ri[e.right]
        weights[a, b] = w + bonus
        present[a, b] = True
        lookup[(a, b)] = e
    transpose = weights.shape[0] > weights.shape[1]
    if transpose:
        weights, present = weights.T, present.T
    cols = _hungarian(-weights)
    chosen = []
    for row, col in enumerate(cols):
        if present[row, col]:
            chosen.append(lookup[(col, row) if transpose else (row, col)])
    return chosen


def mwm(cbg: CommunityBipartiteGraph) -> Pairing:
    """Maximum weight matching (cardinality not maximised)."""
    return _make("MWM", cbg, _assignment_matching(cbg, cardinality_first=False))


def mwpm(cbg: CommunityBipartiteGraph) -> Pairing:
    """Maximum weight matching among the maximum-cardinality matchings."""
    return _make("MWPM", cbg, _assignment_matching(cbg, cardinality_first=True))


def _incidence(cbg):
    by_left, by_right = {}, {}
    for e in cbg.edges:
        by_left.setdefault(e.left, []).append(e)
        by_right.setdefault(e.right, []).append(e)
    return by_left, by_right


def mwrm(cbg: CommunityBipartiteGraph, base: Pairing | None = None) -> Pairing:
    """Relaxed matching: replace each MWM edge, lightest first, by its heaviest
    strictly heavier incident meta edge that is not already selected.

    At most one replacement per MWM edge, so the pair count equals MWM's.
    """
    base = base if base is not None else mwm(cbg)
    w = cbg.match_weight
    by_left, by_right = _incidence(cbg)
    selected = {e.key: e for e in base.selected}
    for ie in sorted(base.selected, key=lambda e: (w(e), e.key)):
        candidates = [e for e in by_left.get(ie.left, []) + by_right.get(ie.right, [])
                      if e.key not in selected and _heavier(w(e), w(ie))]
        if not candidates:
            continue
        top = max(w(e) for e in candidates)
        best = min((e for e in candidates if _ties(w(e), top)), key=lambda e: e.key)
        del selected[ie.key]
        selected[best.key] = best
    return _make("MWRM", cbg, selected.values())


def mwmt(cbg: CommunityBipartiteGraph, base: Pairing | None = None) -> Pairing:
    """MWM plus every meta edge incident on a matched node that ties its matched weight."""
    base = base if base is not None else mwm(cbg)
    w = cbg.match_weight
    by_left, by_right = _incidence(cbg)
    selected = {e.key: e for e in base.selected}
    for me in base.selected:
        for e in by_left.get(me.left, []) + by_right.get(me.right, []):
            if _ties(w(e), w(me)):
                selected.setdefault(e.key, e)
    return _make("MWMT", cbg, selected.values())


_DISPATCH = {"mwm": mwm, "mwpm": mwpm, "mwrm": mwrm, "mwmt": mwmt}


def pair(cbg: CommunityBipartiteGraph, algorithm: str) -> Pairing:
    return _DISPATCH[check_algorithm(algorithm)](cbg)


def brute_force_pairing_oracle(cbg: CommunityBipartiteGraph, mode: str = "max_weight") -> Pairing:
    """Exact optimum by exhaustive search over all matchings.

    Memoised over (row, set of used columns); ``mode`` is ``max_weight`` or
    ``max_cardinality_then_weight``.
    """
    if mode not in ("max_weight", "max_cardinality_then_weight"):
        raise ValueError(f"unknown mode {mode!r}")
    n_nodes = len(cbg.left) + len(cbg.right)
    if n_nodes > ORACLE_MAX_NODES:
        raise TooLarge(f"{n_nodes} meta nodes exceeds the oracle bound of {ORACLE_MAX_NODES}")
    if not cbg.edges:
        return _make("ORACLE", cbg, [])
    by_cardinality = mode == "max_cardinality_then_weight"
    rows_left = len(cbg.left) >= len(cbg.right)
    rows = sorted(cbg.left if rows_left else cbg.right)
    cols = sorted(cbg.right if rows_left else cbg.left)
    col_bit = {c: 1 << k for k, c in enumerate(cols)}
    options = {r: [] for r in rows}
    for e in cbg.edges:
        r, c = (e.left, e.right) if rows_left else (e.right, e.left)
        options[r].append((col_bit[c], e))

    @lru_cache(maxsize=None)
    def best(i: int, used: int):
        if i == len(rows):
            return (0, 0), ()
        score, chosen = best(i + 1, used)
        for bit, e in options[rows[i]]:
            if used & bit:
                continue
            sub, sub_chosen = best(i + 1, used | bit)
            cand = (sub[0] + 1, sub[1] + cbg.match_weight(e))
            if _score_key(cand, by_cardinality) > _score_key(score, by_cardinality):
                score, chosen = cand, (e,) + sub_chosen
        return score, chosen

    _, chosen = best(0, 0)
    return _make("ORACLE", cbg, chosen)


def _score_key(score, by_cardinality):
    return (score[0], score[1]) if by_cardinality else (score[1],)
