"""k-community evaluation: compose layer communities step by step into tuples.

A tuple holds one community id per distinct layer of the expression (0 when
a step found no partner) and one expanded inter-layer edge set per applied
step (empty when the step did not confirm the pair).

Effect of a step on a tuple ``t``, given the step's pairing::

    new layer (case i)    matched      one copy of t per partner, extended with
                                       the partner id and the edge set
                          unmatched    t extended with 0 and an empty edge set
    both seen (case ii)   consistent   t updated with the pair's edge set
                          otherwise    t updated with an empty edge set
"""
from __future__ import annotations

import time
import warnings
from dataclasses import dataclass, field

from ._validation import check_algorithm, check_metric
from .exceptions import EmptyCBGWarning, ExpressionError
from .expression import CASE_I, CASE_II, INITIAL, KCommunityExpression, classify_steps, parse_expression
from .louvain import detect_layer_communities
from .meta_graph import build_cbg, summarize_layer
from .pairing import Pairing, pair

EMPTY = frozenset()


@dataclass(frozen=True)
class KCommunityTuple:
    community_ids: tuple
    edge_sets: tuple

    @property
    def is_total(self) -> bool:
        return 0 not in self.community_ids and all(self.edge_sets)

    def sort_key(self):
        return (self.community_ids, tuple(len(x) for x in self.edge_sets))

    def edge_count(self) -> int:
        return sum(len(x) for x in self.edge_sets)


@dataclass(frozen=True)
class StepSummary:
    position: int
    left_layer: str
    right_layer: str
    case: str
    meta_edges: int
    pairs: int
    total_weight: float
    match_total: float
    consistent: int = 0
    no_match: int = 0
    inconsistent: int = 0
    seconds: float = 0.0


@dataclass
class KCommunityResult:
    expression: KCommunityExpression
    algorithm: str
    metric: str
    tuples: tuple = ()
    steps: list = field(default_factory=list)
    pairings: list = field(default_factory=list)
    assignments: dict = field(default_factory=dict)

    @property
    def layers(self) -> tuple:
        return self.expression.layers

    @property
    def k(self) -> int:
        """Number of community slots filled so far."""
        return len(self.tuples[0].community_ids) if self.tuples else 0


def _sorted(tuples):
    return tuple(sorted(set(tuples), key=KCommunityTuple.sort_key))


class _Context:
    """Shared per-evaluation state: assignments plus lazily built layer summaries."""

    def __init__(self, mln, assignments, metric, algorithm, hub_threshold):
        self.mln = mln
        self.assignments = assignments
        self.metric = metric
        self.algorithm = algorithm
        self.hub_threshold = hub_threshold
        self._summaries = {}

    def summary(self, layer):
        if self.metric == "we":
            return None
        if layer not in self._summaries:
            self._summaries[layer] = summarize_layer(self.mln.layers[layer], self.assignments[layer],
                                                     self.hub_threshold)
        return self._summaries[layer]

    def pairing(self, left, right, left_ids=None, right_ids=None):
        cbg = build_cbg(self.mln, self.assignments[left], self.assignments[right], self.metric,
                        left_communities=left_ids, right_communities=right_ids,
                        summary_i=self.summary(left), summary_j=self.summary(right),
                        hub_threshold=self.hub_threshold)
        return cbg, pair(cbg, self.algorithm)


def _context(mln, metric, algorithm, assignments, hub_threshold):
    if isinstance(assignments, _Context):
        return assignments
    return _Context(mln, assignments, check_metric(metric), check_algorithm(algorithm), hub_threshold)


def initialize_result(mln, expr: KCommunityExpression, metric, algorithm, assignments,
                      hub_threshold: float = 1.0) -> KCommunityResult:
    """Seed the result with one tuple per selected pair of the first composition."""
    ctx = _context(mln, metric, algorithm, assignments, hub_threshold)
    if not expr.steps:
        raise ExpressionError("expression needs at least one composition")
    step = expr.steps[0]
    start = time.perf_counter()
    cbg, pairing = ctx.pairing(step.left_layer, step.right_layer)
    elapsed = time.perf_counter() - start
    tuples = [KCommunityTuple((e.left, e.right), (e.expanded,)) for e in pairing.selected]
    if not tuples:
        warnings.warn(f"composition {step.left_layer}-{step.right_layer} produced no pairs",
                      EmptyCBGWarning, stacklevel=2)
    result = KCommunityResult(expr, ctx.algorithm, ctx.metric, _sorted(tuples),
                              assignments={n: ctx.assignments[n] for n in expr.layers})
    result.steps.append(StepSummary(1, step.left_layer, step.right_layer, INITIAL, len(cbg),
                                    len(pairing), pairing.total_weight, pairing.match_total,
                                    consistent=len(tuples), seconds=elapsed))
    result.pairings.append(pairing)
    return result


def apply_composition(result: KCommunityResult, step, mln, metric, algorithm, assignments,
                      case: str | None = None, hub_threshold: float = 1.0) -> KCommunityResult:
    """Apply one composition step to every tuple and return the new result."""
    ctx = _context(mln, metric, algorithm, assignments, hub_threshold)
    slots = {name: i for i, name in enumerate(result.layers)}
    lpos = slots[step.left_layer]
    if case is None:
        seen_before = result.expression.layer_sequence[:step.position]
        case = CASE_II if step.right_layer in seen_before else CASE_I
    rpos = slots[step.right_layer]

    left_ids = {t.community_ids[lpos] for t in result.tuples} - {0}
    right_ids = None
    if case == CASE_II:
        right_ids = {t.community_ids[rpos] for t in result.tuples} - {0}

    start = time.perf_counter()
    cbg, pairing = ctx.pairing(step.left_layer, step.right_layer, left_ids, right_ids)
    elapsed = time.perf_counter() - start

    partners = {}
    for e in pairing.selected:
        partners.setdefault(e.left, []).append(e)
    matched_right = {e.right for e in pairing.selected}
    selected = {e.key: e for e in pairing.selected}

    out = []
    consistent = no_match = inconsistent = 0
    for t in result.tuples:
        c = t.community_ids[lpos]
        if case == CASE_II:
            d = t.community_ids[rpos]
            e = selected.get((c, d)) if c and d else None
            if e is not None:
                consistent += 1
                out.append(KCommunityTuple(t.community_ids, t.edge_sets + (e.expanded,)))
            else:
                if c and d and (c in partners or d in matched_right):
                    inconsistent += 1
                else:
                    no_match += 1
                out.append(KCommunityTuple(t.community_ids, t.edge_sets + (EMPTY,)))
        else:
            matches = partners.get(c, []) if c else []
            if matches:
                consistent += 1
                for e in matches:
                    out.append(KCommunityTuple(t.community_ids + (e.right,), t.edge_sets + (e.expanded,)))
            else:
                no_match += 1
                out.append(KCommunityTuple(t.community_ids + (0,), t.edge_sets + (EMPTY,)))

    new = KCommunityResult(result.expression, result.algorithm, result.metric, _sorted(out),
                           list(result.steps), list(result.pairings), result.assignments)
    new.steps.append(StepSummary(step.position, step.left_layer, step.right_layer, case, len(cbg),
                                 len(pairing), pairing.total_weight, pairing.match_total,
                                 consistent, no_match, inconsistent, elapsed))
    new.pairings.append(pairing)
    return new


def compute_assignments(mln, layers, seed=42, resolution: float = 1.0, given=None, executor=None) -> dict:
    """1-communities for ``layers``; entries in ``given`` are reused as-is."""
    out = dict(given or {})
    todo = [name for name in dict.fromkeys(layers) if name not in out]
    if executor is not None:
        futures = {name: executor.submit(detect_layer_communities, mln.layers[name], seed, resolution)
                   for name in todo}
        for name, fut in futures.items():
            out[name] = fut.result()
    else:
        for name in todo:
            out[name] = detect_layer_communities(mln.layers[name], seed, resolution)
    return out


def evaluate_k_community(mln, expr, metric="we", algorithm="mwm", seed=42, *,
                         assignments=None, hub_threshold: float = 1.0,
                         resolution: float = 1.0) -> KCommunityResult:
    """Evaluate a k-community expression over ``mln``.

    ``assignments`` maps layer name to a precomputed
    :class:`~hemln.louvain.CommunityAssignment`; missing layers are detected
    with Louvain using ``seed``.
    """
    if isinstance(expr, str):
        expr = parse_expression(expr, mln)
    assignments = compute_assignments(mln, expr.layers, seed, resolution, assignments)
    ctx = _Context(mln, assignments, check_metric(metric), check_algorithm(algorithm), hub_threshold)
    cases = classify_steps(expr)
    result = initialize_result(mln, expr, metric, algorithm, ctx)
    for step, case in zip(expr.steps[1:], cases[1:]):
        result = apply_composition(result, step, mln, metric, algorithm, ctx, case=case)
    return result


def classify_tuples(result: KCommunityResult) -> tuple[list, list]:
    total = [t for t in result.tuples if t.is_total]
    partial = [t for t in result.tuples if not t.is_total]
    return total, partial
