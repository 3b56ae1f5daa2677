"""Parser for k-community composition expressions.

Grammar (whitespace-insensitive)::

    expr  := LAYER (OP LAYER)*
    OP    := ('*' | 'Θ') '[' LAYER ',' LAYER ']'
    LAYER := one or more characters other than whitespace, '[', ']', ',', '(', ')', '*', 'Θ'

Compositions are applied left to right. ``*[i,j]`` composes the layer to its
left (``i``) with the layer to its right (``j``); when ``j`` already occurred
earlier the step closes a cycle and the subscripts may be given in either
order. A layer appears at most twice. Parenthesised expressions are not
supported.

Example: ``M *[M,A] A *[A,D] D *[D,M] M``.
"""
from __future__ import annotations

from dataclasses import dataclass

from .exceptions import (DisconnectedStep, ExpressionSyntaxError, NotSupported,
                         SubscriptMismatch, UnknownLayer)

INITIAL = "initial"
CASE_I = "case_i_new_layer"
CASE_II = "case_ii_both_processed"

_OPERATORS = ("*", "Θ")
_RESERVED = set("[],()*Θ")


@dataclass(frozen=True)
class CompositionStep:
    left_layer: str
    right_layer: str
    position: int


@dataclass(frozen=True)
class KCommunityExpression:
    layer_sequence: tuple
    steps: tuple

    @property
    def layers(self) -> tuple:
        """Distinct layers in order of first appearance (the tuple slot order)."""
        return tuple(dict.fromkeys(self.layer_sequence))

    @property
    def k(self) -> int:
        return len(self.layers)

    @property
    def cyclic(self) -> bool:
        return len(self.layers) < len(self.layer_sequence)

    def __str__(self):
        out = [self.layer_sequence[0]]
        for s in self.steps:
            out.append(f"*[{s.left_layer},{s.right_layer}] {s.right_layer}")
        return " ".join(out)


class _Scanner:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch):
        if self.peek() != ch:
            raise ExpressionSyntaxError(self.text, self.pos, repr(ch))
        self.pos += 1

    def name(self):
        self.skip()
        start = self.pos
        while (self.pos < len(self.text) and not self.text[self.pos].isspace()
               and self.text[self.pos] not in _RESERVED):
            self.pos += 1
        if self.pos == start:
            if self.peek() in ("(", ")"):
                raise NotSupported("parenthesised (explicit precedence) expressions are not supported")
            raise ExpressionSyntaxError(self.text, start, "layer name")
        return self.text[start:self.pos]


def parse_expression(text: str, mln=None) -> KCommunityExpression:
    """Parse ``text``; when ``mln`` is given, layers and connectivity are checked against it."""
    sc = _Scanner(text)
    sequence = [sc.name()]
    subscripts = []
    while sc.peek():
        ch = sc.peek()
        if ch in "()":
            raise NotSupported("parenthesised (explicit precedence) expressions are not supported")
        if ch not in _OPERATORS:
            raise ExpressionSyntaxError(text, sc.pos, "'*[' operator or end of input")
        sc.pos += 1
        sc.expect("[")
        a = sc.name()
        sc.expect(",")
        b = sc.name()
        sc.expect("]")
        subscripts.append((a, b))
        sequence.append(sc.name())

    steps = []
    seen = {sequence[0]}
    for pos, ((a, b), prev, nxt) in enumerate(zip(subscripts, sequence, sequence[1:]), start=1):
        if prev == nxt:
            raise DisconnectedStep(prev, nxt)
        revisits = nxt in seen
        if (a, b) != (prev, nxt) and not (revisits and (a, b) == (nxt, prev)):
            raise SubscriptMismatch(
                f"step {pos}: operator *[{a},{b}] does not join adjacent layers {prev!r} and {nxt!r}")
        steps.append(CompositionStep(prev, nxt, pos))
        seen.add(nxt)

    for name in set(sequence):
        if sequence.count(name) > 2:
            raise NotSupported(f"layer {name!r} appears {sequence.count(name)} times; "
                               "a layer may reappear only once, to close a cycle")

    if mln is not None:
        for name in sequence:
            if name not in mln.layers:
                raise UnknownLayer(name)
        for s in steps:
            if not mln.has_inter(s.left_layer, s.right_layer):
                raise DisconnectedStep(s.left_layer, s.right_layer)
    return KCommunityExpression(tuple(sequence), tuple(steps))


def classify_steps(expr: KCommunityExpression) -> list[str]:
    """Label each step: ``initial``, then case i (new layer) or case ii (both processed)."""
    labels = []
    seen = set()
    for s in expr.steps:
        if not labels:
            labels.append(INITIAL)
        elif s.right_layer in seen:
            labels.append(CASE_II)
        else:
            labels.append(CASE_I)
        seen.update((s.left_layer, s.right_layer))
    return labels
