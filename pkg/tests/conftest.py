import random

import pytest

from hemln import CommunityAssignment, CommunityBipartiteGraph, InterLayerEdges, LayerGraph, MultilayerNetwork


def make_mln(layers, inter=None):
    """``layers``: name -> (edges, extra nodes) or edges; ``inter``: (left, right) -> links."""
    graphs = []
    for name, spec in layers.items():
        edges, nodes = spec if isinstance(spec, tuple) else (spec, ())
        graphs.append(LayerGraph.from_edges(name, edges, nodes))
    links = [InterLayerEdges(pair, frozenset(x)) for pair, x in (inter or {}).items()]
    return MultilayerNetwork.from_parts(graphs, links)


def groups(layer, *parts):
    """Assignment whose community ids follow the order of ``parts`` (1, 2, ...)."""
    return CommunityAssignment(layer, {n: i for i, g in enumerate(parts, start=1) for n in g})


def random_cbg(rng, max_left, max_right, max_weight=20, density=None):
    nl = rng.randint(1, max_left)
    nr = rng.randint(1, max_right)
    p = density if density is not None else rng.uniform(0.2, 1.0)
    weights = {(i, j): rng.randint(1, max_weight)
               for i in range(1, nl + 1) for j in range(1, nr + 1) if rng.random() < p}
    return CommunityBipartiteGraph.from_weights(weights, range(1, nl + 1), range(1, nr + 1))


@pytest.fixture
def rng():
    return random.Random(20240611)


def triangle(a, b, c):
    return [(a, b), (b, c), (a, c)]


def path(a, b, c):
    return [(a, b), (b, c)]


ACCEPTANCE_LINES = []


def report(criterion, title, ok, detail=""):
    """Record and print one acceptance verdict line."""
    verdict = "SKIP" if ok is None else ("PASS" if ok else "FAIL")
    line = f"criterion {criterion} [{title}]: {verdict}" + (f" ({detail})" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
