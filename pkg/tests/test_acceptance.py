"""Acceptance criteria, one test per criterion, each printing a PASS/FAIL line."""
import math
import os
import random
import re
import time

import pytest

from composer_cases import CASES, observed, run_case
from conftest import ACCEPTANCE_LINES, groups, make_mln, path, random_cbg, report, triangle
from hemln import (CommunityAssignment, brute_force_pairing_oracle, build_cbg, classify_tuples,
                   detect_layer_communities, evaluate_k_community, mwm, mwmt, mwpm, mwrm, newman_modularity)
from hemln.cli import main
from hemln.meta_graph import CommunityBipartiteGraph, MetaEdge, weight_edge_count
from hemln.mln import LayerGraph, dump_mln, load_mln
from hemln.synth import gen_planted_mln, planted_recovery

pytestmark = pytest.mark.acceptance


def test_1_matching_exactness():
    rng = random.Random(1)
    start = time.perf_counter()
    mismatches = 0
    for _ in range(1000):
        c = random_cbg(rng, 8, 8, max_weight=20)
        if mwm(c).match_total != brute_force_pairing_oracle(c, "max_weight").match_total:
            mismatches += 1
        if mwpm(c).match_total != brute_force_pairing_oracle(c, "max_cardinality_then_weight").match_total:
            mismatches += 1
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and elapsed < 30
    report(1, "matching exactness", ok, f"1000 CBGs, mismatches={mismatches}, {elapsed:.1f}s < 30s")
    assert ok


def test_2_ordering_invariants():
    rng = random.Random(2)
    violations = 0
    for _ in range(10_000):
        c = random_cbg(rng, 50, 50, max_weight=rng.choice([3, 20, 1000]))
        a, p = mwm(c), mwpm(c)
        r, t = mwrm(c, base=a), mwmt(c, base=a)
        checks = (p.match_total <= a.match_total <= r.match_total,
                  a.match_total <= t.match_total,
                  len(r) == len(a),
                  a.pairs <= t.pairs)
        violations += not all(checks)
    report(2, "ordering invariants", violations == 0, f"10000 CBGs up to 50+50, violations={violations}")
    assert violations == 0


def test_3_composer_fixtures():
    failed = []
    for case in CASES:
        _, r = run_case(case)
        total, partial = classify_tuples(r)
        expected_total = {ids for ids, sizes in case["expected"] if 0 not in ids and 0 not in sizes}
        if observed(r) != case["expected"] or {t.community_ids for t in total} != expected_total:
            failed.append(case["name"])
    ok = not failed
    report(3, "composer fixture equivalence", ok, f"{len(CASES) - len(failed)}/{len(CASES)} fixtures"
           + (f", failed: {failed}" if failed else ""))
    assert ok


def test_4_planted_recovery():
    start = time.perf_counter()
    scores = {algo: [] for algo in ("mwm", "mwpm", "mwrm", "mwmt")}
    for seed in range(20):
        mln, truth = gen_planted_mln(2, 3, 10, 0.4, 0.02, 0.3, seed=seed)
        assignments = {n: detect_layer_communities(mln.layers[n], seed) for n in mln.layer_names}
        for algo in scores:
            r = evaluate_k_community(mln, "L1 *[L1,L2] L2", "we", algo, assignments=assignments)
            scores[algo].append(planted_recovery(r, truth))
    elapsed = time.perf_counter() - start
    means = {a: sum(v) / len(v) for a, v in scores.items()}
    ok = all(m >= 0.9 for m in means.values()) and elapsed < 60
    report(4, "planted recovery", ok,
           ", ".join(f"{a}={m:.3f}" for a, m in means.items()) + f", {elapsed:.1f}s < 60s")
    assert ok


HAND_MODULARITY = [
    ("bridged triangles", triangle("a", "b", "c") + triangle("d", "e", "f") + [("c", "d")],
     ["abc", "def"], 6 / 7 - 1 / 2),
    ("all in one", triangle("a", "b", "c") + triangle("d", "e", "f") + [("c", "d")], ["abcdef"], 0.0),
    ("K2 singletons", [("a", "b")], ["a", "b"], -0.5),
    ("disjoint triangles", triangle("a", "b", "c") + triangle("d", "e", "f"), ["abc", "def"], 0.5),
    ("P4 halves", [("a", "b"), ("b", "c"), ("c", "d")], ["ab", "cd"], 1 / 6),
    ("star singletons", [("s", x) for x in "wxyz"], ["s", "w", "x", "y", "z"], -0.3125),
]


def test_5_modularity_oracle():
    errors = []
    for name, edges, parts, expected in HAND_MODULARITY:
        g = LayerGraph.from_edges("G", edges)
        q = newman_modularity(g, {n: i for i, p in enumerate(parts) for n in p})
        if abs(q - expected) > 1e-12:
            errors.append(name)
    close = 0
    for seed in range(20):
        mln, truth = gen_planted_mln(1, 4, 25, 0.3, 0.01, 0.0, seed=seed)
        g = mln.layers["L1"]
        q_planted = newman_modularity(g, truth.blocks["L1"])
        q_found = newman_modularity(g, detect_layer_communities(g, seed).membership)
        close += abs(q_found - q_planted) <= 0.02
    ok = not errors and close >= 18
    report(5, "modularity oracle", ok, f"hand graphs {len(HAND_MODULARITY) - len(errors)}/{len(HAND_MODULARITY)}, "
           f"Louvain within 0.02 on {close}/20 seeds")
    assert ok


def _scaled(cbg, k):
    edges = tuple(MetaEdge(e.left, e.right, e.expanded, 0.0, e.count * k) for e in cbg.edges)
    return weight_edge_count(CommunityBipartiteGraph(cbg.left_layer, cbg.right_layer, cbg.left, cbg.right, edges))


def _worked_examples():
    two_paths = {"A": path("a", "b", "c"), "B": path("d", "e", "f")}
    parts = (groups("A", "abc"), groups("B", "def"))
    full = {(x, y) for x in ("a1", "a2") for y in ("b1", "b2")}
    cliques = make_mln({"A": [("a1", "a2")], "B": [("b1", "b2")]}, {("A", "B"): full})
    clique_parts = (groups("A", ["a1", "a2"]), groups("B", ["b1", "b2"]))
    tri = make_mln({"A": triangle("a", "b", "c"), "B": triangle("d", "e", "f")},
                   {("A", "B"): {("a", "d"), ("b", "e")}})
    return [
        ("wh hub link", make_mln(two_paths, {("A", "B"): {("b", "e")}}), parts, "wh", 1 / 9),
        ("wh non-hub link", make_mln(two_paths, {("A", "B"): {("a", "d")}}), parts, "wh", None),
        ("wh cliques", cliques, clique_parts, "wh", 1.0),
        ("wd triangles", tri, parts, "wd", 2 / 9),
        ("wd cliques", cliques, clique_parts, "wd", 1.0),
        ("wd paths", make_mln(two_paths, {("A", "B"): {("a", "d")}}), parts, "wd", 4 / 81),
    ]


def test_6_weight_formulas():
    errors = []
    for name, mln, (a, b), metric, expected in _worked_examples():
        cbg = build_cbg(mln, a, b, metric)
        if expected is None:
            ok = len(cbg) == 0
        else:
            ok = len(cbg) == 1 and abs(cbg.edges[0].weight - expected) <= 1e-12
        if not ok:
            errors.append(name)
    rng = random.Random(6)
    scaling_failures = 0
    for _ in range(500):
        raw = random_cbg(rng, 8, 8, max_weight=30)
        counts = tuple(MetaEdge(e.left, e.right, frozenset(), 0.0, int(e.weight)) for e in raw.edges)
        base = weight_edge_count(CommunityBipartiteGraph("A", "B", raw.left, raw.right, counts))
        order = sorted(range(len(base.edges)), key=lambda i: (-base.edges[i].weight, i))
        for k in (3, 0.37, 1e6):
            s = _scaled(base, k)
            in_range = all(0 < e.weight <= 1 for e in s.edges)
            same_rank = sorted(range(len(s.edges)), key=lambda i: (-s.edges[i].weight, i)) == order
            if isinstance(k, int):
                same_pairs = all(f(s).pairs == f(base).pairs for f in (mwm, mwpm, mwrm, mwmt))
            else:
                # non-integral counts: co-optimal matchings may be chosen differently, optimum must agree
                same_pairs = all(math.isclose(f(s).match_total, f(base).match_total * k, rel_tol=1e-9)
                                 for f in (mwm, mwpm))
            scaling_failures += not (in_range and same_rank and same_pairs)
    ok = not errors and scaling_failures == 0
    report(6, "weight-metric formulas", ok, f"worked examples {6 - len(errors)}/6 at 1e-12, "
           f"scaling failures={scaling_failures}/1500")
    assert ok


def test_7_reference_figures():
    config = os.environ.get("HEMLN_IMDB_CONFIG")
    if not config:
        report(7, "reference-figure reproduction", None,
               "best-effort; not run, needs user-supplied IMDb edge lists via HEMLN_IMDB_CONFIG")
        pytest.skip("best-effort criterion: no user-supplied IMDb/DBLP data")
    mln = load_mln(config)
    r = evaluate_k_community(mln, "A *[A,D] D", "we", "mwm", 42)
    detail = f"A-D MWM pairs={r.steps[0].pairs} sum={r.steps[0].match_total} (reference 83 / 9941)"
    report(7, "reference-figure reproduction", None, "best-effort, informational only: " + detail)


def test_8_decoupling_efficiency(tmp_path, capsys):
    start = time.perf_counter()
    assert main(["generate", "--out", str(tmp_path / "bench"), "--layers", "3", "--blocks", "20",
                 "--block-size", "100", "--p-in", "0.25", "--p-out", "0.012", "--coupling", "0.05",
                 "--seed", "1"]) == 0
    config = str(tmp_path / "bench" / "config.yaml")
    mln = load_mln(config)
    edges = [g.number_of_edges() for g in mln.layers.values()]
    capsys.readouterr()
    assert main(["bench", "--config", config, "--expr", "L1 *[L1,L2] L2 *[L2,L3] L3 *[L3,L1] L1",
                 "--repeat", "3"]) == 0
    out = capsys.readouterr().out
    values = dict(re.findall(r"^(\S+)=(\S+)$", out, re.M))
    elapsed = time.perf_counter() - start
    ratio = float(values["ratio"])
    ok = ratio <= 0.2 and elapsed < 120
    with capsys.disabled():
        report(8, "decoupling efficiency", ok,
               f"layer edges={edges}, recurring={float(values['recurring.total']):.4f}s, "
               f"one-time max={float(values['onetime.max']):.4f}s, ratio={ratio:.3f} <= 0.2, "
               f"wall {elapsed:.1f}s < 120s")
    assert ok


def test_9_determinism(tmp_path, capsys):
    mln, _ = gen_planted_mln(3, 5, 15, 0.4, 0.02, 0.2, seed=9)
    dump_mln(mln, tmp_path / "net")
    config = str(tmp_path / "net" / "config.yaml")
    identical = []
    for algo, metric in [("mwm", "we"), ("mwmt", "wh"), ("mwrm", "wd")]:
        blobs = []
        for i in range(2):
            out = tmp_path / f"{algo}{i}.tsv"
            main(["detect", "--config", config, "--expr", "L1 *[L1,L2] L2 *[L2,L3] L3 *[L3,L1] L1",
                  "--algo", algo, "--metric", metric, "--seed", "7", "--out", str(out), "--emit-edges"])
            blobs.append((out.read_bytes(), (tmp_path / f"{algo}{i}.tsv.edges.tsv").read_bytes()))
        identical.append(blobs[0] == blobs[1])
    capsys.readouterr()
    ok = all(identical)
    with capsys.disabled():
        report(9, "determinism", ok, f"{sum(identical)}/3 configurations byte-identical")
    assert ok
