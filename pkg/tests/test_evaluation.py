import pytest

from composer_cases import CASES, build, run_case
from conftest import make_mln, triangle
from hemln import (KCommunityDetector, baseline_modularity, collapse_type_independent, evaluate_k_community,
                   hemln_modularity, newman_modularity, project_tuples)
from hemln.evaluation import modularity_report
from hemln.mln import MultilayerNetwork
from hemln.synth import gen_planted_mln


def test_baseline_disjoint_triangles():
    mln = make_mln({"A": triangle("a", "b", "c"), "B": triangle("d", "e", "f")})
    membership, q = baseline_modularity(mln, seed=0)
    assert q == pytest.approx(0.5, abs=1e-12)
    assert len(set(membership.values())) == 2


def test_baseline_empty():
    assert baseline_modularity(MultilayerNetwork({}))[1] == 0.0


def test_single_tuple_covering_everything_is_zero():
    one = build({"A": 1, "B": 1}, {("A", "B"): {(1, 1): 2}})
    r = evaluate_k_community(one[0], "A *[A,B] B", assignments=one[1])
    assert len(r.tuples) == 1
    assert hemln_modularity(one[0], r) == 0.0


def test_projection_is_a_partition():
    mln, assignments = build({"A": 2, "B": 2, "C": 2},
                             {("A", "B"): {(1, 1): 3, (2, 2): 2}, ("B", "C"): {(1, 1): 2}})
    r = evaluate_k_community(mln, "A *[A,B] B *[B,C] C", assignments=assignments)
    labels = project_tuples(mln, r)
    assert set(labels) == collapse_type_independent(mln).nodes
    # C2 is in no tuple, so its members stay singletons
    assert labels["C2x"] == ("n", "C2x")
    assert labels["A1x"] == labels["B1y"] == labels["C1z"]


def test_overlap_goes_to_heaviest_then_first():
    mln, r = run_case(CASES[4])
    labels = project_tuples(mln, r)
    # tuples (1,1,1) and (1,1,2) both hold 5 edges; the first keeps A1 and B1
    assert labels["A1x"] == labels["C1x"] == ("t", 0)
    assert labels["C2x"] == ("t", 1)


def test_mirror_matches_baseline():
    links = {(f"{a}", f"{b}") for a, b in zip("abc", "def")} | {(f"{a}", f"{b}") for a, b in zip("ghi", "jkl")}
    mln = make_mln({"A": triangle("a", "b", "c") + triangle("g", "h", "i"),
                    "B": triangle("d", "e", "f") + triangle("j", "k", "l")}, {("A", "B"): links})
    r = evaluate_k_community(mln, "A *[A,B] B", seed=0)
    _, q = baseline_modularity(mln, seed=0)
    assert hemln_modularity(mln, r) == pytest.approx(q, abs=1e-12)


def test_report_layout():
    text = modularity_report([("mwm", 3, 3, 0.61234), ("mwmt", 5, 4, 0.5)], 0.7)
    lines = text.splitlines()
    assert lines[0].startswith("#algorithm")
    assert lines[1].split() == ["MWM", "3", "3", "0.612", "0.700"]


def test_detector_estimator():
    mln, truth = gen_planted_mln(2, 3, 10, 0.4, 0.02, 0.3, seed=2)
    est = KCommunityDetector(expr="L1 *[L1,L2] L2", seed=2)
    labels = est.fit_predict(mln)
    assert len(est.total_) == 3 and est.partial_ == []
    assert set(labels) == collapse_type_independent(mln).nodes
    assert est.score(mln) == pytest.approx(newman_modularity(collapse_type_independent(mln), labels))
    assert est.get_params()["algorithm"] == "mwm"
    assert est.set_params(algorithm="mwmt").algorithm == "mwmt"


def test_detector_validates_params():
    mln, _ = gen_planted_mln(2, 2, 5, 0.5, 0.05, 0.3, seed=0)
    with pytest.raises(ValueError):
        KCommunityDetector(expr="L1 *[L1,L2] L2", metric="wx").fit(mln)
    with pytest.raises(TypeError):
        KCommunityDetector(expr="L1 *[L1,L2] L2").fit("not a network")
