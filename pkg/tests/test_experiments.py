import json
from fractions import Fraction

import pytest

from indsetlab.distance import separation_distance, total_variation, Distribution
from indsetlab.graph import Graph, edgeless_graph, path_graph
from indsetlab.harness.experiments import (
    ExperimentError, count_report, default_independence_fixture, exact_value_vector_law,
    measure_sampler_uniformity, pm_bound, sample_report, verify_distance_lemma,
    verify_independence_property, verify_p_robustness, verify_pm_bound,
)
from indsetlab.harness.report import SCHEMA_VERSION, Verdict


def test_distance_lemma_small_run():
    rep = verify_distance_lemma(300, 1)
    assert rep.verdict == Verdict.CONFIRMED
    assert set(rep.measurements["violations"]) >= {"triangle", "tv_domination", "uniform_bound", "mixture_round_trip"}
    with pytest.raises(ExperimentError):
        verify_distance_lemma(0, 1)


def test_distance_adversarial_fixture():
    a, b = Distribution({0: 0.0, 1: 1.0}), Distribution({0: 1.0, 1: 0.0})
    assert separation_distance(a, b) == 1 and total_variation(a, b) == 1


def test_exact_law_of_two_vertex_fixture():
    # Hand-enumerated law of the matched value vector (states 0, 1, 2 = {}, {0}, {1}).
    law, survive = exact_value_vector_law(*default_independence_fixture(), 2)
    assert survive == Fraction(7, 8)
    expected = {(0, 0): Fraction(1, 14)}
    for key in [(0, 1), (0, 2), (1, 0), (2, 0)]:
        expected[key] = Fraction(3, 28)
    for key in [(1, 1), (1, 2), (2, 1), (2, 2)]:
        expected[key] = Fraction(1, 8)
    assert law == expected


@pytest.mark.parametrize("ambient,target,n", [
    (edgeless_graph(2), Graph(2, ((0, 1),)), 2),
    (edgeless_graph(2), Graph(2, ((0, 1),)), 3),
    (Graph(3, ((0, 1),)), Graph(3, ((0, 1), (1, 2))), 2),
])
def test_permutation_rejection_gives_product_law(ambient, target, n):
    from itertools import product
    from indsetlab.graph import independent_masks
    law, _ = exact_value_vector_law(ambient, target, n, "rejection")
    h = independent_masks(target)
    assert law == {k: Fraction(1, len(h) ** n) for k in product(h, repeat=n)}


def test_exact_law_n1_is_uniform():
    law, _ = exact_value_vector_law(*default_independence_fixture(), 1)
    assert law == {(0,): Fraction(1, 3), (1,): Fraction(1, 3), (2,): Fraction(1, 3)}


def test_independence_report_contents():
    rep = verify_independence_property(*default_independence_fixture(), 2, 2000, 3)
    m = rep.measurements
    assert m["surviving_trials"] == 2000
    assert m["matrices_drawn"] == 2000 + m["matrices_discarded"]
    assert sum(m["joint_counts"]) == 2000
    assert set(m["tests"]) == {"joint", "pair_0_1"}
    assert m["exact_tv_to_product"] == pytest.approx(1 / 18)
    assert rep.thresholds["significance"] == 0.01


def test_independence_n1_confirmed():
    rep = verify_independence_property(*default_independence_fixture(), 1, 20_000, 3)
    assert rep.verdict == Verdict.CONFIRMED


def test_independence_limits():
    with pytest.raises(ExperimentError):
        verify_independence_property(edgeless_graph(9), Graph(9, ((0, 1),)), 4, 10, 0)


def test_pm_bound_values():
    assert pm_bound(50, 0.5) == pytest.approx(51 ** 3 * 2.0 ** -25)
    assert pm_bound(8, 0.5) == 1.0
    assert pm_bound(10, 1.0) == 0.0
    rep = verify_pm_bound([8], [0.5, 1.0], 500, 2)
    rows = rep.measurements["grid"]
    assert rows[0]["vacuous"] and rows[1]["no_pm"] == 0
    assert rep.verdict == Verdict.CONFIRMED


def test_robustness_degenerate_and_inconclusive():
    g = path_graph(4)
    rep = verify_p_robustness(g, g, 300, 1, n=6)
    assert rep.measurements["one_frequency"] == 1.0
    assert rep.verdict == Verdict.CONFIRMED
    low = verify_p_robustness(edgeless_graph(4), Graph(4, ((0, 1),)), 2, 1, n=4)
    assert low.verdict == Verdict.INCONCLUSIVE
    with pytest.raises(ExperimentError):
        verify_p_robustness(edgeless_graph(3), Graph(3, ((0, 1),)), 10, 1)


def test_robustness_entries_route_matches_skeleton_route():
    a = verify_p_robustness(edgeless_graph(4), Graph(4, ((0, 1),)), 500, 4, n=8, chunk=128)
    b = verify_p_robustness(edgeless_graph(4), Graph(4, ((0, 1), (2, 3))), 500, 4, n=8, chunk=128)
    assert a.measurements["patterns"][0]["count"] == b.measurements["patterns"][0]["count"] == 500 * 8


def test_uniformity_edgeless_and_contract():
    rep = measure_sampler_uniformity(edgeless_graph(3), 0.1, 10_000, "exact", 5)
    assert rep.measurements["tv"] <= rep.thresholds["slack"]
    assert rep.verdict == Verdict.CONFIRMED
    with pytest.raises(ExperimentError):
        measure_sampler_uniformity(edgeless_graph(3), 0.1, 100, "exact", 5)


def test_report_json_schema():
    rep = sample_report(path_graph(3), 0.1, "exact", 42)
    d = json.loads(rep.to_json())
    assert d["schema_version"] == SCHEMA_VERSION
    assert d["config"]["rng"] == "xoshiro256**"
    assert d["config"]["kernel_backend"] in ("cython", "python")
    assert d["measurements"]["outcomes"][0]["params"]["delta"] == "2^-29"
    c = count_report(edgeless_graph(2), 0.2, "exact", 1)
    assert c.measurements["value_exact"] == "4"


def test_reports_reproducible():
    a = verify_independence_property(*default_independence_fixture(), 2, 3000, 8)
    b = verify_independence_property(*default_independence_fixture(), 2, 3000, 8)
    assert a.reproducible_part() == b.reproducible_part()
