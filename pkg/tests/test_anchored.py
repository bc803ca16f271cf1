from pathlib import Path

import numpy as np
import pytest
from scipy import stats

from indsetlab._kernels import Xoshiro256
from indsetlab.anchored import (
    AnchoredMatrix, AnchoredMatrixError, build_matrix, h_skeleton, has_h_pm, is_h_pm, stationary_entries,
    stationary_matrix, stationary_skeletons, value_vector,
)
from indsetlab.chain import run_realization
from indsetlab.graph import Graph, VertexSet, edgeless_graph, independent_masks, is_independent_mask, path_graph, prefix_graph
from indsetlab.matching import PerfectMatching, Skeleton, enumerate_pms, has_perfect_matching
from indsetlab.sampler import initial_sets, round_matrix

DATA = Path(__file__).parent / "data"


def realizations(g, n, seed):
    return [run_realization(g, VertexSet.empty(g.num_vertices), n, Xoshiro256(seed + i)) for i in range(n)]


def test_build_matrix_drops_start():
    g = edgeless_graph(2)
    r = realizations(g, 1, 0)
    x = build_matrix(r, g)
    assert x.n == 1 and x.to_rows() == [[r[0].states[1]]]


def test_build_matrix_reproducible():
    g = path_graph(3)
    a = build_matrix(realizations(g, 3, 7), g)
    b = build_matrix(realizations(g, 3, 7), g)
    assert np.array_equal(a.entries, b.entries)
    for row in a.to_rows():
        assert all(bin(p ^ q).count("1") <= 1 for p, q in zip(row, row[1:]))


def test_build_matrix_errors():
    g = path_graph(3)
    r = realizations(g, 3, 0)
    with pytest.raises(AnchoredMatrixError):
        build_matrix(r[:2], g)
    other = run_realization(edgeless_graph(3), VertexSet.empty(3), 3, Xoshiro256(0))
    with pytest.raises(AnchoredMatrixError):
        build_matrix(r[:2] + [other], g)
    with pytest.raises(AnchoredMatrixError):
        AnchoredMatrix([[3]], path_graph(2), path_graph(2))


def test_skeleton_all_ones_when_target_is_ambient():
    g = path_graph(4)
    x = build_matrix(realizations(g, 4, 1), g)
    assert h_skeleton(x) == Skeleton.ones(4)
    assert all(is_h_pm(x, m) for m in enumerate_pms(Skeleton.ones(4)))


def test_skeleton_marks_new_edge():
    x = AnchoredMatrix([[3, 1], [2, 3]], edgeless_graph(2), Graph(2, ((0, 1),)))
    assert h_skeleton(x).to_text() == "01\n10\n"
    assert not is_h_pm(x, PerfectMatching((0, 1)))
    assert is_h_pm(x, PerfectMatching((1, 0)))
    assert [v.bits for v in value_vector(x, PerfectMatching((1, 0)))] == [2, 1]


def test_value_vector_diagonal():
    x = AnchoredMatrix([[0, 1], [2, 0]], edgeless_graph(2), edgeless_graph(2))
    assert [v.bits for v in value_vector(x, PerfectMatching((0, 1)))] == [0, 0]


def test_p3_golden_skeleton():
    g = path_graph(3)
    starts = initial_sets(prefix_graph(g, 0), 18, 42, 1)
    x = round_matrix(prefix_graph(g, 0), prefix_graph(g, 1), starts, 42, 1, 1)
    direct = [[1 if is_independent_mask(prefix_graph(g, 1), e) else 0 for e in row] for row in x.to_rows()]
    golden = Skeleton.from_text((DATA / "p3_round1_skeleton.txt").read_text())
    assert h_skeleton(x) == golden == Skeleton(direct)


def test_skeleton_route_matches_direct_route():
    amb, tgt = edgeless_graph(3), Graph(3, ((0, 2),))
    ent = stationary_entries(amb, 3, 1000, 5)
    for t in range(1000):
        x = AnchoredMatrix(ent[t], amb, tgt)
        skel = h_skeleton(x)
        from_skel = {m for m in enumerate_pms(Skeleton.ones(3)) if m.fits(skel)}
        direct = {m for m in enumerate_pms(Skeleton.ones(3)) if is_h_pm(x, m)}
        assert from_skel == direct
        assert has_h_pm(x) == bool(direct) == has_perfect_matching(skel)


def test_stationary_helpers_consistent():
    amb, tgt = edgeless_graph(4), Graph(4, ((1, 3),))
    ent = stationary_entries(amb, 5, 40, 9)
    sk = stationary_skeletons(amb, tgt, 5, 40, 9)
    for t in range(40):
        assert h_skeleton(AnchoredMatrix(ent[t], amb, tgt)).bits.tolist() == sk[t].tolist()
    assert np.array_equal(stationary_matrix(amb, tgt, 5, 9, index=3).entries, ent[3])
    with pytest.raises(AnchoredMatrixError):
        stationary_skeletons(amb, amb, 5, 1, 0)


@pytest.mark.parametrize("graph", [edgeless_graph(3), path_graph(3), Graph(3, ((0, 1),))])
def test_stationary_entry_marginals_uniform(graph):
    states = independent_masks(graph)
    assert len(states) <= 8
    ent = stationary_entries(graph, 3, 100_000, 2)
    codes = np.searchsorted(np.array(states, dtype=np.uint64), ent)
    for i in range(3):
        for j in range(3):
            counts = np.bincount(codes[:, i, j], minlength=len(states))
            assert stats.chisquare(counts).pvalue > 1e-4
