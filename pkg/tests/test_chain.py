import numpy as np
import pytest

from indsetlab._kernels import Xoshiro256
from indsetlab.chain import ChainError, Realization, bidc_move, bidc_step, check_realization, run_realization, transition_matrix
from indsetlab.graph import VertexSet, complete_graph, connected_graphs, edgeless_graph, path_graph


def test_single_vertex_flip_flops():
    g = edgeless_graph(1)
    x = VertexSet.empty(1)
    r = Xoshiro256(0)
    seq = [x := bidc_step(g, x, r) for _ in range(6)]
    assert [s.bits for s in seq] == [1, 0, 1, 0, 1, 0]


def test_blocked_insert_stays():
    g = path_graph(3)
    x = VertexSet.of([0], 3)
    assert bidc_move(g, x, 1) == x
    assert bidc_move(g, x, 2) == VertexSet.of([0, 2], 3)
    assert bidc_move(g, x, 0) == VertexSet.empty(3)


def test_step_rejects_dependent_state():
    with pytest.raises(ChainError):
        bidc_step(path_graph(2), VertexSet.of([0, 1], 2), Xoshiro256(0))


def test_realization_reproducible_and_valid():
    g = complete_graph(4)
    a = run_realization(g, VertexSet.empty(4), 500, Xoshiro256(3))
    b = run_realization(g, VertexSet.empty(4), 500, Xoshiro256(3))
    assert a == b and len(a) == 501 and check_realization(a)
    assert a.sets()[0] == VertexSet.empty(4)


def test_realization_rejects_jumps():
    with pytest.raises(ChainError):
        Realization(path_graph(3), (0, 5))


def test_step_matches_kernel():
    g = path_graph(4)
    r1, r2 = Xoshiro256(9), Xoshiro256(9)
    x = VertexSet.empty(4)
    walk = run_realization(g, x, 200, r2).states
    for t in range(200):
        x = bidc_step(g, x, r1)
        assert x.bits == walk[t + 1]


def test_transition_matrix_p3():
    states, P = transition_matrix(path_graph(3))
    assert states == [0, 1, 2, 4, 5]
    assert np.allclose(P.sum(axis=0), 1) and np.allclose(P.sum(axis=1), 1)
    # From {} each vertex can be inserted.
    assert P[0].tolist() == pytest.approx([0, 1 / 3, 1 / 3, 1 / 3, 0])


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_uniform_is_stationary(n):
    for g in connected_graphs(n):
        _, P = transition_matrix(g)
        pi = np.full(P.shape[0], 1 / P.shape[0])
        assert np.max(np.abs(pi @ P - pi)) <= 1e-12
        assert np.allclose(P, P.T)
