"""Round matrices of chain states, their H-skeletons and matching value vectors."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels
from .chain import Realization
from .graph import Graph, VertexSet, independent_masks, is_independent_mask
from .matching import MatchingError, PerfectMatching, Skeleton, has_perfect_matching


class AnchoredMatrixError(ValueError):
    pass


def skeleton_bits(entries: np.ndarray, target: Graph) -> np.ndarray:
    """0-1 array marking entries independent in ``target``; any leading shape."""
    ent = np.asarray(entries, dtype=np.uint64)
    out = np.ones(ent.shape, dtype=np.uint8)
    for u, v in target.edges:
        out &= _kernels.edge_skeleton(ent, u, v)
    return out


@dataclass(frozen=True, eq=False)
class AnchoredMatrix:
    """n x n grid of independent sets; row i is one chain run without its start.

    Entries are stored as bit patterns in a read-only ``uint64`` array.
    ``target_graph`` defines H = I(target_graph).
    """

    entries: np.ndarray
    ambient_graph: Graph
    target_graph: Graph

    def __post_init__(self):
        ent = np.array(self.entries, dtype=np.uint64, copy=True)
        if ent.ndim != 2 or ent.shape[0] != ent.shape[1]:
            raise AnchoredMatrixError(f"matrix must be square, got shape {ent.shape}")
        if self.ambient_graph.num_vertices != self.target_graph.num_vertices:
            raise AnchoredMatrixError("ambient and target graphs differ in vertex count")
        if self.ambient_graph.num_vertices > 64:
            raise AnchoredMatrixError("entries are 64-bit patterns; at most 64 vertices")
        for i, row in enumerate(ent.tolist()):
            for j, x in enumerate(row):
                if not is_independent_mask(self.ambient_graph, x):
                    raise AnchoredMatrixError(f"entry ({i}, {j}) is not independent in the ambient graph")
            for j in range(1, len(row)):
                d = row[j - 1] ^ row[j]
                if d & (d - 1):
                    raise AnchoredMatrixError(f"row {i} jumps by more than one vertex at column {j}")
        ent.setflags(write=False)
        object.__setattr__(self, "entries", ent)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def entry(self, i: int, j: int) -> VertexSet:
        return VertexSet(int(self.entries[i, j]), self.ambient_graph.num_vertices)

    def to_rows(self) -> list[list[int]]:
        return self.entries.tolist()


def build_matrix(realizations: Sequence[Realization], target: Graph) -> AnchoredMatrix:
    """Row i holds states 1..n of realization i; the start state is dropped."""
    n = len(realizations)
    if n == 0:
        raise AnchoredMatrixError("need at least one realization")
    g = realizations[0].graph
    for i, r in enumerate(realizations):
        if r.graph != g:
            raise AnchoredMatrixError(f"realization {i} runs on a different graph")
        if len(r) != n + 1:
            raise AnchoredMatrixError(f"realization {i} has {len(r)} states, expected {n + 1}")
    return AnchoredMatrix(np.array([r.states[1:] for r in realizations], dtype=np.uint64), g, target)


def h_skeleton(x: AnchoredMatrix) -> Skeleton:
    return Skeleton(skeleton_bits(x.entries, x.target_graph))


def value_vector(x: AnchoredMatrix, m: PerfectMatching) -> tuple[VertexSet, ...]:
    if m.n != x.n:
        raise MatchingError(f"matching of size {m.n} for a {x.n}x{x.n} matrix")
    width = x.ambient_graph.num_vertices
    return tuple(VertexSet(int(x.entries[r, j]), width) for j, r in enumerate(m.rows))


def is_h_pm(x: AnchoredMatrix, m: PerfectMatching) -> bool:
    """All matched entries lie in I(target_graph)."""
    if m.n != x.n:
        return False
    return all(is_independent_mask(x.target_graph, v.bits) for v in value_vector(x, m))


def has_h_pm(x: AnchoredMatrix) -> bool:
    return has_perfect_matching(h_skeleton(x))


def stationary_entries(ambient: Graph, n: int, trials: int, seed: int) -> np.ndarray:
    """``trials`` round matrices whose starts are exactly uniform over I(ambient).

    Returns a ``(trials, n, n)`` array of bit patterns.
    """
    states = np.array(independent_masks(ambient), dtype=np.uint64)
    adj = np.array(ambient.adjacency, dtype=np.uint64)
    return _kernels.stationary_matrices(adj, states, n, trials, seed)


def stationary_skeletons(ambient: Graph, target: Graph, n: int, trials: int, seed: int) -> np.ndarray:
    """H-skeletons of :func:`stationary_entries` matrices, without keeping the entries.

    ``target`` must add exactly one edge to ``ambient``.
    """
    extra = set(target.edges) - set(ambient.edges)
    if len(extra) != 1 or not set(ambient.edges) <= set(target.edges):
        raise AnchoredMatrixError("target must add exactly one edge to the ambient graph")
    (a, b), = extra
    states = np.array(independent_masks(ambient), dtype=np.uint64)
    adj = np.array(ambient.adjacency, dtype=np.uint64)
    return _kernels.stationary_skeletons(adj, states, a, b, n, trials, seed)


def stationary_matrix(ambient: Graph, target: Graph, n: int, seed: int, index: int = 0) -> AnchoredMatrix:
    """Single fixture matrix; equals ``stationary_entries(...)[index]``."""
    ent = stationary_entries(ambient, n, index + 1, seed)[index]
    return AnchoredMatrix(ent, ambient, target)
