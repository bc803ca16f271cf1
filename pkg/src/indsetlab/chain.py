"""The basic insert/delete chain on independent sets."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .graph import Graph, VertexSet, independent_masks, is_independent, is_independent_mask

DEFAULT_STATE_LIMIT = 4096


class ChainError(ValueError):
    pass


def bidc_move(g: Graph, state: VertexSet, u: int) -> VertexSet:
    """Apply the transition for an already drawn vertex ``u``."""
    bits = state.bits
    bit = 1 << u
    if bits & bit:
        return VertexSet(bits & ~bit, state.width)
    if g.adjacency[u] & bits:
        return state
    return VertexSet(bits | bit, state.width)


def bidc_step(g: Graph, state: VertexSet, rng) -> VertexSet:
    """One chain step: draw a uniform vertex, delete it, insert it if legal, or stay."""
    if not is_independent(g, state):
        raise ChainError(f"state {state!r} is not independent in the graph")
    return bidc_move(g, state, rng.randbelow(g.num_vertices))


@dataclass(frozen=True)
class Realization:
    """States ``X_0 .. X_T`` of one chain run, stored as bit patterns."""

    graph: Graph
    states: tuple[int, ...]

    def __post_init__(self):
        for a, b in zip(self.states, self.states[1:]):
            diff = a ^ b
            if diff & (diff - 1):
                raise ChainError("consecutive states differ in more than one vertex")

    def __len__(self) -> int:
        return len(self.states)

    def sets(self) -> list[VertexSet]:
        return [VertexSet(s, self.graph.num_vertices) for s in self.states]

    def to_list(self) -> list[int]:
        return list(self.states)


def run_realization(g: Graph, init: VertexSet, steps: int, rng) -> Realization:
    if not is_independent(g, init):
        raise ChainError(f"initial state {init!r} is not independent in the graph")
    if steps < 0:
        raise ChainError("steps must be non-negative")
    states = _kernels.run_chain(np.array(g.adjacency, dtype=np.uint64), init.bits, steps, rng)
    return Realization(g, tuple(int(s) for s in states))


def transition_matrix(g: Graph, limit: int = DEFAULT_STATE_LIMIT) -> tuple[list[int], np.ndarray]:
    """Exact transition matrix over I(G) in canonical (numeric) state order.

    Returns ``(states, P)`` with ``P[x, y]`` equal to the number of vertex
    draws moving ``states[x]`` to ``states[y]``, divided by N.
    """
    states = independent_masks(g)
    if len(states) > limit:
        raise ChainError(f"state space {len(states)} exceeds limit {limit}")
    index = {s: i for i, s in enumerate(states)}
    n = g.num_vertices
    counts = np.zeros((len(states), len(states)), dtype=np.int64)
    for i, x in enumerate(states):
        for u in range(n):
            bit = 1 << u
            if x & bit:
                y = x & ~bit
            elif g.adjacency[u] & x:
                y = x
            else:
                y = x | bit
            counts[i, index[y]] += 1
    return states, counts / n


def check_realization(r: Realization) -> bool:
    """True when every state of ``r`` is independent in its graph."""
    return all(is_independent_mask(r.graph, s) for s in r.states)
