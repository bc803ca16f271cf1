"""Matrix-of-chains sampler for independent sets.

For each repetition, n random subsets are evolved edge by edge through the
prefix graphs G_0, G_1, ..., G_m. In round k every current set runs n steps
of the insert/delete chain on G_{k-1}; the resulting n x n matrix is reduced
to its skeleton with respect to I(G_k) and a uniformly drawn perfect matching
of that skeleton supplies the next n sets. A repetition fails when some
skeleton has no perfect matching. After R failed repetitions the output is
the single vertex 0.

Randomness is split into named streams derived from the master seed:

* starts of repetition r: ``(seed, r, 0, i)``
* chain run i of repetition r, round k: ``(seed, r, k, i)``
* matching draw of repetition r, round k: ``(seed, r, k, PM_STREAM)``
* isolated-vertex coins: ``(seed, 0)``
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import _kernels
from ._kernels import PM_STREAM, Xoshiro256, derive_seed
from .anchored import AnchoredMatrix, h_skeleton, value_vector
from .graph import Graph, VertexSet, is_independent, prefix_graph
from .matching import Backend, PerfectMatching, max_matching

MAX_VERTICES = 64


class SamplerError(ValueError):
    pass


def _as_fraction(eps) -> Fraction:
    try:
        f = Fraction(eps)
    except (TypeError, ValueError):
        raise SamplerError(f"epsilon {eps!r} is not a number") from None
    if not 0 < f <= 1:
        raise SamplerError(f"epsilon {eps} outside (0, 1]")
    return f


def repetitions_for(eps) -> int:
    """Smallest R with 2**R >= 2/eps."""
    target = 2 / _as_fraction(eps)
    r = 0
    while 2 ** r < target:
        r += 1
    return r


@dataclass(frozen=True)
class Parameters:
    n: int
    R: int
    delta_exponent: int

    def as_dict(self) -> dict:
        return {"n": self.n, "R": self.R, "delta": f"2^{self.delta_exponent}"}


def derive_parameters(g: Graph, eps) -> Parameters:
    """n = 2N^2, R = ceil(log2(2/eps)), delta = 2^-(n + R m + 1) kept as an exponent."""
    R = repetitions_for(eps)
    n = 2 * g.num_vertices ** 2
    return Parameters(n, R, -(n + R * g.m + 1))


@dataclass(frozen=True)
class SamplerConfig:
    epsilon: float | Fraction = 0.1
    seed: int = 0
    backend: Backend = field(default_factory=Backend)
    n: int | None = None
    R: int | None = None

    def __post_init__(self):
        _as_fraction(self.epsilon)
        if isinstance(self.backend, str):
            object.__setattr__(self, "backend", Backend.parse(self.backend))
        if self.n is not None and self.n < 1:
            raise SamplerError("n override must be positive")
        if self.R is not None and self.R < 1:
            raise SamplerError("R override must be positive")
        if not 0 <= self.seed < 2 ** 64:
            raise SamplerError("seed must fit in 64 bits")

    def parameters(self, g: Graph) -> Parameters:
        p = derive_parameters(g, self.epsilon)
        n = self.n if self.n is not None else p.n
        R = self.R if self.R is not None else p.R
        return Parameters(n, R, -(n + R * g.m + 1))

    def with_seed(self, seed: int) -> "SamplerConfig":
        return SamplerConfig(self.epsilon, seed, self.backend, self.n, self.R)

    def as_dict(self) -> dict:
        return {"epsilon": str(self.epsilon), "seed": self.seed, "backend": str(self.backend), "n": self.n, "R": self.R}


@dataclass(frozen=True)
class RoundRecord:
    repetition: int
    round: int
    hpm_found: bool
    skeleton_ones: int
    n: int

    @property
    def density(self) -> float:
        return self.skeleton_ones / (self.n * self.n) if self.n else 1.0


@dataclass(frozen=True)
class SamplerOutcome:
    output: VertexSet
    failed: bool
    repetitions_used: int
    failures: int
    trace: tuple[RoundRecord, ...]
    params: Parameters

    def as_dict(self) -> dict:
        return {
            "output": sorted(self.output),
            "failed": self.failed,
            "repetitions_used": self.repetitions_used,
            "failures": self.failures,
            "params": self.params.as_dict(),
            "trace": [[t.repetition, t.round, t.hpm_found, round(t.density, 6)] for t in self.trace],
        }


@dataclass(frozen=True)
class RoundFailure:
    """No perfect matching in the round's skeleton."""

    skeleton_ones: int


def initial_sets(g0: Graph, n: int, seed: int, repetition: int = 1) -> list[VertexSet]:
    """n independent uniform subsets of the vertex set."""
    if g0.m:
        raise SamplerError("initial sets are drawn on the edgeless graph")
    width = g0.num_vertices
    if width > MAX_VERTICES:
        raise SamplerError(f"at most {MAX_VERTICES} vertices supported")
    full = (1 << width) - 1
    return [VertexSet(Xoshiro256(derive_seed(seed, repetition, 0, i)).next64() & full, width)
            for i in range(n)]


def round_matrix(g_k: Graph, g_next: Graph, starts: Sequence[VertexSet], seed: int,
                 repetition: int, rnd: int) -> AnchoredMatrix:
    """The n x n matrix of chain states for one round."""
    adj = np.array(g_k.adjacency, dtype=np.uint64)
    ent = _kernels.round_matrix(adj, [s.bits for s in starts], len(starts), seed, repetition, rnd)
    return AnchoredMatrix(ent, g_k, g_next)


def run_round(g_k: Graph, g_next: Graph, starts: Sequence[VertexSet], backend: Backend,
              seed: int, repetition: int, rnd: int):
    """One round: returns the next starts, or a :class:`RoundFailure`."""
    for s in starts:
        if not is_independent(g_k, s):
            raise SamplerError(f"start {s!r} is not independent in the round's graph")
    x = round_matrix(g_k, g_next, starts, seed, repetition, rnd)
    skel = h_skeleton(x)
    ones = int(skel.bits.sum())
    size, _ = max_matching(skel)
    if size < x.n:
        return RoundFailure(ones)
    pm = PerfectMatching(_kernels.sample_pm(skel.bits, backend.code, backend.steps,
                                            Xoshiro256(derive_seed(seed, repetition, rnd, PM_STREAM))))
    return list(value_vector(x, pm)), ones


@dataclass(frozen=True)
class _Reduced:
    graph: Graph
    kept: tuple[int, ...]
    isolated: tuple[int, ...]


@lru_cache(maxsize=64)
def _reduce(g: Graph) -> _Reduced:
    isolated = g.isolated_vertices
    kept = tuple(v for v in range(g.num_vertices) if v not in set(isolated))
    index = {v: i for i, v in enumerate(kept)}
    edges = tuple((index[u], index[v]) for u, v in g.edges)
    return _Reduced(Graph(max(len(kept), 1), edges), kept, isolated)


def _lift(mask: int, red: _Reduced, seed: int) -> int:
    out = 0
    for i, v in enumerate(red.kept):
        if mask >> i & 1:
            out |= 1 << v
    coins = Xoshiro256(derive_seed(seed, 0))
    for v in red.isolated:
        if coins.next64() & 1:
            out |= 1 << v
    return out


def sample_independent_set(g: Graph, cfg: SamplerConfig, fused: bool = True) -> SamplerOutcome:
    """Draw one independent set of ``g``.

    Isolated vertices are removed first and each is added back with
    probability 1/2 afterwards; n and R are derived from the reduced graph
    unless overridden. ``fused=False`` runs the round-by-round Python path,
    which consumes the same streams and returns the same outcome.
    """
    if g.num_vertices > MAX_VERTICES:
        raise SamplerError(f"at most {MAX_VERTICES} vertices supported")
    red = _reduce(g)
    rg = red.graph
    if not red.kept:
        params = Parameters(0, cfg.R or repetitions_for(cfg.epsilon), -1)
        return SamplerOutcome(VertexSet(_lift(0, red, cfg.seed), g.num_vertices), False, 1, 0, (), params)
    params = cfg.parameters(rg)
    if fused:
        eu = np.array([e[0] for e in rg.edges], dtype=np.int64)
        ev = np.array([e[1] for e in rg.edges], dtype=np.int64)
        mask, failed, reps, failures, trace = _kernels.sample_is(
            rg.num_vertices, eu, ev, params.n, params.R, cfg.backend.code, cfg.backend.steps, cfg.seed)
        records = tuple(RoundRecord(int(r), int(k), bool(ok), int(ones), params.n) for r, k, ok, ones in trace)
    else:
        mask, failed, reps, failures, records = _modular(rg, cfg, params)
    if failed:
        out = VertexSet(1, g.num_vertices)
    else:
        out = VertexSet(_lift(int(mask), red, cfg.seed), g.num_vertices)
    return SamplerOutcome(out, bool(failed), int(reps), int(failures), records, params)


def _modular(g: Graph, cfg: SamplerConfig, params: Parameters):
    records = []
    failures = 0
    prefixes = [prefix_graph(g, k) for k in range(g.m + 1)]
    for rep in range(1, params.R + 1):
        starts = initial_sets(prefixes[0], params.n, cfg.seed, rep)
        ok = True
        for rnd in range(1, g.m + 1):
            res = run_round(prefixes[rnd - 1], prefixes[rnd], starts, cfg.backend, cfg.seed, rep, rnd)
            if isinstance(res, RoundFailure):
                failures += 1
                records.append(RoundRecord(rep, rnd, False, res.skeleton_ones, params.n))
                ok = False
                break
            starts, ones = res
            records.append(RoundRecord(rep, rnd, True, ones, params.n))
        if ok:
            return starts[0].bits, False, rep, failures, tuple(records)
    return 1, True, params.R, failures, tuple(records)


def sample_many(g: Graph, cfg: SamplerConfig, count: int) -> list[SamplerOutcome]:
    """``count`` independent draws; draw j uses seed ``derive_seed(cfg.seed, j)``."""
    return [sample_independent_set(g, cfg.with_seed(derive_seed(cfg.seed, j))) for j in range(count)]


def sample_masks(g: Graph, cfg: SamplerConfig, count: int) -> tuple[list[int], int]:
    """Output bit patterns of :func:`sample_many` plus the number of fallback outputs.

    Skips the per-draw bookkeeping; results are identical to ``sample_many``.
    """
    if g.num_vertices > MAX_VERTICES:
        raise SamplerError(f"at most {MAX_VERTICES} vertices supported")
    red = _reduce(g)
    if not red.kept:
        return [_lift(0, red, derive_seed(cfg.seed, j)) for j in range(count)], 0
    params = cfg.parameters(red.graph)
    eu = np.array([e[0] for e in red.graph.edges], dtype=np.int64)
    ev = np.array([e[1] for e in red.graph.edges], dtype=np.int64)
    masks = []
    fallbacks = 0
    for j in range(count):
        seed = derive_seed(cfg.seed, j)
        mask, failed = _kernels.sample_is(red.graph.num_vertices, eu, ev, params.n, params.R,
                                          cfg.backend.code, cfg.backend.steps, seed)[:2]
        if failed:
            fallbacks += 1
            masks.append(1)
        else:
            masks.append(_lift(int(mask), red, seed))
    return masks, fallbacks
