"""Approximate counting of independent sets by a telescoping product of sampled ratios.

|I(G)| = 2^N * prod_k |I(G_k)| / |I(G_{k-1})|, and each ratio is the chance
that a uniform independent set of G_{k-1} avoids the k-th edge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from statistics import median_low

from ._kernels import derive_seed
from .graph import Graph, is_independent_mask, prefix_graph
from .matching import Backend
from .sampler import SamplerConfig, sample_independent_set

SAMPLE_CONSTANT = 128
LOW_RATIO = Fraction(1, 4)
LOW_RATIO_MIN_SAMPLES = 1000


class CountingError(ValueError):
    pass


@dataclass(frozen=True)
class RatioEstimate:
    accepted: int
    samples: int
    fallbacks: int

    @property
    def value(self) -> Fraction:
        return Fraction(self.accepted, self.samples)


@dataclass(frozen=True)
class CountEstimate:
    value: Fraction
    num_vertices: int
    epsilon0: float
    rho: float | None
    samples_per_ratio: int
    sampler_epsilon: Fraction
    ratios: tuple[RatioEstimate, ...] = ()
    runs: tuple["CountEstimate", ...] = ()
    max_degree: int = 0
    warnings: tuple[str, ...] = field(default=())

    def reconstruct(self) -> Fraction:
        """Value recomputed from the logged acceptance counts."""
        if self.runs:
            return median_low([r.reconstruct() for r in self.runs])
        v = Fraction(2 ** self.num_vertices)
        for r in self.ratios:
            v *= r.value
        return v

    def as_dict(self) -> dict:
        d = {
            "value": float(self.value),
            "value_exact": str(self.value),
            "epsilon0": self.epsilon0,
            "rho": self.rho,
            "samples_per_ratio": self.samples_per_ratio,
            "sampler_epsilon": str(self.sampler_epsilon),
            "max_degree": self.max_degree,
            "ratios": [[r.accepted, r.samples, r.fallbacks] for r in self.ratios],
            "warnings": list(self.warnings),
        }
        if self.runs:
            d["runs"] = [str(r.value) for r in self.runs]
        return d


def samples_per_ratio(m: int, eps0: float) -> int:
    return math.ceil(SAMPLE_CONSTANT * m / (eps0 * eps0))


def median_repetitions(rho: float) -> int:
    return math.ceil(16 * math.log(2 / rho))


def estimate_ratio(g_prev: Graph, g_next: Graph, s: int, cfg: SamplerConfig) -> RatioEstimate:
    """Fraction of ``s`` sampler draws on ``g_prev`` that are independent in ``g_next``.

    Draw j uses seed ``derive_seed(cfg.seed, j)``; fallback outputs count as
    ordinary draws.
    """
    if s < 1:
        raise CountingError("need at least one sample")
    if g_prev.num_vertices != g_next.num_vertices:
        raise CountingError("graphs differ in vertex count")
    accepted = fallbacks = 0
    for j in range(s):
        out = sample_independent_set(g_prev, cfg.with_seed(derive_seed(cfg.seed, j)))
        fallbacks += out.failed
        accepted += is_independent_mask(g_next, out.output.bits)
    return RatioEstimate(accepted, s, fallbacks)


def count_fpras(g: Graph, eps0: float, seed: int, backend: Backend | str = "exact",
                samples: int | None = None) -> CountEstimate:
    """Telescoping-product estimate of |I(G)|.

    Ratio k is estimated from ``ceil(128 m / eps0^2)`` draws (or ``samples``)
    of the sampler run on G_{k-1} with tolerance eps0 / (6m) and seed
    ``derive_seed(seed, k)``.
    """
    if not 0 < eps0 < 1:
        raise CountingError(f"epsilon0={eps0} outside (0, 1)")
    if isinstance(backend, str):
        backend = Backend.parse(backend)
    m = g.m
    s = samples if samples is not None else samples_per_ratio(m, eps0)
    sampler_eps = Fraction(eps0) / (6 * m) if m else Fraction(eps0)
    value = Fraction(2 ** g.num_vertices)
    ratios = []
    warnings = []
    for k in range(1, m + 1):
        cfg = SamplerConfig(sampler_eps, derive_seed(seed, k), backend)
        r = estimate_ratio(prefix_graph(g, k - 1), prefix_graph(g, k), s, cfg)
        ratios.append(r)
        value *= r.value
        if r.value < LOW_RATIO and s >= LOW_RATIO_MIN_SAMPLES:
            warnings.append(f"ratio {k} estimate {float(r.value):.4f} below {float(LOW_RATIO)}")
    return CountEstimate(value, g.num_vertices, eps0, None, s, sampler_eps, tuple(ratios),
                         max_degree=g.max_degree, warnings=tuple(warnings))


def boost_median(g: Graph, eps0: float, rho: float, seed: int, backend: Backend | str = "exact",
                 samples: int | None = None) -> CountEstimate:
    """Median of ``ceil(16 ln(2/rho))`` independent estimates.

    Run i uses seed ``derive_seed(seed, i)``. With an even number of runs
    the lower median is returned, so the result is always one of the runs.
    """
    if not 0 < rho < 0.5:
        raise CountingError(f"rho={rho} outside (0, 1/2)")
    k = median_repetitions(rho)
    runs = tuple(count_fpras(g, eps0, derive_seed(seed, i), backend, samples) for i in range(k))
    value = median_low([r.value for r in runs])
    warnings = tuple(w for r in runs for w in r.warnings)
    return CountEstimate(value, g.num_vertices, eps0, rho, runs[0].samples_per_ratio,
                         runs[0].sampler_epsilon, runs=runs, max_degree=g.max_degree, warnings=warnings)
