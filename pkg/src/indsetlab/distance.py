"""Finite distributions: separation distance, total variation, mixture split."""

from __future__ import annotations

import math
from collections import Counter
from typing import Hashable, Iterable, Mapping

TOL = 1e-12


class DistributionError(ValueError):
    pass


class MixtureError(DistributionError):
    """``a`` is not a (1 - eps, eps) mixture over ``b``; carries the witness outcome."""

    def __init__(self, witness, a_prob: float, b_prob: float, eps: float):
        super().__init__(
            f"outcome {witness!r}: a={a_prob:.6g} < (1 - {eps:.6g}) * b={b_prob:.6g}")
        self.witness = witness


class Distribution(Mapping):
    """Immutable outcome -> probability table, validated on construction."""

    __slots__ = ("_probs",)

    def __init__(self, probs: Mapping[Hashable, float] | Iterable[tuple[Hashable, float]]):
        items = list(probs.items()) if isinstance(probs, Mapping) else list(probs)
        table = {}
        for key, p in items:
            if key in table:
                raise DistributionError(f"duplicate outcome {key!r}")
            p = float(p)
            if not p >= 0.0:
                raise DistributionError(f"negative probability {p} for {key!r}")
            table[key] = p
        if not table:
            raise DistributionError("empty support")
        total = math.fsum(table.values())
        if abs(total - 1.0) > TOL:
            raise DistributionError(f"probabilities sum to {total!r}")
        self._probs = table

    def __getitem__(self, key):
        return self._probs[key]

    def __iter__(self):
        return iter(self._probs)

    def __len__(self):
        return len(self._probs)

    def prob(self, key) -> float:
        return self._probs.get(key, 0.0)

    @property
    def support(self) -> list:
        return list(self._probs)

    def __repr__(self):
        body = ", ".join(f"{k!r}: {p:.6g}" for k, p in self._probs.items())
        return f"Distribution({{{body}}})"

    def as_table(self) -> list[tuple]:
        """Key/probability rows for reports (keys stringified)."""
        return [(str(k), p) for k, p in self._probs.items()]


def _keys(a: Mapping, b: Mapping) -> list:
    keys = list(a)
    seen = set(keys)
    keys.extend(k for k in b if k not in seen)
    return keys


def separation_distance(a: Mapping, b: Mapping) -> float:
    """Smallest eps >= 0 with ``a(x) >= (1 - eps) b(x)`` for every outcome.

    Outcomes where ``b`` vanishes impose no constraint and are skipped.
    """
    worst = 0.0
    for x in _keys(a, b):
        bx = b.get(x, 0.0)
        if bx > 0.0:
            worst = max(worst, 1.0 - a.get(x, 0.0) / bx)
    return min(max(worst, 0.0), 1.0)


def total_variation(a: Mapping, b: Mapping) -> float:
    tv = 0.5 * sum(abs(a.get(x, 0.0) - b.get(x, 0.0)) for x in _keys(a, b))
    return min(max(tv, 0.0), 1.0)


def mixture_decompose(a: Mapping, b: Mapping, eps: float) -> Distribution:
    """Return gamma with ``a = (1 - eps) b + eps gamma``.

    Requires ``separation_distance(a, b) <= eps``; otherwise raises
    :class:`MixtureError` naming an outcome where ``a(x) < (1 - eps) b(x)``.
    """
    if not 0.0 < eps <= 1.0:
        raise DistributionError(f"eps={eps} outside (0, 1]")
    gamma = {}
    for x in _keys(a, b):
        ax, bx = a.get(x, 0.0), b.get(x, 0.0)
        g = (ax - (1.0 - eps) * bx) / eps
        if g < -TOL:
            raise MixtureError(x, ax, bx, eps)
        gamma[x] = max(g, 0.0)
    total = math.fsum(gamma.values())
    if abs(total - 1.0) > TOL:
        gamma = {x: g / total for x, g in gamma.items()}
    return Distribution(gamma)


def empirical_distribution(samples: Iterable[Hashable], support: Iterable[Hashable] | None = None) -> Distribution:
    counts = Counter(samples)
    total = sum(counts.values())
    if total == 0:
        raise DistributionError("no samples")
    table = {}
    if support is not None:
        for key in support:
            table[key] = counts.get(key, 0) / total
        missing = set(counts) - set(table)
        if missing:
            raise DistributionError(f"samples outside the declared support: {sorted(map(repr, missing))[:5]}")
    else:
        for key, c in counts.items():
            table[key] = c / total
    return Distribution(table)


def uniform_over(keys: Iterable[Hashable]) -> Distribution:
    keys = list(keys)
    if not keys:
        raise DistributionError("uniform distribution over an empty set")
    p = 1.0 / len(keys)
    return Distribution((k, p) for k in keys)
