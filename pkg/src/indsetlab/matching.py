"""Perfect matchings of square 0-1 matrices.

A skeleton is read as the bi-adjacency matrix of a balanced bipartite graph
with rows on one side and columns on the other. A perfect matching is stored
column-wise: ``rows[j]`` is the row matched to column ``j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import _kernels

DEFAULT_PERMANENT_LIMIT = 24
ENUMERATION_LIMIT = 8


class MatchingError(ValueError):
    pass


class Skeleton:
    """Square 0-1 grid; immutable view over a ``uint8`` array."""

    __slots__ = ("bits",)

    def __init__(self, bits):
        arr = np.array(bits, dtype=np.uint8, copy=True)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise MatchingError(f"skeleton must be square, got shape {arr.shape}")
        if arr.size and arr.max() > 1:
            raise MatchingError("skeleton entries must be 0 or 1")
        arr.setflags(write=False)
        self.bits = arr

    @property
    def n(self) -> int:
        return self.bits.shape[0]

    @classmethod
    def from_text(cls, text: str) -> "Skeleton":
        rows = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
        return cls([[1 if ch == "1" else 0 for ch in row] for row in rows])

    def to_text(self) -> str:
        return "\n".join("".join("1" if b else "0" for b in row) for row in self.bits) + "\n"

    @classmethod
    def identity(cls, n: int) -> "Skeleton":
        return cls(np.eye(n, dtype=np.uint8))

    @classmethod
    def ones(cls, n: int) -> "Skeleton":
        return cls(np.ones((n, n), dtype=np.uint8))

    def __eq__(self, other):
        return isinstance(other, Skeleton) and np.array_equal(self.bits, other.bits)

    def __hash__(self):
        return hash((self.n, self.bits.tobytes()))

    def __repr__(self):
        return f"Skeleton({self.to_text().strip().replace(chr(10), '/')})"


@dataclass(frozen=True)
class PerfectMatching:
    rows: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(int(r) for r in self.rows))
        n = len(self.rows)
        if sorted(self.rows) != list(range(n)):
            raise MatchingError(f"row vector {self.rows} is not a permutation of 0..{n - 1}")

    @property
    def n(self) -> int:
        return len(self.rows)

    def fits(self, s: Skeleton) -> bool:
        """True when every matched cell of ``s`` is a 1."""
        return s.n == self.n and all(s.bits[i, j] for j, i in enumerate(self.rows))


@dataclass(frozen=True)
class Backend:
    """Perfect-matching sampler choice: ``exact`` or ``mcmc`` with a step count."""

    kind: str = "exact"
    steps: int = 0

    def __post_init__(self):
        if self.kind not in ("exact", "mcmc"):
            raise ValueError(f"unknown backend {self.kind!r}")
        if self.kind == "mcmc" and self.steps < 0:
            raise ValueError("mcmc steps must be non-negative")

    @classmethod
    def parse(cls, text: str) -> "Backend":
        if text == "exact":
            return cls("exact")
        if text.startswith("mcmc:"):
            try:
                return cls("mcmc", int(text[5:]))
            except ValueError:
                pass
        raise ValueError(f"backend must be 'exact' or 'mcmc:<steps>', got {text!r}")

    @property
    def code(self) -> int:
        return _kernels.BACKEND_MCMC if self.kind == "mcmc" else _kernels.BACKEND_EXACT

    def __str__(self) -> str:
        return "exact" if self.kind == "exact" else f"mcmc:{self.steps}"


def max_matching(s: Skeleton) -> tuple[int, tuple[int, ...]]:
    """Maximum matching by Hopcroft-Karp; unmatched columns map to -1."""
    size, rows = _kernels.max_matching(s.bits)
    return int(size), tuple(int(r) for r in rows)


def has_perfect_matching(s: Skeleton) -> bool:
    return max_matching(s)[0] == s.n


def count_pm(s: Skeleton, limit: int = DEFAULT_PERMANENT_LIMIT) -> int:
    """Exact number of perfect matchings (the permanent), by Ryser's formula."""
    if s.n > limit:
        raise MatchingError(f"n={s.n} exceeds permanent limit {limit}")
    return int(_kernels.permanent(s.bits))


def sample_pm_exact(s: Skeleton, rng, method: str = "auto",
                    limit: int = DEFAULT_PERMANENT_LIMIT) -> PerfectMatching:
    """Exactly uniform perfect matching.

    ``method="permanent"`` fixes columns left to right, picking each row with
    probability proportional to the permanent of the remaining minor.
    ``method="rejection"`` uses the bound-driven rejection sampler, which has
    no size limit. ``auto`` takes the permanent route up to n = 12.
    """
    if not has_perfect_matching(s):
        raise MatchingError("skeleton has no perfect matching")
    if method == "auto":
        method = "permanent" if s.n <= _kernels.SEQUENTIAL_MAX else "rejection"
    if method == "permanent":
        if s.n > limit:
            raise MatchingError(f"n={s.n} exceeds permanent limit {limit}")
        rows = _kernels.sample_pm_sequential(s.bits, rng)
    elif method == "rejection":
        rows, _ = _kernels.sample_pm_rejection(s.bits, rng)
    else:
        raise ValueError(f"unknown method {method!r}")
    return PerfectMatching(rows)


def sample_pm_mcmc(s: Skeleton, steps: int, rng, init: PerfectMatching | None = None) -> PerfectMatching:
    """Lazy Metropolis walk over perfect matchings, started from Hopcroft-Karp output.

    Each non-lazy step rotates the matched rows of a random ordered set of
    2..n columns and keeps the move when all new cells are 1s. The proposal
    is symmetric, so the uniform distribution is stationary.
    """
    if init is None:
        size, rows = max_matching(s)
        if size < s.n:
            raise MatchingError("skeleton has no perfect matching")
        init = PerfectMatching(rows)
    elif not init.fits(s):
        raise MatchingError("initial matching does not fit the skeleton")
    return PerfectMatching(_kernels.sample_pm_mcmc(s.bits, np.array(init.rows), steps, rng))


def sample_pm(s: Skeleton, backend: Backend, rng) -> PerfectMatching:
    if backend.kind == "mcmc":
        return sample_pm_mcmc(s, backend.steps, rng)
    return sample_pm_exact(s, rng)


def enumerate_pms(s: Skeleton, limit: int = ENUMERATION_LIMIT) -> list[PerfectMatching]:
    """All perfect matchings in lexicographic order of their row vectors."""
    n = s.n
    if n > limit:
        raise MatchingError(f"n={n} exceeds enumeration limit {limit}")
    bits = s.bits.tolist()
    out: list[PerfectMatching] = []
    rows: list[int] = []
    used = [False] * n

    def extend(j: int) -> None:
        if j == n:
            out.append(PerfectMatching(rows))
            return
        for i in range(n):
            if not used[i] and bits[i][j]:
                used[i] = True
                rows.append(i)
                extend(j + 1)
                rows.pop()
                used[i] = False

    extend(0)
    return out


def random_skeleton(n: int, p: float, rng) -> Skeleton:
    """i.i.d. Bernoulli(p) entries drawn row-major from ``rng``."""
    return Skeleton(_kernels.bernoulli_skeleton(n, p, rng))


def pm_distribution_key(m: PerfectMatching) -> tuple[int, ...]:
    return m.rows


def matchings_from_rows(rows: Iterable[Sequence[int]]) -> list[PerfectMatching]:
    return [PerfectMatching(r) for r in rows]
