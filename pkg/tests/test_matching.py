import math
from collections import Counter
from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from indsetlab._kernels import Xoshiro256
from indsetlab.matching import (
    Backend, MatchingError, PerfectMatching, Skeleton, count_pm, enumerate_pms, has_perfect_matching,
    max_matching, random_skeleton, sample_pm, sample_pm_exact, sample_pm_mcmc,
)


def naive_permanent(bits):
    n = len(bits)
    return sum(all(bits[p[j]][j] for j in range(n)) for p in permutations(range(n)))


def naive_max_matching(bits):
    n = len(bits)
    best = 0
    for p in permutations(range(n)):
        best = max(best, sum(1 for j in range(n) if bits[p[j]][j]))
    return best


skeletons = st.integers(1, 6).flatmap(
    lambda n: st.lists(st.lists(st.integers(0, 1), min_size=n, max_size=n), min_size=n, max_size=n))


@settings(max_examples=200, deadline=None)
@given(skeletons)
def test_oracles_agree(bits):
    s = Skeleton(bits)
    size, rows = max_matching(s)
    assert size == naive_max_matching(bits)
    matched = [r for r in rows if r >= 0]
    assert len(matched) == size == len(set(matched))
    assert all(bits[r][j] for j, r in enumerate(rows) if r >= 0)
    assert count_pm(s) == naive_permanent(bits) == len(enumerate_pms(s))
    assert has_perfect_matching(s) == (count_pm(s) > 0)


def test_examples():
    assert count_pm(Skeleton.ones(3)) == 6
    assert count_pm(Skeleton.identity(4)) == 1
    assert enumerate_pms(Skeleton.identity(3)) == [PerfectMatching((0, 1, 2))]
    zero_row = Skeleton.from_text("000\n111\n111")
    assert not has_perfect_matching(zero_row)
    # Hall violator: two columns share a single row.
    assert not has_perfect_matching(Skeleton.from_text("110\n001\n001"))
    for n in range(1, 11):
        assert count_pm(Skeleton.ones(n)) == math.factorial(n)


def test_text_round_trip():
    s = Skeleton.from_text("10\n11\n")
    assert s.to_text() == "10\n11\n"
    with pytest.raises(MatchingError):
        Skeleton([[0, 1, 1]])
    with pytest.raises(MatchingError):
        Skeleton([[2]])


def test_matching_invariants():
    with pytest.raises(MatchingError):
        PerfectMatching((0, 0))
    assert PerfectMatching((1, 0)).fits(Skeleton.ones(2))
    assert not PerfectMatching((1, 0)).fits(Skeleton.identity(2))


def test_limits():
    with pytest.raises(MatchingError):
        count_pm(Skeleton.ones(25))
    with pytest.raises(MatchingError):
        enumerate_pms(Skeleton.ones(9))
    with pytest.raises(MatchingError):
        sample_pm_exact(Skeleton.identity(2), Xoshiro256(0), method="permanent", limit=1)
    with pytest.raises(MatchingError):
        sample_pm_exact(Skeleton.from_text("00\n11"), Xoshiro256(0))


def test_backend_parse():
    assert Backend.parse("exact") == Backend()
    assert Backend.parse("mcmc:100") == Backend("mcmc", 100)
    assert str(Backend("mcmc", 7)) == "mcmc:7"
    for bad in ("mcmc", "mcmc:x", "gibbs", "mcmc:-1"):
        with pytest.raises(ValueError):
            Backend.parse(bad)


def test_identity_forces_unique_matching():
    s = Skeleton.identity(6)
    r = Xoshiro256(0)
    for method in ("permanent", "rejection"):
        assert sample_pm_exact(s, r, method).rows == tuple(range(6))
    assert sample_pm_mcmc(s, 50, r).rows == tuple(range(6))


@pytest.mark.parametrize("method", ["permanent", "rejection"])
def test_exact_samplers_uniform(method):
    s = Skeleton.from_text("1110\n1101\n0111\n1011")
    pms = enumerate_pms(s)
    r = Xoshiro256(42)
    draws = Counter(sample_pm_exact(s, r, method) for _ in range(20_000))
    assert set(draws) <= set(pms)
    obs = [draws[m] for m in pms]
    assert stats.chisquare(obs).pvalue > 1e-4


def test_rejection_large_skeleton_is_valid():
    r = Xoshiro256(5)
    s = random_skeleton(40, 0.7, r)
    while not has_perfect_matching(s):
        s = random_skeleton(40, 0.7, r)
    m = sample_pm_exact(s, r)
    assert m.fits(s)


def test_mcmc_long_run_uniform():
    s = Skeleton.from_text("110\n111\n011")
    pms = enumerate_pms(s)
    r = Xoshiro256(3)
    draws = Counter(sample_pm(s, Backend("mcmc", 200), r) for _ in range(6000))
    assert stats.chisquare([draws[m] for m in pms]).pvalue > 1e-4


def test_mcmc_zero_steps_returns_start():
    s = Skeleton.ones(4)
    init = PerfectMatching((3, 2, 1, 0))
    assert sample_pm_mcmc(s, 0, Xoshiro256(1), init) == init
    with pytest.raises(MatchingError):
        sample_pm_mcmc(Skeleton.identity(2), 5, Xoshiro256(1), PerfectMatching((1, 0)))


def test_random_skeleton_density():
    s = random_skeleton(200, 0.3, Xoshiro256(8))
    assert abs(s.bits.mean() - 0.3) < 0.01
    assert isinstance(s.bits, np.ndarray)
