"""Pure-Python reference kernels.

Every function here has a twin in ``_ext.pyx`` with the same signature and
the same random-number consumption, so both produce bit-identical results
for identical seeds. Vertex sets are 64-bit masks; skeletons are C-ordered
``uint8`` arrays of shape ``(n, n)`` indexed ``[row, column]``.
"""

from __future__ import annotations

import math

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
KEY_MULT = 0xD1B54A32D192ED03
PM_STREAM = 0xFFFFFFFF
E = math.e

BACKEND_EXACT = 0
BACKEND_MCMC = 1
SEQUENTIAL_MAX = 12


def splitmix64(x: int) -> int:
    z = (x + GOLDEN) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, *keys: int) -> int:
    """Hash a master seed and a path of non-negative keys into a stream seed."""
    h = splitmix64(seed & MASK64)
    for key in keys:
        h = splitmix64(h ^ (((key + 1) * KEY_MULT) & MASK64))
    return h


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & MASK64


class Xoshiro256:
    """xoshiro256** generator seeded through splitmix64."""

    name = "xoshiro256**"

    def __init__(self, seed: int):
        s = seed & MASK64
        self._s = [splitmix64((s + i * GOLDEN) & MASK64) for i in range(4)]

    @property
    def state(self) -> tuple[int, int, int, int]:
        return tuple(self._s)

    @state.setter
    def state(self, value) -> None:
        self._s = [int(v) & MASK64 for v in value]

    def next64(self) -> int:
        s = self._s
        result = (_rotl((s[1] * 5) & MASK64, 7) * 9) & MASK64
        t = (s[1] << 17) & MASK64
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = _rotl(s[3], 45)
        return result

    def randbelow(self, n: int) -> int:
        return self.next64() % n

    def randbelow_big(self, n: int) -> int:
        if n <= MASK64:
            return self.next64() % n
        hi = self.next64()
        lo = self.next64()
        return ((hi << 64) | lo) % n

    def random(self) -> float:
        return (self.next64() >> 11) * (1.0 / 9007199254740992.0)


def _step(adj, n_vertices: int, x: int, u: int) -> int:
    bit = 1 << u
    if x & bit:
        return x & ~bit
    if adj[u] & x:
        return x
    return x | bit


def run_chain(adj, x0: int, steps: int, rng: Xoshiro256) -> np.ndarray:
    nv = len(adj)
    adj = [int(a) for a in adj]
    out = [int(x0)]
    x = int(x0)
    for _ in range(steps):
        x = _step(adj, nv, x, rng.randbelow(nv))
        out.append(x)
    return np.array(out, dtype=np.uint64)


def round_matrix(adj, starts, steps: int, seed: int, rep: int, rnd: int) -> np.ndarray:
    """Run one BIDC realization per start; row ``i`` holds states 1..steps."""
    nv = len(adj)
    adj = [int(a) for a in adj]
    out = np.empty((len(starts), steps), dtype=np.uint64)
    for i, x0 in enumerate(starts):
        rng = Xoshiro256(derive_seed(seed, rep, rnd, i))
        x = int(x0)
        row = out[i]
        for t in range(steps):
            x = _step(adj, nv, x, rng.randbelow(nv))
            row[t] = x
    return out


def edge_skeleton(entries, a: int, b: int) -> np.ndarray:
    both = (1 << a) | (1 << b)
    ent = np.asarray(entries, dtype=np.uint64)
    return ((ent & np.uint64(both)) != np.uint64(both)).astype(np.uint8)


def max_matching(bits) -> tuple[int, np.ndarray]:
    """Hopcroft-Karp with columns on the left; returns (size, row_of_col)."""
    b = np.asarray(bits, dtype=np.uint8)
    n_rows, n_cols = b.shape
    nbrs = [[i for i in range(n_rows) if b[i, j]] for j in range(n_cols)]
    row_of_col = [-1] * n_cols
    col_of_row = [-1] * n_rows
    inf = n_cols + 1
    dist = [0] * n_cols
    size = 0

    def bfs() -> bool:
        queue = []
        for j in range(n_cols):
            if row_of_col[j] < 0:
                dist[j] = 0
                queue.append(j)
            else:
                dist[j] = inf
        found = inf
        head = 0
        while head < len(queue):
            j = queue[head]
            head += 1
            if dist[j] >= found:
                continue
            for i in nbrs[j]:
                jj = col_of_row[i]
                if jj < 0:
                    if found == inf:
                        found = dist[j] + 1
                elif dist[jj] == inf:
                    dist[jj] = dist[j] + 1
                    queue.append(jj)
        return found != inf

    def dfs(j: int) -> bool:
        for i in nbrs[j]:
            jj = col_of_row[i]
            if jj < 0 or (dist[jj] == dist[j] + 1 and dfs(jj)):
                row_of_col[j] = i
                col_of_row[i] = j
                return True
        dist[j] = inf
        return False

    while bfs():
        for j in range(n_cols):
            if row_of_col[j] < 0 and dfs(j):
                size += 1
    return size, np.array(row_of_col, dtype=np.int64)


def permanent(bits) -> int:
    """Ryser's formula with Gray-code subset order."""
    b = np.asarray(bits, dtype=np.uint8)
    n = b.shape[0]
    if n == 0:
        return 1
    cols = [[int(b[i, j]) for i in range(n)] for j in range(n)]
    row_sums = [0] * n
    total = 0
    gray = 0
    for step in range(1, 1 << n):
        j = (step & -step).bit_length() - 1
        gray ^= 1 << j
        sign = 1 if gray & (1 << j) else -1
        col = cols[j]
        for i in range(n):
            row_sums[i] += sign * col[i]
        prod = 1
        for v in row_sums:
            prod *= v
            if prod == 0:
                break
        if prod:
            if (n - bin(gray).count("1")) & 1:
                total -= prod
            else:
                total += prod
    return total


def _submatrix(b: np.ndarray, rows, cols) -> np.ndarray:
    return b[np.ix_(rows, cols)]


def sample_pm_sequential(bits, rng: Xoshiro256) -> np.ndarray:
    """Column-by-column draw with probabilities given by permanent ratios."""
    b = np.asarray(bits, dtype=np.uint8)
    n = b.shape[0]
    rows = list(range(n))
    out = np.empty(n, dtype=np.int64)
    for j in range(n):
        cols = list(range(j + 1, n))
        weights = []
        for idx, i in enumerate(rows):
            if b[i, j]:
                rest = rows[:idx] + rows[idx + 1:]
                weights.append((idx, permanent(_submatrix(b, rest, cols))))
        total = sum(w for _, w in weights)
        if total == 0:
            raise ValueError("skeleton has no perfect matching")
        u = rng.randbelow_big(total)
        for idx, w in weights:
            if u < w:
                out[j] = rows.pop(idx)
                break
            u -= w
    return out


def _h(r: int) -> float:
    if r <= 0:
        return 0.0
    return r + 0.5 * math.log(r) + E - 1.0


def sample_pm_rejection(bits, rng: Xoshiro256, max_attempts: int = 0) -> tuple[np.ndarray, int]:
    """Exact uniform perfect matching by bound-driven self-reducible rejection.

    Each attempt consumes columns one at a time (fewest remaining ones first)
    and picks row ``i`` with probability ``U(A_ij) / U(A)`` where ``U`` is the
    row-sum upper bound on the permanent; leftover mass restarts the attempt.
    A completed attempt emits every perfect matching with probability
    ``1 / U(A)``, so accepted output is exactly uniform.
    """
    b = np.asarray(bits, dtype=np.uint8)
    n = b.shape[0]
    grid = b.tolist()
    h = [_h(r) for r in range(n + 1)]
    g = [0.0] + [h[r - 1] / h[r] for r in range(1, n + 1)]
    row_sum0 = [sum(grid[i]) for i in range(n)]
    col_sum0 = [sum(grid[i][j] for i in range(n)) for j in range(n)]
    attempts = 0
    out = [-1] * n
    while max_attempts <= 0 or attempts < max_attempts:
        attempts += 1
        rs = list(row_sum0)
        cs = list(col_sum0)
        row_alive = [True] * n
        col_alive = [True] * n
        ok = True
        for _ in range(n):
            j = -1
            best = n + 1
            for c in range(n):
                if col_alive[c] and cs[c] < best:
                    best = cs[c]
                    j = c
            cand = [i for i in range(n) if row_alive[i] and grid[i][j]]
            prod = 1.0
            zeros = 0
            zrow = -1
            for k in cand:
                if rs[k] == 1:
                    zeros += 1
                    zrow = k
                else:
                    prod *= g[rs[k]]
            u = rng.random()
            pick = -1
            if zeros == 1:
                if u < (E / h[rs[zrow]]) * prod:
                    pick = zrow
            elif zeros == 0:
                acc = 0.0
                for i in cand:
                    acc += (E / h[rs[i]]) * (prod / g[rs[i]])
                    if u < acc:
                        pick = i
                        break
            if pick < 0:
                ok = False
                break
            out[j] = pick
            row_alive[pick] = False
            col_alive[j] = False
            row = grid[pick]
            for c in range(n):
                if row[c]:
                    cs[c] -= 1
            for k in cand:
                rs[k] -= 1
        if ok:
            return np.array(out, dtype=np.int64), attempts
    raise RuntimeError("rejection sampler exceeded its attempt budget")


def sample_pm_mcmc(bits, init, steps: int, rng: Xoshiro256) -> np.ndarray:
    """Lazy Metropolis walk on perfect matchings via random cyclic row rotations."""
    b = np.asarray(bits, dtype=np.uint8)
    n = b.shape[0]
    grid = b.tolist()
    rows = [int(v) for v in init]
    if n < 2:
        return np.array(rows, dtype=np.int64)
    cols = list(range(n))
    for _ in range(steps):
        if (rng.next64() & 1) == 0:
            continue
        k = 2 + rng.randbelow(n - 1)
        for t in range(k):
            s = t + rng.randbelow(n - t)
            cols[t], cols[s] = cols[s], cols[t]
        valid = True
        for t in range(k):
            if not grid[rows[cols[(t + 1) % k]]][cols[t]]:
                valid = False
                break
        if valid:
            first = rows[cols[0]]
            for t in range(k - 1):
                rows[cols[t]] = rows[cols[t + 1]]
            rows[cols[k - 1]] = first
    return np.array(rows, dtype=np.int64)


def sample_pm(bits, backend: int, mcmc_steps: int, rng: Xoshiro256) -> np.ndarray:
    """Uniform-targeting perfect matching draw; caller guarantees one exists."""
    n = np.asarray(bits).shape[0]
    if backend == BACKEND_MCMC:
        _, init = max_matching(bits)
        return sample_pm_mcmc(bits, init, mcmc_steps, rng)
    if n <= SEQUENTIAL_MAX:
        return sample_pm_sequential(bits, rng)
    return sample_pm_rejection(bits, rng)[0]


def sample_is(n_vertices: int, eu, ev, n: int, reps: int, backend: int,
              mcmc_steps: int, seed: int):
    """Fused Algorithm-1 run on a graph without isolated vertices.

    Returns ``(mask, failed, repetitions_used, failures, trace)`` where trace
    rows are ``(repetition, round, hpm_found, skeleton_ones)``.
    """
    m = len(eu)
    adj = [0] * n_vertices
    full = (1 << n_vertices) - 1 if n_vertices else 0
    trace = []
    failures = 0
    for rep in range(1, reps + 1):
        starts = [Xoshiro256(derive_seed(seed, rep, 0, i)).next64() & full
                  for i in range(n)]
        adj = [0] * n_vertices
        ok = True
        for rnd in range(1, m + 1):
            entries = round_matrix(adj, starts, n, seed, rep, rnd)
            a, b = int(eu[rnd - 1]), int(ev[rnd - 1])
            skel = edge_skeleton(entries, a, b)
            ones = int(skel.sum())
            size, _ = max_matching(skel)
            if size < n:
                failures += 1
                trace.append((rep, rnd, False, ones))
                ok = False
                break
            trace.append((rep, rnd, True, ones))
            pm = sample_pm(skel, backend, mcmc_steps,
                           Xoshiro256(derive_seed(seed, rep, rnd, PM_STREAM)))
            starts = [int(entries[pm[j], j]) for j in range(n)]
            adj[a] |= 1 << b
            adj[b] |= 1 << a
        if ok:
            return starts[0] if n else 0, False, rep, failures, trace
    return 1, True, reps, failures, trace


def bernoulli_skeleton(n: int, p: float, rng: Xoshiro256) -> np.ndarray:
    out = np.empty((n, n), dtype=np.uint8)
    for i in range(n):
        for j in range(n):
            out[i, j] = 1 if rng.random() < p else 0
    return out


def no_pm_count(n: int, p: float, trials: int, seed: int) -> int:
    """Number of i.i.d. Bernoulli(p) skeletons (out of ``trials``) without a PM."""
    count = 0
    for t in range(trials):
        skel = bernoulli_skeleton(n, p, Xoshiro256(derive_seed(seed, t)))
        if max_matching(skel)[0] < n:
            count += 1
    return count


def stationary_skeletons(adj, states, a: int, b: int, n: int, trials: int,
                         seed: int) -> np.ndarray:
    """Skeletons of round matrices whose starts are uniform over ``states``."""
    out = np.empty((trials, n, n), dtype=np.uint8)
    k = len(states)
    for t in range(trials):
        pick = Xoshiro256(derive_seed(seed, t, PM_STREAM))
        starts = [int(states[pick.randbelow(k)]) for _ in range(n)]
        entries = round_matrix(adj, starts, n, seed, t, 1)
        out[t] = edge_skeleton(entries, a, b)
    return out


def stationary_matrices(adj, states, n: int, trials: int, seed: int) -> np.ndarray:
    """Round matrices (entries) with starts uniform over ``states``.

    Uses the same streams as :func:`stationary_skeletons`.
    """
    out = np.empty((trials, n, n), dtype=np.uint64)
    k = len(states)
    for t in range(trials):
        pick = Xoshiro256(derive_seed(seed, t, PM_STREAM))
        starts = [int(states[pick.randbelow(k)]) for _ in range(n)]
        out[t] = round_matrix(adj, starts, n, seed, t, 1)
    return out
