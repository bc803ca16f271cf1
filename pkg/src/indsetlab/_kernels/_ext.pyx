# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels; bit-compatible twin of ``_pure``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport log
from libc.stdint cimport uint64_t, int64_t, uint8_t
from libc.stdlib cimport malloc, free

cnp.import_array()

cdef extern from *:
    """
    typedef unsigned __int128 u128_t;
    """
    ctypedef unsigned long long u128_t

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15
cdef uint64_t KEY_MULT = 0xD1B54A32D192ED03

cdef double E_CONST = 2.718281828459045
PM_STREAM = 0xFFFFFFFF
BACKEND_EXACT = 0
BACKEND_MCMC = 1
SEQUENTIAL_MAX = 12
cdef uint64_t C_PM_STREAM = 0xFFFFFFFF
cdef int C_SEQUENTIAL_MAX = 12


cdef inline uint64_t _splitmix(uint64_t x) noexcept nogil:
    cdef uint64_t z = x + GOLDEN
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EB
    return z ^ (z >> 31)


cdef inline uint64_t _mix_key(uint64_t h, uint64_t key) noexcept nogil:
    return _splitmix(h ^ ((key + 1) * KEY_MULT))


def splitmix64(x):
    return _splitmix(<uint64_t>(x & 0xFFFFFFFFFFFFFFFF))


def derive_seed(seed, *keys):
    cdef uint64_t h = _splitmix(<uint64_t>(seed & 0xFFFFFFFFFFFFFFFF))
    for key in keys:
        h = _mix_key(h, <uint64_t>key)
    return h


cdef inline uint64_t _rotl(uint64_t x, int k) noexcept nogil:
    return (x << k) | (x >> (64 - k))


cdef struct rng_t:
    uint64_t s0, s1, s2, s3


cdef inline void _seed(rng_t* r, uint64_t seed) noexcept nogil:
    r.s0 = _splitmix(seed)
    r.s1 = _splitmix(seed + GOLDEN)
    r.s2 = _splitmix(seed + 2 * GOLDEN)
    r.s3 = _splitmix(seed + 3 * GOLDEN)


cdef inline uint64_t _next(rng_t* r) noexcept nogil:
    cdef uint64_t result = _rotl(r.s1 * 5, 7) * 9
    cdef uint64_t t = r.s1 << 17
    r.s2 ^= r.s0
    r.s3 ^= r.s1
    r.s1 ^= r.s2
    r.s0 ^= r.s3
    r.s2 ^= t
    r.s3 = _rotl(r.s3, 45)
    return result


cdef inline double _random(rng_t* r) noexcept nogil:
    return (_next(r) >> 11) * (1.0 / 9007199254740992.0)


cdef class Xoshiro256:
    """xoshiro256** generator seeded through splitmix64."""

    cdef rng_t r
    name = "xoshiro256**"

    def __init__(self, seed):
        _seed(&self.r, <uint64_t>(seed & 0xFFFFFFFFFFFFFFFF))

    @property
    def state(self):
        return (self.r.s0, self.r.s1, self.r.s2, self.r.s3)

    @state.setter
    def state(self, value):
        self.r.s0, self.r.s1, self.r.s2, self.r.s3 = [int(v) & 0xFFFFFFFFFFFFFFFF for v in value]

    def next64(self):
        return _next(&self.r)

    def randbelow(self, n):
        return _next(&self.r) % <uint64_t>n

    def randbelow_big(self, n):
        if n <= 0xFFFFFFFFFFFFFFFF:
            return _next(&self.r) % <uint64_t>n
        hi = _next(&self.r)
        lo = _next(&self.r)
        return ((hi << 64) | lo) % n

    def random(self):
        return _random(&self.r)


cdef inline uint64_t _step(const uint64_t* adj, uint64_t x, int u) noexcept nogil:
    cdef uint64_t bit = (<uint64_t>1) << u
    if x & bit:
        return x & ~bit
    if adj[u] & x:
        return x
    return x | bit


def run_chain(adj, x0, int steps, Xoshiro256 rng):
    cdef cnp.ndarray[uint64_t, ndim=1] a = np.ascontiguousarray(adj, dtype=np.uint64)
    cdef int nv = a.shape[0]
    cdef cnp.ndarray[uint64_t, ndim=1] out = np.empty(steps + 1, dtype=np.uint64)
    cdef uint64_t x = <uint64_t>x0
    cdef int t
    out[0] = x
    for t in range(steps):
        x = _step(&a[0], x, <int>(_next(&rng.r) % <uint64_t>nv))
        out[t + 1] = x
    return out


cdef void _round_matrix(const uint64_t* adj, int nv, const uint64_t* starts, int n_rows,
                        int steps, uint64_t base, uint64_t* out) noexcept nogil:
    cdef int i, t
    cdef rng_t r
    cdef uint64_t x
    for i in range(n_rows):
        _seed(&r, _mix_key(base, <uint64_t>i))
        x = starts[i]
        for t in range(steps):
            x = _step(adj, x, <int>(_next(&r) % <uint64_t>nv))
            out[i * steps + t] = x


cdef uint64_t _base3(uint64_t seed, uint64_t a, uint64_t b) noexcept nogil:
    return _mix_key(_mix_key(_splitmix(seed), a), b)


def round_matrix(adj, starts, int steps, seed, rep, rnd):
    """Run one BIDC realization per start; row ``i`` holds states 1..steps."""
    cdef cnp.ndarray[uint64_t, ndim=1] a = np.ascontiguousarray(adj, dtype=np.uint64)
    cdef cnp.ndarray[uint64_t, ndim=1] s = np.ascontiguousarray(starts, dtype=np.uint64)
    cdef int n_rows = s.shape[0]
    cdef cnp.ndarray[uint64_t, ndim=2] out = np.empty((n_rows, steps), dtype=np.uint64)
    cdef uint64_t base = _base3(<uint64_t>(seed & 0xFFFFFFFFFFFFFFFF), <uint64_t>rep, <uint64_t>rnd)
    if n_rows and steps:
        _round_matrix(&a[0], a.shape[0], &s[0], n_rows, steps, base, &out[0, 0])
    return out


def edge_skeleton(entries, int a, int b):
    cdef uint64_t both = ((<uint64_t>1) << a) | ((<uint64_t>1) << b)
    ent = np.asarray(entries, dtype=np.uint64)
    return ((ent & np.uint64(both)) != np.uint64(both)).astype(np.uint8)


# ---------------------------------------------------------------- matching

cdef struct hk_t:
    int n_rows
    int n_cols
    const uint8_t* bits
    int* row_of_col
    int* col_of_row
    int* dist
    int* queue
    int inf


cdef bint _hk_bfs(hk_t* h) noexcept nogil:
    cdef int j, i, jj, head = 0, tail = 0
    cdef int found = h.inf
    for j in range(h.n_cols):
        if h.row_of_col[j] < 0:
            h.dist[j] = 0
            h.queue[tail] = j
            tail += 1
        else:
            h.dist[j] = h.inf
    while head < tail:
        j = h.queue[head]
        head += 1
        if h.dist[j] >= found:
            continue
        for i in range(h.n_rows):
            if not h.bits[i * h.n_cols + j]:
                continue
            jj = h.col_of_row[i]
            if jj < 0:
                if found == h.inf:
                    found = h.dist[j] + 1
            elif h.dist[jj] == h.inf:
                h.dist[jj] = h.dist[j] + 1
                h.queue[tail] = jj
                tail += 1
    return found != h.inf


cdef bint _hk_dfs(hk_t* h, int j) noexcept nogil:
    cdef int i, jj
    for i in range(h.n_rows):
        if not h.bits[i * h.n_cols + j]:
            continue
        jj = h.col_of_row[i]
        if jj < 0 or (h.dist[jj] == h.dist[j] + 1 and _hk_dfs(h, jj)):
            h.row_of_col[j] = i
            h.col_of_row[i] = j
            return True
    h.dist[j] = h.inf
    return False


cdef int _max_matching(const uint8_t* bits, int n_rows, int n_cols, int* row_of_col) noexcept nogil:
    cdef hk_t h
    cdef int j, size = 0
    h.n_rows = n_rows
    h.n_cols = n_cols
    h.bits = bits
    h.row_of_col = row_of_col
    h.col_of_row = <int*>malloc(max(n_rows, 1) * sizeof(int))
    h.dist = <int*>malloc(max(n_cols, 1) * sizeof(int))
    h.queue = <int*>malloc(max(n_cols, 1) * sizeof(int))
    h.inf = n_cols + 1
    for j in range(n_cols):
        row_of_col[j] = -1
    for j in range(n_rows):
        h.col_of_row[j] = -1
    while _hk_bfs(&h):
        for j in range(n_cols):
            if row_of_col[j] < 0 and _hk_dfs(&h, j):
                size += 1
    free(h.col_of_row)
    free(h.dist)
    free(h.queue)
    return size


def max_matching(bits):
    """Hopcroft-Karp with columns on the left; returns (size, row_of_col)."""
    cdef cnp.ndarray[uint8_t, ndim=2] b = np.ascontiguousarray(bits, dtype=np.uint8)
    cdef int n_rows = b.shape[0], n_cols = b.shape[1]
    cdef cnp.ndarray[int, ndim=1] roc = np.empty(n_cols, dtype=np.intc)
    cdef int size = 0
    if n_rows and n_cols:
        size = _max_matching(&b[0, 0], n_rows, n_cols, &roc[0])
    else:
        roc[:] = -1
    return size, roc.astype(np.int64)


# ---------------------------------------------------------------- permanent

cdef u128_t _ryser(const uint8_t* bits, int stride, const int* rows, const int* cols, int n) noexcept nogil:
    # rows/cols select an n x n submatrix; arithmetic wraps mod 2^128 and the
    # exact result (<= 24!) is recovered because it fits.
    cdef long long row_sums[64]
    cdef u128_t total = 0, prod
    cdef unsigned long long gray = 0, step, nsub
    cdef int i, j, bitcount = 0
    cdef long long sign
    if n == 0:
        return 1
    for i in range(n):
        row_sums[i] = 0
    nsub = (<unsigned long long>1) << n
    step = 1
    while step < nsub:
        j = 0
        while not ((step >> j) & 1):
            j += 1
        gray ^= (<unsigned long long>1) << j
        if (gray >> j) & 1:
            sign = 1
            bitcount += 1
        else:
            sign = -1
            bitcount -= 1
        for i in range(n):
            row_sums[i] += sign * bits[rows[i] * stride + cols[j]]
        prod = 1
        for i in range(n):
            if row_sums[i] == 0:
                prod = 0
                break
            prod = prod * <u128_t>row_sums[i]
        if prod != 0:
            if (n - bitcount) & 1:
                total -= prod
            else:
                total += prod
        step += 1
    return total


cdef object _u128_to_int(u128_t v):
    cdef unsigned long long lo = <unsigned long long>v
    cdef unsigned long long hi = <unsigned long long>(v >> 64)
    return (int(hi) << 64) | int(lo)


def permanent(bits):
    """Ryser's formula with Gray-code subset order."""
    cdef cnp.ndarray[uint8_t, ndim=2] b = np.ascontiguousarray(bits, dtype=np.uint8)
    cdef int n = b.shape[0]
    cdef int idx[64]
    cdef int i
    if n == 0:
        return 1
    if n > 30:
        raise ValueError("permanent kernel supports n <= 30")
    for i in range(n):
        idx[i] = i
    return _u128_to_int(_ryser(&b[0, 0], n, idx, idx, n))


cdef int _sequential(const uint8_t* bits, int n, rng_t* r, int64_t* out) except -2:
    cdef int rows[64]
    cdef int rest[64]
    cdef int cols[64]
    cdef u128_t weights[64]
    cdef u128_t total, u
    cdef int n_alive = n, j, idx, c, k, m
    cdef uint64_t hi, lo
    for idx in range(n):
        rows[idx] = idx
    for j in range(n):
        m = n - j - 1
        for c in range(m):
            cols[c] = j + 1 + c
        total = 0
        for idx in range(n_alive):
            weights[idx] = 0
            if bits[rows[idx] * n + j]:
                k = 0
                for c in range(n_alive):
                    if c != idx:
                        rest[k] = rows[c]
                        k += 1
                weights[idx] = _ryser(bits, n, rest, cols, m)
                total += weights[idx]
        if total == 0:
            return -1
        if total <= <u128_t>0xFFFFFFFFFFFFFFFF:
            u = <u128_t>(_next(r) % <uint64_t>total)
        else:
            hi = _next(r)
            lo = _next(r)
            u = ((<u128_t>hi << 64) | <u128_t>lo) % total
        for idx in range(n_alive):
            if weights[idx] == 0:
                continue
            if u < weights[idx]:
                out[j] = rows[idx]
                for c in range(idx, n_alive - 1):
                    rows[c] = rows[c + 1]
                n_alive -= 1
                break
            u -= weights[idx]
    return 0


def sample_pm_sequential(bits, Xoshiro256 rng):
    """Column-by-column draw with probabilities given by permanent ratios."""
    cdef cnp.ndarray[uint8_t, ndim=2] b = np.ascontiguousarray(bits, dtype=np.uint8)
    cdef int n = b.shape[0]
    cdef cnp.ndarray[int64_t, ndim=1] out = np.empty(n, dtype=np.int64)
    if n > 30:
        raise ValueError("sequential kernel supports n <= 30")
    if n and _sequential(&b[0, 0], n, &rng.r, &out[0]) < 0:
        raise ValueError("skeleton has no perfect matching")
    return out


cdef double _h(int r) noexcept nogil:
    if r <= 0:
        return 0.0
    return r + 0.5 * log(<double>r) + E_CONST - 1.0


cdef long long _rejection(const uint8_t* bits, int n, rng_t* r, int64_t* out,
                          long long max_attempts) noexcept nogil:
    cdef double* h = <double*>malloc((n + 1) * sizeof(double))
    cdef double* g = <double*>malloc((n + 1) * sizeof(double))
    cdef int* rs0 = <int*>malloc(n * sizeof(int))
    cdef int* cs0 = <int*>malloc(n * sizeof(int))
    cdef int* rs = <int*>malloc(n * sizeof(int))
    cdef int* cs = <int*>malloc(n * sizeof(int))
    cdef char* row_alive = <char*>malloc(n)
    cdef char* col_alive = <char*>malloc(n)
    cdef int* cand = <int*>malloc(n * sizeof(int))
    cdef long long attempts = 0
    cdef int i, j, c, k, step, best, n_cand, zeros, zrow, pick
    cdef double prod, u, acc
    cdef bint ok
    cdef long long result = -1
    for i in range(n + 1):
        h[i] = _h(i)
    g[0] = 0.0
    for i in range(1, n + 1):
        g[i] = h[i - 1] / h[i]
    for i in range(n):
        rs0[i] = 0
        cs0[i] = 0
    for i in range(n):
        for j in range(n):
            if bits[i * n + j]:
                rs0[i] += 1
                cs0[j] += 1
    while max_attempts <= 0 or attempts < max_attempts:
        attempts += 1
        for i in range(n):
            rs[i] = rs0[i]
            cs[i] = cs0[i]
            row_alive[i] = 1
            col_alive[i] = 1
        ok = True
        for step in range(n):
            j = -1
            best = n + 1
            for c in range(n):
                if col_alive[c] and cs[c] < best:
                    best = cs[c]
                    j = c
            n_cand = 0
            for i in range(n):
                if row_alive[i] and bits[i * n + j]:
                    cand[n_cand] = i
                    n_cand += 1
            prod = 1.0
            zeros = 0
            zrow = -1
            for k in range(n_cand):
                i = cand[k]
                if rs[i] == 1:
                    zeros += 1
                    zrow = i
                else:
                    prod *= g[rs[i]]
            u = _random(r)
            pick = -1
            if zeros == 1:
                if u < (E_CONST / h[rs[zrow]]) * prod:
                    pick = zrow
            elif zeros == 0:
                acc = 0.0
                for k in range(n_cand):
                    i = cand[k]
                    acc += (E_CONST / h[rs[i]]) * (prod / g[rs[i]])
                    if u < acc:
                        pick = i
                        break
            if pick < 0:
                ok = False
                break
            out[j] = pick
            row_alive[pick] = 0
            col_alive[j] = 0
            for c in range(n):
                if bits[pick * n + c]:
                    cs[c] -= 1
            for k in range(n_cand):
                rs[cand[k]] -= 1
        if ok:
            result = attempts
            break
    free(h)
    free(g)
    free(rs0)
    free(cs0)
    free(rs)
    free(cs)
    free(row_alive)
    free(col_alive)
    free(cand)
    return result


def sample_pm_rejection(bits, Xoshiro256 rng, long long max_attempts=0):
    """Exact uniform perfect matching by bound-driven self-reducible rejection."""
    cdef cnp.ndarray[uint8_t, ndim=2] b = np.ascontiguousarray(bits, dtype=np.uint8)
    cdef int n = b.shape[0]
    cdef cnp.ndarray[int64_t, ndim=1] out = np.empty(n, dtype=np.int64)
    cdef long long attempts
    if n == 0:
        return out, 1
    with nogil:
        attempts = _rejection(&b[0, 0], n, &rng.r, &out[0], max_attempts)
    if attempts < 0:
        raise RuntimeError("rejection sampler exceeded its attempt budget")
    return out, attempts


cdef void _mcmc(const uint8_t* bits, int n, int64_t* rows, long long steps, rng_t* r) noexcept nogil:
    cdef int* cols
    cdef long long it
    cdef int k, t, s, tmp
    cdef int64_t first
    cdef bint valid
    if n < 2:
        return
    cols = <int*>malloc(n * sizeof(int))
    for t in range(n):
        cols[t] = t
    for it in range(steps):
        if (_next(r) & 1) == 0:
            continue
        k = 2 + <int>(_next(r) % <uint64_t>(n - 1))
        for t in range(k):
            s = t + <int>(_next(r) % <uint64_t>(n - t))
            tmp = cols[t]
            cols[t] = cols[s]
            cols[s] = tmp
        valid = True
        for t in range(k):
            if not bits[rows[cols[(t + 1) % k]] * n + cols[t]]:
                valid = False
                break
        if valid:
            first = rows[cols[0]]
            for t in range(k - 1):
                rows[cols[t]] = rows[cols[t + 1]]
            rows[cols[k - 1]] = first
    free(cols)


def sample_pm_mcmc(bits, init, long long steps, Xoshiro256 rng):
    """Lazy Metropolis walk on perfect matchings via random cyclic row rotations."""
    cdef cnp.ndarray[uint8_t, ndim=2] b = np.ascontiguousarray(bits, dtype=np.uint8)
    cdef int n = b.shape[0]
    cdef cnp.ndarray[int64_t, ndim=1] rows = np.array(init, dtype=np.int64)
    if n >= 2:
        with nogil:
            _mcmc(&b[0, 0], n, &rows[0], steps, &rng.r)
    return rows


cdef int _sample_pm(const uint8_t* bits, int n, int backend, long long mcmc_steps,
                    rng_t* r, int64_t* out) except -2:
    cdef int* roc
    cdef int j
    if backend == 1:
        roc = <int*>malloc(n * sizeof(int))
        _max_matching(bits, n, n, roc)
        for j in range(n):
            out[j] = roc[j]
        free(roc)
        _mcmc(bits, n, out, mcmc_steps, r)
        return 0
    if n <= C_SEQUENTIAL_MAX:
        return _sequential(bits, n, r, out)
    if _rejection(bits, n, r, out, 0) < 0:
        return -1
    return 0


def sample_pm(bits, int backend, long long mcmc_steps, Xoshiro256 rng):
    """Uniform-targeting perfect matching draw; caller guarantees one exists."""
    cdef cnp.ndarray[uint8_t, ndim=2] b = np.ascontiguousarray(bits, dtype=np.uint8)
    cdef int n = b.shape[0]
    cdef cnp.ndarray[int64_t, ndim=1] out = np.empty(n, dtype=np.int64)
    if n and _sample_pm(&b[0, 0], n, backend, mcmc_steps, &rng.r, &out[0]) < 0:
        raise ValueError("skeleton has no perfect matching")
    return out


def sample_is(int n_vertices, eu, ev, int n, int reps, int backend,
              long long mcmc_steps, seed):
    """Fused Algorithm-1 run on a graph without isolated vertices.

    Returns ``(mask, failed, repetitions_used, failures, trace)`` where trace
    rows are ``(repetition, round, hpm_found, skeleton_ones)``.
    """
    cdef cnp.ndarray[int64_t, ndim=1] a_u = np.ascontiguousarray(eu, dtype=np.int64)
    cdef cnp.ndarray[int64_t, ndim=1] a_v = np.ascontiguousarray(ev, dtype=np.int64)
    cdef int m = a_u.shape[0]
    cdef uint64_t s = <uint64_t>(seed & 0xFFFFFFFFFFFFFFFF)
    cdef uint64_t full = 0
    cdef uint64_t adj[64]
    cdef uint64_t* starts = <uint64_t*>malloc(n * sizeof(uint64_t))
    cdef uint64_t* entries = <uint64_t*>malloc(n * n * sizeof(uint64_t))
    cdef uint8_t* skel = <uint8_t*>malloc(n * n)
    cdef int* roc = <int*>malloc(n * sizeof(int))
    cdef int64_t* pm = <int64_t*>malloc(n * sizeof(int64_t))
    cdef int rep, rnd, i, j, a, b, size, ones, failures = 0
    cdef uint64_t both
    cdef rng_t r
    cdef bint ok
    trace = []
    if n_vertices > 64:
        raise ValueError("fused kernel supports at most 64 vertices")
    if n_vertices:
        full = ((<uint64_t>1) << n_vertices) - 1 if n_vertices < 64 else <uint64_t>0xFFFFFFFFFFFFFFFF
    try:
        for rep in range(1, reps + 1):
            for i in range(n):
                _seed(&r, _mix_key(_base3(s, rep, 0), <uint64_t>i))
                starts[i] = _next(&r) & full
            for i in range(n_vertices):
                adj[i] = 0
            ok = True
            for rnd in range(1, m + 1):
                _round_matrix(adj, n_vertices, starts, n, n, _base3(s, rep, rnd), entries)
                a = a_u[rnd - 1]
                b = a_v[rnd - 1]
                both = ((<uint64_t>1) << a) | ((<uint64_t>1) << b)
                ones = 0
                for i in range(n * n):
                    skel[i] = (entries[i] & both) != both
                    ones += skel[i]
                size = _max_matching(skel, n, n, roc)
                if size < n:
                    failures += 1
                    trace.append((rep, rnd, False, ones))
                    ok = False
                    break
                trace.append((rep, rnd, True, ones))
                _seed(&r, _mix_key(_base3(s, rep, rnd), C_PM_STREAM))
                if _sample_pm(skel, n, backend, mcmc_steps, &r, pm) < 0:
                    raise RuntimeError("perfect matching sampler failed on a matchable skeleton")
                for j in range(n):
                    starts[j] = entries[pm[j] * n + j]
                adj[a] |= (<uint64_t>1) << b
                adj[b] |= (<uint64_t>1) << a
            if ok:
                return (starts[0] if n else 0), False, rep, failures, trace
        return 1, True, reps, failures, trace
    finally:
        free(starts)
        free(entries)
        free(skel)
        free(roc)
        free(pm)


def bernoulli_skeleton(int n, double p, Xoshiro256 rng):
    cdef cnp.ndarray[uint8_t, ndim=2] out = np.empty((n, n), dtype=np.uint8)
    cdef int i, j
    for i in range(n):
        for j in range(n):
            out[i, j] = 1 if _random(&rng.r) < p else 0
    return out


def no_pm_count(int n, double p, long long trials, seed):
    """Number of i.i.d. Bernoulli(p) skeletons (out of ``trials``) without a PM."""
    cdef uint8_t* b = <uint8_t*>malloc(n * n)
    cdef int* roc = <int*>malloc(n * sizeof(int))
    cdef long long t, count = 0
    cdef int i
    cdef rng_t r
    cdef uint64_t base = _splitmix(<uint64_t>(seed & 0xFFFFFFFFFFFFFFFF))
    with nogil:
        for t in range(trials):
            _seed(&r, _mix_key(base, <uint64_t>t))
            for i in range(n * n):
                b[i] = 1 if _random(&r) < p else 0
            if _max_matching(b, n, n, roc) < n:
                count += 1
    free(b)
    free(roc)
    return count


def stationary_skeletons(adj, states, int a, int b, int n, long long trials, seed):
    """Skeletons of round matrices whose starts are uniform over ``states``."""
    cdef cnp.ndarray[uint64_t, ndim=1] ad = np.ascontiguousarray(adj, dtype=np.uint64)
    cdef cnp.ndarray[uint64_t, ndim=1] st = np.ascontiguousarray(states, dtype=np.uint64)
    cdef cnp.ndarray[uint8_t, ndim=3] out = np.empty((trials, n, n), dtype=np.uint8)
    cdef uint64_t s = <uint64_t>(seed & 0xFFFFFFFFFFFFFFFF)
    cdef uint64_t* starts = <uint64_t*>malloc(n * sizeof(uint64_t))
    cdef uint64_t* entries = <uint64_t*>malloc(n * n * sizeof(uint64_t))
    cdef uint64_t both = ((<uint64_t>1) << a) | ((<uint64_t>1) << b)
    cdef uint64_t k = st.shape[0]
    cdef long long t
    cdef int i
    cdef rng_t r
    with nogil:
        for t in range(trials):
            _seed(&r, _mix_key(_mix_key(_splitmix(s), <uint64_t>t), C_PM_STREAM))
            for i in range(n):
                starts[i] = st[_next(&r) % k]
            _round_matrix(&ad[0], ad.shape[0], starts, n, n, _base3(s, t, 1), entries)
            for i in range(n * n):
                out[t, i // n, i % n] = (entries[i] & both) != both
    free(starts)
    free(entries)
    return out


def stationary_matrices(adj, states, int n, long long trials, seed):
    """Round matrices (entries) with starts uniform over ``states``."""
    cdef cnp.ndarray[uint64_t, ndim=1] ad = np.ascontiguousarray(adj, dtype=np.uint64)
    cdef cnp.ndarray[uint64_t, ndim=1] st = np.ascontiguousarray(states, dtype=np.uint64)
    cdef cnp.ndarray[uint64_t, ndim=3] out = np.empty((trials, n, n), dtype=np.uint64)
    cdef uint64_t s = <uint64_t>(seed & 0xFFFFFFFFFFFFFFFF)
    cdef uint64_t* starts = <uint64_t*>malloc(n * sizeof(uint64_t))
    cdef uint64_t k = st.shape[0]
    cdef long long t
    cdef int i
    cdef rng_t r
    with nogil:
        for t in range(trials):
            _seed(&r, _mix_key(_mix_key(_splitmix(s), <uint64_t>t), C_PM_STREAM))
            for i in range(n):
                starts[i] = st[_next(&r) % k]
            _round_matrix(&ad[0], ad.shape[0], starts, n, n, _base3(s, t, 1), &out[t, 0, 0])
    free(starts)
    return out
