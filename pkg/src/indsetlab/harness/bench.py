"""Timing of the pure-Python kernels against the compiled ones."""

from __future__ import annotations

import time

import numpy as np

from .. import _kernels
from .._kernels import _pure
from ..graph import path_graph
from .report import ExperimentReport, Stopwatch


def _cases(mod, size: int):
    rng = _pure.Xoshiro256(99)
    half = _pure.bernoulli_skeleton(size, 0.5, rng)
    dense = _pure.bernoulli_skeleton(size, 0.75, rng)
    while _pure.max_matching(dense)[0] < size:
        dense = _pure.bernoulli_skeleton(size, 0.75, rng)
    g = path_graph(4)
    adj = np.array(g.adjacency, dtype=np.uint64)
    eu = np.array([e[0] for e in g.edges], dtype=np.int64)
    ev = np.array([e[1] for e in g.edges], dtype=np.int64)
    return {
        "run_chain_10k": lambda s: mod.run_chain(adj, 0, 10_000, mod.Xoshiro256(s)),
        "max_matching": lambda s: mod.max_matching(half),
        "sample_pm_rejection": lambda s: mod.sample_pm_rejection(dense, mod.Xoshiro256(s)),
        "sample_pm_mcmc_1k": lambda s: mod.sample_pm_mcmc(dense, mod.max_matching(dense)[1], 1000, mod.Xoshiro256(s)),
        "sample_is_p4": lambda s: mod.sample_is(4, eu, ev, 32, 4, _pure.BACKEND_EXACT, 0, s),
    }


def _time(fn, repeat: int) -> float:
    fn(0)
    start = time.perf_counter()
    for s in range(repeat):
        fn(s + 1)
    return (time.perf_counter() - start) / repeat


def bench(repeat: int = 20, size: int = 32) -> ExperimentReport:
    """Seconds per call for each kernel under both implementations."""
    rep = ExperimentReport("bench", {"repeat": repeat, "size": size})
    compiled = _kernels.compiled_module()
    rows = []
    with Stopwatch() as sw:
        pure_cases = _cases(_pure, size)
        ext_cases = _cases(compiled, size) if compiled else {}
        for name, fn in pure_cases.items():
            t_pure = _time(fn, repeat)
            t_ext = _time(ext_cases[name], repeat) if compiled else None
            rows.append({"kernel": name, "python_seconds": t_pure, "cython_seconds": t_ext,
                         "speedup": (t_pure / t_ext) if t_ext else None})
    rep.runtime_seconds = sw.elapsed
    rep.measurements = {"kernels": rows, "compiled_available": compiled is not None}
    if compiled is None:
        rep.notes.append("compiled kernels unavailable; only the Python timings are reported")
    return rep


def format_table(rep: ExperimentReport) -> str:
    lines = [f"{'kernel':<22}{'python (ms)':>14}{'cython (ms)':>14}{'speedup':>10}"]
    for r in rep.measurements["kernels"]:
        ext = f"{r['cython_seconds'] * 1e3:14.3f}" if r["cython_seconds"] else f"{'n/a':>14}"
        sp = f"{r['speedup']:10.1f}" if r["speedup"] else f"{'n/a':>10}"
        lines.append(f"{r['kernel']:<22}{r['python_seconds'] * 1e3:14.3f}{ext}{sp}")
    return "\n".join(lines)
