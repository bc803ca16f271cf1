"""Kernel selection: compiled extension when importable, pure Python otherwise.

Set ``INDSETLAB_PURE=1`` to force the pure-Python kernels. Both
implementations consume random numbers identically, so results do not depend
on which one is active.
"""

from __future__ import annotations

import os

from . import _pure

try:
    if os.environ.get("INDSETLAB_PURE", "") not in ("", "0"):
        raise ImportError("pure kernels forced by INDSETLAB_PURE")
    from . import _ext as _active
    BACKEND = "cython"
except ImportError:
    _active = _pure
    BACKEND = "python"

Xoshiro256 = _active.Xoshiro256
splitmix64 = _active.splitmix64
derive_seed = _active.derive_seed
run_chain = _active.run_chain
round_matrix = _active.round_matrix
edge_skeleton = _active.edge_skeleton
max_matching = _active.max_matching
permanent = _active.permanent
sample_pm_sequential = _active.sample_pm_sequential
sample_pm_rejection = _active.sample_pm_rejection
sample_pm_mcmc = _active.sample_pm_mcmc
sample_pm = _active.sample_pm
sample_is = _active.sample_is
bernoulli_skeleton = _active.bernoulli_skeleton
no_pm_count = _active.no_pm_count
stationary_skeletons = _active.stationary_skeletons
stationary_matrices = _active.stationary_matrices

PM_STREAM = _pure.PM_STREAM
BACKEND_EXACT = _pure.BACKEND_EXACT
BACKEND_MCMC = _pure.BACKEND_MCMC
SEQUENTIAL_MAX = _pure.SEQUENTIAL_MAX


def compiled_module():
    """Return the compiled kernel module, or None when it is unavailable."""
    try:
        from . import _ext
    except ImportError:
        return None
    return _ext
