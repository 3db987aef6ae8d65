"""Kernel dispatch: compiled extension when importable, pure Python otherwise.

Set ``HDXLIFT_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels
if os.environ.get("HDXLIFT_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _pykernels

# signed walk counts must fit the compiled accumulator
_INT64_SAFE = 2**62


def closed_walk_numerator(nbr, eid, sign, r: int) -> int:
    m = len(nbr)
    d = len(nbr[0]) if m else 0
    if _impl is not _pykernels and m * d**r >= _INT64_SAFE:
        return _pykernels.closed_walk_numerator(nbr, eid, sign, r)
    return _impl.closed_walk_numerator(nbr, eid, sign, r)


def first_sparse_violation(adj, weights, t: int, beta: float, d: int, prune: bool = True):
    return _impl.first_sparse_violation(adj, weights, t, beta, d, prune)


feasible_sizes = _pykernels.feasible_sizes
