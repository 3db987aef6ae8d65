"""Compiled vs pure-Python kernels on the two hot loops.

Run ``python benchmarks/bench_kernels.py``.  Each case is checked for equal
output before it is timed.
"""

from __future__ import annotations

import argparse
import timeit

import networkx as nx
import numpy as np

from hdxlift import _pykernels
from hdxlift.graph import Graph
from hdxlift.lifting import graph_induced_lift

try:
    from hdxlift import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def _regular(n, d, seed):
    return Graph.from_networkx(nx.random_regular_graph(d, n, seed=seed))


def sparse_cases():
    # no witness exists in any case, so the whole space is scanned;
    # at d >= 4 the size ceiling prunes everything, hence the brute-force rows
    base = _regular(14, 4, 1)
    signs = np.random.default_rng(1).choice([-1, 1], size=len(base.edges)).astype(np.int8)
    yield "lift of 4-reg on 14, t=5, brute", graph_induced_lift(base, signs), 5, 0.9, False
    yield "6-reg on 40, t=5, brute", _regular(40, 6, 2), 5, 0.95, False
    yield "3-reg on 60, t=7, pruned", _regular(60, 3, 3), 7, 0.9, True


def walk_cases():
    rng = np.random.default_rng(5)
    for n, d, r in ((12, 5, 6), (16, 7, 6), (20, 5, 8)):
        g = _regular(n, d, n)
        signs = rng.choice([-1, 0, 1], size=len(g.edges)).astype(np.int8)
        yield f"closed walks n={n} d={d} r={r}", g, signs, r


def bench(number: int) -> None:
    if _ckernels is None:
        print("compiled kernels are not built; only the fallback is available")
    print(f"{'case':<36} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for name, g, t, beta, prune in sparse_cases():
        w = g.adjacency_matrix()
        args = (g.adj, w, t, beta, g.degree, prune)
        ref = _pykernels.first_sparse_violation(*args)
        py = timeit.timeit(lambda: _pykernels.first_sparse_violation(*args), number=number) / number
        _row(name, py, _ckernels and _time_c(_ckernels.first_sparse_violation, args, ref, number))
    for name, g, signs, r in walk_cases():
        nbr, eid = g.neighbor_arrays()
        args = (nbr, eid, signs, r)
        ref = _pykernels.closed_walk_numerator(*args)
        py = timeit.timeit(lambda: _pykernels.closed_walk_numerator(*args), number=number) / number
        _row(name, py, _ckernels and _time_c(_ckernels.closed_walk_numerator, args, ref, number))


def _time_c(fn, args, ref, number):
    got = fn(*args)
    if got != ref:
        raise AssertionError(f"backends disagree: {got!r} vs {ref!r}")
    return timeit.timeit(lambda: fn(*args), number=number) / number


def _row(name, py, cy):
    if cy:
        print(f"{name:<36} {py:>10.4f} {cy:>10.4f} {py / cy:>7.1f}x")
    else:
        print(f"{name:<36} {py:>10.4f} {'-':>10} {'-':>8}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--number", type=int, default=3)
    bench(ap.parse_args().number)
