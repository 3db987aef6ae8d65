"""Walk operators of regular graphs, their spectra, and sparseness.

All spectra come from a dense symmetric eigensolve; every comparison in
the package uses the absolute tolerance :data:`SPECTRAL_TOL`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import HypothesisError, OperatorError, ParameterError
from .graph import Graph

SPECTRAL_TOL = 1e-8


@dataclass(frozen=True)
class WalkOperator:
    """Random-walk matrix ``A / d`` of a ``d``-regular graph."""

    graph: Graph
    entries: np.ndarray

    @property
    def size(self) -> int:
        return self.graph.n

    @property
    def degree(self) -> int:
        return self.graph.degree


@dataclass(frozen=True)
class SignedWalkOperator:
    """``A^f / d``: the walk matrix with each edge weighted by its sign.

    ``signs`` is aligned with ``graph.edges``; a zero marks an edge whose
    sign is not assigned yet (its entry is zero here).
    """

    graph: Graph
    entries: np.ndarray
    signs: np.ndarray

    @property
    def size(self) -> int:
        return self.graph.n

    @property
    def degree(self) -> int:
        return self.graph.degree

    @property
    def unassigned(self) -> np.ndarray:
        return np.flatnonzero(self.signs == 0)


def walk_operator(graph: Graph) -> WalkOperator:
    d = graph.degree
    if d is None:
        raise OperatorError("walk operator needs a regular graph")
    if d == 0:
        return WalkOperator(graph, np.zeros((graph.n, graph.n)))
    return WalkOperator(graph, graph.adjacency_matrix() / d)


def signed_walk_operator(graph: Graph, signs) -> SignedWalkOperator:
    d = graph.degree
    if d is None:
        raise OperatorError("walk operator needs a regular graph")
    s = np.asarray(signs, dtype=np.int8)
    if s.shape != (len(graph.edges),):
        raise OperatorError(f"expected {len(graph.edges)} edge signs, got shape {s.shape}")
    if np.any((s != 1) & (s != -1) & (s != 0)):
        raise OperatorError("edge signs must be +1, -1 or 0 (unassigned)")
    entries = graph.adjacency_matrix(s) / d if d else np.zeros((graph.n, graph.n))
    return SignedWalkOperator(graph, entries, s)


def normalized_adjacency(graph: Graph) -> np.ndarray:
    """``D^{-1/2} A D^{-1/2}``; equals the walk matrix on regular graphs."""
    a = graph.adjacency_matrix().astype(float)
    deg = a.sum(axis=1)
    inv = np.zeros_like(deg)
    nz = deg > 0
    inv[nz] = 1.0 / np.sqrt(deg[nz])
    return a * inv[:, None] * inv[None, :]


@dataclass(frozen=True)
class SpectrumReport:
    eigenvalues: tuple[float, ...]
    two_sided: float
    one_sided: float

    def to_json(self) -> dict:
        return {
            "eigenvalues": list(self.eigenvalues),
            "two_sided": self.two_sided,
            "one_sided": self.one_sided,
        }

    @property
    def norm(self) -> float:
        return max(abs(self.eigenvalues[0]), abs(self.eigenvalues[-1])) if self.eigenvalues else 0.0


def eigenvalues(matrix: np.ndarray) -> np.ndarray:
    """Descending eigenvalues of a symmetric matrix."""
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise OperatorError(f"operator must be square, got shape {m.shape}")
    if not np.allclose(m, m.T, atol=1e-12, rtol=0):
        raise OperatorError("operator is not symmetric")
    if m.shape[0] == 0:
        return np.zeros(0)
    return np.linalg.eigvalsh(m)[::-1]


def report_from_eigenvalues(ev: Sequence[float]) -> SpectrumReport:
    ev = tuple(float(x) for x in sorted(ev, reverse=True))
    if len(ev) < 2:
        return SpectrumReport(ev, 0.0, 0.0)
    return SpectrumReport(ev, max(ev[1], abs(ev[-1])), ev[1])


def spectrum(op) -> SpectrumReport:
    """Full spectrum of a (signed) walk operator or any symmetric matrix."""
    matrix = op.entries if hasattr(op, "entries") else op
    return report_from_eigenvalues(eigenvalues(matrix))


def spectral_norm(op) -> float:
    matrix = op.entries if hasattr(op, "entries") else op
    ev = eigenvalues(matrix)
    return float(np.max(np.abs(ev))) if len(ev) else 0.0


def bilinear_form(op, S: Iterable[int], T: Iterable[int]) -> float:
    """``<1_S, A 1_T>`` summed over ordered edge pairs ``(v in S, u in T)``."""
    S = sorted(set(S))
    T = sorted(set(T))
    if not S or not T:
        return 0.0
    matrix = op.entries if hasattr(op, "entries") else np.asarray(op)
    return float(matrix[np.ix_(S, T)].sum())


@dataclass(frozen=True)
class SparsenessWitness:
    S: tuple[int, ...]
    T: tuple[int, ...]
    value: float
    bound: float

    def to_json(self) -> dict:
        return {"S": list(self.S), "T": list(self.T), "value": self.value, "bound": self.bound}


def is_sparse(
    graph: Graph,
    beta: float,
    t: int,
    signs=None,
    prune: bool = True,
) -> SparsenessWitness | None:
    """First witness against ``(beta, t)``-sparseness, or ``None``.

    Only disjoint pairs whose union is connected and has at most ``t``
    vertices are examined.  ``signs`` switches to the signed operator.
    ``prune=False`` disables the size-ceiling shortcut (pure brute force);
    the returned witness is the same either way.
    """
    if t < 1:
        raise ParameterError(f"t must be >= 1, got {t}")
    d = graph.degree
    if d is None:
        raise OperatorError("sparseness is defined for regular graphs")
    if d == 0 or graph.n < 2:
        return None
    weights = graph.adjacency_matrix(signs)
    hit = kernels.first_sparse_violation(graph.adj, weights, min(t, graph.n), float(beta), d, prune)
    if hit is None:
        return None
    S, T, value = hit
    return SparsenessWitness(tuple(S), tuple(T), float(value), float(beta) * math.sqrt(len(S) * len(T)))


def alpha_threshold(k: int, d: int) -> float:
    """``10 sqrt(k^2 log2(d) / d)``."""
    if d < 2:
        raise ParameterError(f"degree must be >= 2, got {d}")
    return 10.0 * math.sqrt(k * k * math.log2(d) / d)


def expander_implies_sparse_check(graph: Graph, lam: float, prune: bool = True) -> bool:
    """Brute-force ``(2 lam, floor(log2 n))``-sparseness of a ``lam``-expander."""
    d = graph.degree
    if d is None:
        raise HypothesisError("graph is not regular")
    if d < 3:
        raise HypothesisError(f"degree {d} < 3")
    measured = spectrum(walk_operator(graph)).two_sided
    if lam < measured - SPECTRAL_TOL:
        raise HypothesisError(f"lambda {lam} is below the measured two-sided value {measured}")
    if not lam > 1.0 / math.sqrt(d):
        raise HypothesisError(f"lambda {lam} is not above 1/sqrt(d) = {1.0 / math.sqrt(d)}")
    t = int(math.floor(math.log2(graph.n)))
    return is_sparse(graph, 2 * lam, max(t, 1), prune=prune) is None


def tensor_spectrum_check(g_spec, h_spec, product_spec, tol: float = SPECTRAL_TOL) -> bool:
    """Whether ``product_spec`` is the multiset of pairwise products."""
    g = np.asarray(_values(g_spec), dtype=float)
    h = np.asarray(_values(h_spec), dtype=float)
    p = np.asarray(_values(product_spec), dtype=float)
    if len(p) != len(g) * len(h):
        raise OperatorError(f"product has {len(p)} eigenvalues, expected {len(g) * len(h)}")
    expected = np.sort(np.outer(g, h).ravel())
    return bool(np.all(np.abs(expected - np.sort(p)) <= tol))


def _values(spec):
    if isinstance(spec, SpectrumReport):
        return spec.eigenvalues
    return spec


def multiset_close(a, b, tol: float = SPECTRAL_TOL) -> tuple[bool, int | None]:
    """Compare sorted multisets; returns ``(ok, first_bad_index)``."""
    a = np.sort(np.asarray(a, dtype=float))[::-1]
    b = np.sort(np.asarray(b, dtype=float))[::-1]
    if len(a) != len(b):
        return False, min(len(a), len(b))
    bad = np.flatnonzero(np.abs(a - b) > tol)
    return (True, None) if len(bad) == 0 else (False, int(bad[0]))
