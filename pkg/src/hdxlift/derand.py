"""Deterministic local lifting by the method of conditional expectations.

The potential is ``Q = sum over (k-2)-faces sigma of Y_sigma + Z_sigma``:

* ``Y_sigma = Tr((A^f_sigma)^r)``, a sum over rooted closed walks of length
  ``r`` in the link.  Under a partial signing a walk averages to zero as soon
  as one unassigned edge appears an odd number of times, so the expectation
  is a signed walk count over ``d^r``.
* ``Z_sigma`` charges ``gamma`` for each connected pair ``(S, T)`` with
  ``|S + T| = floor(log2 m) + 1`` whose signed form exceeds
  ``beta sqrt(|S||T|)``.  The unassigned edges between ``S`` and ``T`` add
  an independent +-1 sum, so its exceedance probability is a binomial tail.

All arithmetic is exact (:class:`fractions.Fraction`), so every greedy
choice is an exact comparison.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass
from decimal import Context, Decimal
from fractions import Fraction
from math import comb
from typing import Sequence

import numpy as np

from . import kernels
from ._pykernels import connected_subsets
from .complex import Face, SimplicialComplex, face_key
from .errors import AdmissibilityError, HypothesisError, ParameterError, RegularityError, SetError, StateError
from .graph import Graph
from .lifting import Signing
from .lll import LiftStats

log = logging.getLogger(__name__)


def decimal_str(q: Fraction, digits: int = 15) -> str:
    """Render an exact rational as a decimal string without float overflow."""
    ctx = Context(prec=digits)
    return str(ctx.divide(Decimal(q.numerator), Decimal(q.denominator)))


@dataclass(frozen=True)
class DerandParams:
    beta: float
    beta_prime: float
    r: int
    gamma: Fraction
    C2: float
    r_default: int

    @property
    def r_overridden(self) -> bool:
        return self.r != self.r_default

    @classmethod
    def for_complex(
        cls,
        X: SimplicialComplex,
        beta: float,
        r: int | None = None,
        C2: float = 8.0,
        gamma=None,
    ) -> "DerandParams":
        """Defaults: ``r = 2 ceil(log2 m)``, ``gamma = (C2 beta' d^(3k^2))^r``."""
        if not beta > 0:
            raise ParameterError(f"beta must be positive, got {beta}")
        m = X.level_degree(X.k - 2)
        d = X.level_degree(X.k - 1)
        r_default = max(2, 2 * math.ceil(math.log2(m)))
        r = r_default if r is None else int(r)
        if r < 2 or r % 2:
            raise ParameterError(f"walk length r must be even and >= 2, got {r}")
        beta_prime = beta * (1 + math.log2(1 / beta))
        if gamma is None:
            gamma = (Fraction(C2) * Fraction(beta_prime) * d ** (3 * X.k * X.k)) ** r
        gamma = Fraction(gamma)
        if gamma <= 0:
            raise ParameterError(f"gamma must be positive, got {gamma}")
        return cls(float(beta), beta_prime, r, gamma, float(C2), r_default)

    def to_json(self) -> dict:
        return {
            "beta": self.beta,
            "beta_prime": self.beta_prime,
            "r": self.r,
            "r_default": self.r_default,
            "gamma": decimal_str(self.gamma),
            "C2": self.C2,
        }


def expected_y_numerator(graph: Graph, partial, r: int) -> int:
    """Signed count of closed walks surviving the average; ``E[Y] = this / d^r``."""
    if r < 2 or r % 2:
        raise ParameterError(f"walk length r must be even and >= 2, got {r}")
    nbr, eid = graph.neighbor_arrays()
    return kernels.closed_walk_numerator(nbr, eid, np.asarray(partial, dtype=np.int8), r)


def expected_Y(graph: Graph, partial, r: int) -> Fraction:
    """``E[Tr((A^f)^r)]`` with unassigned edges (sign 0) drawn uniformly."""
    return Fraction(expected_y_numerator(graph, partial, r), graph.degree**r)


def _tail_probability(c: int, u: int, bound2: Fraction) -> Fraction:
    # P[(c + W)^2 > bound2] with W a sum of u independent +-1 signs
    hits = sum(comb(u, j) for j in range(u + 1) if (c + 2 * j - u) ** 2 > bound2)
    return Fraction(hits, 2**u)


def _bound2(beta: float, d: int, s: int, t: int) -> Fraction:
    # (beta sqrt(|S||T|) d)^2, compared against the integer edge sum squared
    return Fraction(beta) ** 2 * d * d * s * t


def expected_Z(graph: Graph, partial, S: Sequence[int], T: Sequence[int], beta: float, gamma) -> Fraction:
    """``gamma * P[|<1_S, A^f 1_T>| > beta sqrt(|S||T|)]``, exactly."""
    S, T = set(S), set(T)
    if S & T:
        raise SetError(f"S and T share vertices {sorted(S & T)}")
    signs = np.asarray(partial, dtype=np.int8)
    c = u = 0
    for a in S:
        for b in graph.adj[a]:
            if b in T:
                v = int(signs[graph.edge_id(a, b)])
                if v == 0:
                    u += 1
                else:
                    c += v
    return Fraction(gamma) * _tail_probability(c, u, _bound2(beta, graph.degree, len(S), len(T)))


def connected_pairs(graph: Graph, size: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Unordered disjoint ``(S, T)`` with connected union of exactly ``size`` vertices.

    ``S`` holds the smallest vertex of the union; order matches the sparseness scan.
    """
    out = []
    for U in connected_subsets(graph.adj, size):
        if len(U) != size:
            continue
        us = sorted(U)
        for tmask in range(1, 1 << (size - 1)):
            T = tuple(us[i + 1] for i in range(size - 1) if tmask >> i & 1)
            S = (us[0],) + tuple(us[i + 1] for i in range(size - 1) if not tmask >> i & 1)
            out.append((S, T))
    return out


class _LinkTerm:
    """Per-``sigma`` data for the potential."""

    def __init__(self, X: SimplicialComplex, sigma: Face, params: DerandParams):
        self.sigma = sigma
        view = X.link(sigma)
        self.graph = view.graph()
        self.d = self.graph.degree
        if self.d is None:
            raise RegularityError(f"link of {face_key(sigma) or '(empty)'} is not regular")
        self.m = self.graph.n
        self.nbr, self.eid = self.graph.neighbor_arrays()
        # top face index behind each link edge
        self.tops = np.array(
            [X.index(tuple(sorted(sigma + view.to_parent(e)))) for e in self.graph.edges], dtype=np.int64
        )
        size = int(math.floor(math.log2(self.m))) + 1 if self.m >= 1 else 1
        self.pair_size = size
        self.pairs = []
        for S, T in connected_pairs(self.graph, size) if size <= self.m else []:
            tset = set(T)
            edges = [self.graph.edge_id(a, b) for a in S for b in self.graph.adj[a] if b in tset]
            self.pairs.append((S, T, np.array(edges, dtype=np.int64), _bound2(params.beta, self.d, len(S), len(T))))
        self.denominator = self.d**params.r

    def evaluate(self, values: np.ndarray, params: DerandParams) -> tuple[int, Fraction]:
        signs = values[self.tops]
        y = kernels.closed_walk_numerator(self.nbr, self.eid, signs, params.r)
        z = Fraction(0)
        for _S, _T, edges, bound2 in self.pairs:
            es = signs[edges]
            u = int(np.count_nonzero(es == 0))
            c = int(es.sum(dtype=np.int64))
            p = _tail_probability(c, u, bound2)
            if p:
                z += p
        return y, z * params.gamma


class DerandState:
    """Partial signing with cached per-link expectations."""

    def __init__(self, X: SimplicialComplex, params: DerandParams, values=None):
        self.X = X
        self.params = params
        self.values = np.zeros(len(X.top_faces), dtype=np.int8) if values is None else np.array(values, dtype=np.int8)
        self.terms = [_LinkTerm(X, s, params) for s in X.faces(X.k - 2)]
        pos = {t.sigma: i for i, t in enumerate(self.terms)}
        self.affected: list[list[int]] = []
        for top in X.top_faces:
            idx = []
            for j in range(len(top)):
                for l in range(j + 1, len(top)):
                    idx.append(pos[tuple(v for i, v in enumerate(top) if i != j and i != l)])
            self.affected.append(sorted(idx))
        self.y = [0] * len(self.terms)
        self.z = [Fraction(0)] * len(self.terms)
        for i, term in enumerate(self.terms):
            self.y[i], self.z[i] = term.evaluate(self.values, params)
        self.walk_evaluations = len(self.terms)

    def term_value(self, i: int) -> Fraction:
        return Fraction(self.y[i], self.terms[i].denominator) + self.z[i]

    def expected_q(self) -> Fraction:
        return sum((self.term_value(i) for i in range(len(self.terms))), Fraction(0))

    def expected_y(self, i: int) -> Fraction:
        return Fraction(self.y[i], self.terms[i].denominator)

    def _delta(self, tau: int, value: int):
        old = self.values[tau]
        self.values[tau] = value
        try:
            updates = {i: self.terms[i].evaluate(self.values, self.params) for i in self.affected[tau]}
        finally:
            self.values[tau] = old
        self.walk_evaluations += len(updates)
        delta = Fraction(0)
        for i, (y, z) in updates.items():
            delta += Fraction(y - self.y[i], self.terms[i].denominator) + (z - self.z[i])
        return delta, updates

    def conditional_q(self, tau: int, value: int, current: Fraction | None = None) -> Fraction:
        """``E[Q | current prefix, f(tau) = value]`` without committing."""
        if self.values[tau] != 0:
            raise StateError(f"face {face_key(self.X.top_faces[tau])} is already assigned")
        base = self.expected_q() if current is None else current
        return base + self._delta(tau, value)[0]

    def assign(self, tau: int, value: int) -> Fraction:
        """Fix ``f(tau)`` and refresh only the links that contain it; returns the change in E[Q]."""
        if value not in (1, -1):
            raise ParameterError(f"sign must be +1 or -1, got {value}")
        if self.values[tau] != 0:
            raise StateError(f"face {face_key(self.X.top_faces[tau])} is already assigned")
        delta, updates = self._delta(tau, value)
        self.values[tau] = value
        for i, (y, z) in updates.items():
            self.y[i], self.z[i] = y, z
        return delta

    def signing(self) -> Signing:
        return Signing(self.X, self.values.copy())


def incremental_Q_update(state: DerandState, tau: int, value: int) -> DerandState:
    state.assign(tau, value)
    return state


def expected_Q(X: SimplicialComplex, partial: Signing | np.ndarray | None, params: DerandParams) -> Fraction:
    """From-scratch ``E[Q]`` under a partial signing."""
    values = partial.values if isinstance(partial, Signing) else partial
    return DerandState(X, params, values).expected_q()


def check_hypotheses(X: SimplicialComplex) -> list[str]:
    k = X.k
    problems = []
    d = X.level_degree(k - 1)
    m = X.level_degree(k - 2)
    if not d > 2 ** (10 * k):
        problems.append(f"d_(k-1) = {d} is not above 2^(10k) = {2 ** (10 * k)}")
    if not len(X.faces(k - 2)) <= m ** (10 * k):
        problems.append(f"|X(k-2)| = {len(X.faces(k - 2))} exceeds d_(k-2)^(10k)")
    return problems


def greedy_derand_lift(
    X: SimplicialComplex,
    params: DerandParams,
    override_hypotheses: bool = False,
) -> tuple[Signing, LiftStats]:
    """Fix top-face signs in canonical order, each time taking the smaller conditional E[Q]."""
    start = time.perf_counter()
    profile = X.regularity_profile()
    if not profile.regular:
        raise RegularityError(f"complex is irregular at {profile.offending}")
    problems = check_hypotheses(X)
    if problems and not override_hypotheses:
        raise HypothesisError("; ".join(problems) + " (pass override_hypotheses to run anyway)")
    state = DerandState(X, params)
    q0 = state.expected_q()
    if q0 >= params.gamma:
        raise AdmissibilityError(
            f"E[Q] of the empty assignment ({decimal_str(q0)}) is not below gamma ({decimal_str(params.gamma)})",
            expected_q=q0,
            gamma=params.gamma,
        )
    stats = LiftStats("derand")
    if problems:
        stats.flags.append("hypotheses-overridden")
    if params.r_overridden:
        stats.flags.append(f"r-override: r={params.r}, default {params.r_default}")
        log.warning("walk length r=%d differs from the default %d", params.r, params.r_default)
    trace = [q0]
    current = q0
    for tau in range(len(X.top_faces)):
        q_plus = state.conditional_q(tau, 1, current)
        q_minus = state.conditional_q(tau, -1, current)
        value = 1 if q_plus <= q_minus else -1
        current += state.assign(tau, value)
        trace.append(current)
        stats.iterations += 1
        log.info("face %s -> %+d  E[Q] = %s", face_key(X.top_faces[tau]), value, decimal_str(current))
    final_y = [state.expected_y(i) for i in range(len(state.terms))]
    stats.extra = {
        "params": params.to_json(),
        "expected_q_initial": decimal_str(q0),
        "q_final": decimal_str(current),
        "gamma": decimal_str(params.gamma),
        "trace": [decimal_str(q) for q in trace],
        "final_y": {face_key(t.sigma): decimal_str(y) for t, y in zip(state.terms, final_y)},
        "final_z_zero": all(z == 0 for z in state.z),
        "walk_evaluations": state.walk_evaluations,
    }
    stats.wall_time = time.perf_counter() - start
    stats.exact = {"trace": trace, "final_y": final_y, "final_z": list(state.z)}
    return state.signing(), stats
