"""Randomized local lifting by Moser-Tardos resampling.

There is one bad event per ``(k-2)``-face ``sigma``.  It holds when the
signed walk operator of the link under ``f_sigma`` has spectral norm above
the target, or when either 2-lift of the link (under ``+f_sigma`` or
``-f_sigma``) is not ``(beta, t)``-sparse.  The event depends only on the
top faces containing ``sigma``, and resampling it redraws exactly those.
"""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .complex import Face, SimplicialComplex, face_key
from .errors import NicenessError, NonTerminationError, PartialSigningError, RegularityError
from .lifting import Signing, graph_induced_lift, link_edge_signing
from .spectral import SparsenessWitness, alpha_threshold, is_sparse, signed_walk_operator, spectral_norm


@dataclass(frozen=True)
class NicenessReport:
    lhs: float
    rhs: float
    nice: bool
    log2_lhs: float
    log2_rhs: float

    def to_json(self) -> dict:
        return asdict(self)


def niceness_from_degrees(k: int, d_top2: int, d_top1: int) -> NicenessReport:
    """``d_{k-2}^(1 - 4 log2 d_{k-1}) < 2 / (e (k+1) k d_{k-1} + 1)``, compared in log space."""
    log2_lhs = (1.0 - 4.0 * math.log2(d_top1)) * math.log2(d_top2)
    rhs = 2.0 / (math.e * (k + 1) * k * d_top1 + 1.0)
    log2_rhs = math.log2(rhs)
    try:
        lhs = 2.0**log2_lhs
    except OverflowError:
        lhs = math.inf
    return NicenessReport(lhs, rhs, log2_lhs < log2_rhs, log2_lhs, log2_rhs)


def is_nice(X: SimplicialComplex) -> NicenessReport:
    profile = X.regularity_profile()
    if not profile.regular:
        raise RegularityError(f"complex is irregular at {profile.offending}")
    return niceness_from_degrees(X.k, X.level_degree(X.k - 2), X.level_degree(X.k - 1))


@dataclass(frozen=True)
class LLLConfig:
    beta: float
    lambda_prime_target: float
    sparsity_t: int
    max_resamples: int
    rng_seed: int
    override_nice: bool = False

    @property
    def vacuous(self) -> bool:
        return self.beta >= 1 and self.lambda_prime_target >= 1

    @classmethod
    def for_complex(
        cls,
        X: SimplicialComplex,
        beta: float,
        seed: int,
        lambda_prime_target: float | None = None,
        sparsity_t: int | None = None,
        max_resamples: int | None = None,
        override_nice: bool = False,
        c: float = 4.0,
    ) -> "LLLConfig":
        """Fill unset fields with the package defaults.

        The target defaults to ``max(lambda(X), c * beta * (1 + log2(1/beta)))``
        and ``t`` to ``floor(log2(2 d_{k-2}))``.
        """
        if lambda_prime_target is None:
            from .verifier import hdx_lambda

            lambda_prime_target = max(hdx_lambda(X), c * beta * (1 + math.log2(1 / beta)))
        if sparsity_t is None:
            sparsity_t = int(math.floor(math.log2(2 * X.level_degree(X.k - 2))))
        if max_resamples is None:
            max_resamples = 100 * len(X.faces(X.k - 2))
        return cls(float(beta), float(lambda_prime_target), int(sparsity_t), int(max_resamples), int(seed), override_nice)

    def flags(self, X: SimplicialComplex) -> list[str]:
        out = []
        if self.vacuous:
            out.append("vacuous-thresholds")
        elif self.beta >= 1 or self.lambda_prime_target >= 1:
            out.append("partly-vacuous-thresholds")
        d = X.level_degree(X.k - 1)
        if d >= 2 and self.beta < alpha_threshold(X.k, d):
            out.append("beta-below-alpha")
        return out


@dataclass(frozen=True)
class BadEventRecord:
    sigma: Face
    cause: str  # "spectral_norm_exceeded" or "sparseness_violated"
    witness: float | SparsenessWitness
    lift_sign: int = 1

    def to_json(self) -> dict:
        w = self.witness.to_json() if isinstance(self.witness, SparsenessWitness) else self.witness
        return {"sigma": face_key(self.sigma), "cause": self.cause, "witness": w, "lift_sign": self.lift_sign}


def bad_event_holds(X: SimplicialComplex, f: Signing, sigma, config: LLLConfig) -> BadEventRecord | None:
    s = tuple(sorted(sigma))
    fs = link_edge_signing(X, f, s)
    if np.any(fs == 0):
        raise PartialSigningError(f"a top face over {face_key(s) or '(empty)'} is unassigned")
    g = X.link(s).graph()
    if config.lambda_prime_target < 1:
        norm = spectral_norm(signed_walk_operator(g, fs))
        if norm > config.lambda_prime_target:
            return BadEventRecord(s, "spectral_norm_exceeded", norm)
    for sign in (1, -1):
        w = is_sparse(graph_induced_lift(g, sign * fs), config.beta, config.sparsity_t)
        if w is not None:
            return BadEventRecord(s, "sparseness_violated", w, sign)
    return None


def dependency_neighbors(X: SimplicialComplex, sigma) -> list[Face]:
    """``(k-2)``-faces other than ``sigma`` sharing a top face with it."""
    s = tuple(sorted(sigma))
    out = set()
    for i in X.tops_containing(s):
        top = X.top_faces[i]
        for j in range(len(top)):
            for l in range(j + 1, len(top)):
                other = tuple(v for idx, v in enumerate(top) if idx != j and idx != l)
                if other != s:
                    out.add(other)
    return sorted(out)


def dependency_bound(X: SimplicialComplex) -> float:
    """``D = (k+1) k / 4 * d_{k-2} * d_{k-1}``."""
    k = X.k
    return (k + 1) * k / 4 * X.level_degree(k - 2) * X.level_degree(k - 1)


@dataclass
class LiftStats:
    mode: str
    iterations: int = 0
    resamples: dict[str, int] = field(default_factory=dict)
    eigensolves: int = 0
    event_checks: int = 0
    wall_time: float = 0.0
    flags: list[str] = field(default_factory=list)
    extra: dict = field(default_factory=dict)
    # exact rationals for callers; not serialised
    exact: dict = field(default_factory=dict, repr=False)

    @property
    def total_resamples(self) -> int:
        return sum(self.resamples.values())

    def to_json(self, include_time: bool = False) -> dict:
        out = {
            "mode": self.mode,
            "iterations": self.iterations,
            "total_resamples": self.total_resamples,
            "resamples": dict(sorted(self.resamples.items())),
            "eigensolves": self.eigensolves,
            "event_checks": self.event_checks,
            "flags": list(self.flags),
        }
        out.update(self.extra)
        if include_time:
            out["wall_time"] = self.wall_time
        return out


def moser_tardos_lift(X: SimplicialComplex, config: LLLConfig) -> tuple[Signing, LiftStats]:
    """Resample the canonically least violated event until none holds."""
    start = time.perf_counter()
    nice = is_nice(X)
    if not nice.nice and not config.override_nice:
        raise NicenessError(
            f"complex is not nice (log2 lhs {nice.log2_lhs:.4g} >= log2 rhs {nice.log2_rhs:.4g}); "
            "pass override_nice to run without the termination guarantee"
        )
    stats = LiftStats("mt", flags=config.flags(X) + ([] if nice.nice else ["not-nice-override"]))
    sigmas = list(X.faces(X.k - 2))
    position = {s: i for i, s in enumerate(sigmas)}
    tops = [np.asarray(X.tops_containing(s), dtype=np.int64) for s in sigmas]
    neighbors = [[position[o] for o in dependency_neighbors(X, s)] for s in sigmas]
    rng = np.random.default_rng(config.rng_seed)
    f = Signing.random(X, rng)
    stats.resamples = {face_key(s): 0 for s in sigmas}
    needs_eig = config.lambda_prime_target < 1

    def check(i):
        stats.event_checks += 1
        stats.eigensolves += int(needs_eig)
        return bad_event_holds(X, f, sigmas[i], config)

    bad = [check(i) for i in range(len(sigmas))]
    total = 0
    while True:
        i = next((j for j, b in enumerate(bad) if b is not None), None)
        if i is None:
            break
        if total >= config.max_resamples:
            stats.wall_time = time.perf_counter() - start
            raise NonTerminationError(f"gave up after {total} resamples", stats)
        draws = rng.integers(0, 2, size=len(tops[i]))
        f.values[tops[i]] = (2 * draws - 1).astype(np.int8)
        stats.resamples[face_key(sigmas[i])] += 1
        stats.iterations += 1
        total += 1
        for j in [i] + neighbors[i]:
            bad[j] = check(j)
    stats.wall_time = time.perf_counter() - start
    return f, stats


def random_lift_signing(X: SimplicialComplex, seed: int) -> Signing:
    """Uniform signing from a seeded generator (no resampling)."""
    return Signing.random(X, np.random.default_rng(seed))
