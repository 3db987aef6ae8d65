"""Independent certification of complexes and of local lifts.

Everything here recomputes from the complexes themselves: link spectra come
from the lifted complex's own links, never from the lifting code's
predictions, so a bug in :mod:`hdxlift.lifting` shows up as a failed law.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .complex import Face, SimplicialComplex, face_key
from .errors import ComplexError, DomainError, HDXError, LevelError
from .graph import Graph
from .lifting import (
    Signing,
    check_link_structure,
    induced_edge_signing,
    local_lift,
    projection,
    union_spectrum,
)
from .spectral import (
    SPECTRAL_TOL,
    eigenvalues,
    is_sparse,
    multiset_close,
    normalized_adjacency,
    report_from_eigenvalues,
)

ALL_LAWS = (
    "invariants",
    "regularity",
    "face-counts",
    "link-structure",
    "spectrum-union",
    "lower-link-spectra",
)


def _map(fn: Callable, items: Sequence, threads: int = 1) -> list:
    if threads <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True)
class LinkMeasure:
    face: Face
    two_sided: float
    one_sided: float
    connected: bool
    eigenvalues: tuple[float, ...]


def measure_graph(graph: Graph, face: Face = ()) -> LinkMeasure:
    """Two- and one-sided lambda of a link skeleton; disconnected reads as 1."""
    connected = graph.is_connected()
    ev = eigenvalues(normalized_adjacency(graph))
    rep = report_from_eigenvalues(ev)
    if not connected:
        return LinkMeasure(face, 1.0, 1.0, False, rep.eigenvalues)
    return LinkMeasure(face, rep.two_sided, rep.one_sided, True, rep.eigenvalues)


def measure_link(X: SimplicialComplex, sigma: Face) -> LinkMeasure:
    return measure_graph(X.link(sigma).graph(), sigma)


@dataclass(frozen=True)
class LevelStat:
    level: int
    faces: int
    two_sided: float
    two_sided_face: Face
    one_sided: float
    one_sided_face: Face
    disconnected: int

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "faces": self.faces,
            "two_sided": self.two_sided,
            "two_sided_face": face_key(self.two_sided_face),
            "one_sided": self.one_sided,
            "one_sided_face": face_key(self.one_sided_face),
            "disconnected_links": self.disconnected,
        }


@dataclass(frozen=True)
class HDXCertificate:
    k: int
    per_level: tuple[LevelStat, ...]
    two_sided: float
    one_sided: float
    profile: tuple[int, ...] | None
    irregular: tuple | None
    counts: tuple[int, ...]
    link_diameter_min: float

    def is_hdx(self, lam: float) -> bool:
        return self.two_sided <= lam

    def level(self, level: int) -> LevelStat:
        for s in self.per_level:
            if s.level == level:
                return s
        raise LevelError(f"no certificate entry for level {level}")

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "two_sided": self.two_sided,
            "one_sided": self.one_sided,
            "profile": list(self.profile) if self.profile is not None else None,
            "irregular": None if self.irregular is None else [self.irregular[0], face_key(self.irregular[1]), *self.irregular[2:]],
            "counts": list(self.counts),
            "link_diameter_min": _finite(self.link_diameter_min),
            "per_level": [s.to_json() for s in self.per_level],
        }


def _finite(x: float):
    return x if math.isfinite(x) else None


def certify_hdx(X: SimplicialComplex, threads: int = 1) -> HDXCertificate:
    """Worst link expansion at every level ``-1 .. k-2`` plus degrees and counts."""
    per_level = []
    for level in range(-1, X.k - 1):
        faces = X.faces(level)
        ms = _map(lambda s: measure_link(X, s), faces, threads)
        # ties go to the canonically first face
        two = max(ms, key=lambda m: m.two_sided)
        one = max(ms, key=lambda m: m.one_sided)
        per_level.append(
            LevelStat(
                level,
                len(faces),
                two.two_sided,
                two.face,
                one.one_sided,
                one.face,
                sum(not m.connected for m in ms),
            )
        )
    profile = X.regularity_profile()
    diam = link_diameter_stats(X, threads).min if X.k >= 1 else 0
    return HDXCertificate(
        X.k,
        tuple(per_level),
        max((s.two_sided for s in per_level), default=0.0),
        max((s.one_sided for s in per_level), default=0.0),
        profile.degrees,
        profile.offending,
        X.counts(),
        diam,
    )


def hdx_lambda(X: SimplicialComplex) -> float:
    return certify_hdx(X).two_sided


@dataclass(frozen=True)
class DiameterStats:
    min: float
    max: float
    mean: float
    bound: float | None

    def to_json(self) -> dict:
        return {"min": _finite(self.min), "max": _finite(self.max), "mean": _finite(self.mean), "bound": self.bound}


def link_diameter_stats(X: SimplicialComplex, threads: int = 1) -> DiameterStats:
    """BFS diameters over the ``(k-2)``-links, with ``log d_{k-2} / log d_{k-1}`` alongside."""
    ds = _map(lambda s: X.link(s).graph().diameter(), X.faces(X.k - 2), threads)
    bound = None
    profile = X.regularity_profile()
    if profile.regular:
        top1 = X.level_degree(X.k - 1)
        top2 = X.level_degree(X.k - 2)
        if top1 > 1:
            bound = math.log2(top2) / math.log2(top1)
    return DiameterStats(min(ds), max(ds), float(np.mean(ds)), bound)


@dataclass(frozen=True)
class LawResult:
    name: str
    passed: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"passed": self.passed, "detail": self.detail}


@dataclass
class LiftReport:
    laws: dict[str, LawResult]
    base_cert: HDXCertificate | None = None
    lift_cert: HDXCertificate | None = None

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.laws.values())

    def first_failure(self) -> LawResult | None:
        return next((r for r in self.laws.values() if not r.passed), None)

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "laws": {name: r.to_json() for name, r in self.laws.items()},
            "base_cert": self.base_cert.to_json() if self.base_cert else None,
            "lift_cert": self.lift_cert.to_json() if self.lift_cert else None,
        }


def _law(name: str, fn: Callable[[], str | None]) -> LawResult:
    try:
        problem = fn()
    except (HDXError, ValueError, KeyError) as exc:
        problem = f"{type(exc).__name__}: {exc}"
    return LawResult(name, problem is None, problem or "")


def expected_lift_profile(degrees: Sequence[int]) -> tuple[int, ...]:
    return tuple(2 * d for d in degrees[:-1]) + (degrees[-1],)


def expected_lift_counts(counts: Sequence[int]) -> tuple[int, ...]:
    k = len(counts) - 1
    return tuple(2 ** (l + 1) * c for l, c in enumerate(counts[:-1])) + (2**k * counts[-1],)


def _sub_multiset(big, small, tol: float):
    """Remove ``small`` from ``big`` (both descending) matching within ``tol``."""
    rest = list(big)
    for x in small:
        j = min(range(len(rest)), key=lambda i: abs(rest[i] - x), default=None)
        if j is None or abs(rest[j] - x) > tol:
            return None
        rest.pop(j)
    return np.asarray(rest)


def verify_lift_laws(
    X: SimplicialComplex,
    f: Signing,
    X_hat: SimplicialComplex,
    laws: Iterable[str] | None = None,
    certificates: bool = True,
    threads: int = 1,
) -> LiftReport:
    """Run the structural laws of a local lift; failures are recorded, not raised."""
    chosen = tuple(laws) if laws is not None else ALL_LAWS
    unknown = [x for x in chosen if x not in ALL_LAWS]
    if unknown:
        raise ValueError(f"unknown laws {unknown}; choose from {list(ALL_LAWS)}")
    k = X.k
    results: dict[str, LawResult] = {}

    def invariants():
        try:
            X_hat.validate()
        except ComplexError as exc:
            return f"{type(exc).__name__}: {exc}"
        if X_hat.k != k or X_hat.vertex_count != 2 * X.vertex_count:
            return f"lift has k={X_hat.k}, {X_hat.vertex_count} vertices; expected k={k}, {2 * X.vertex_count}"
        return None

    def regularity():
        base = X.regularity_profile()
        if not base.regular:
            return f"base complex is irregular at {base.offending}"
        got = X_hat.regularity_profile()
        want = expected_lift_profile(base.degrees)
        if not got.regular:
            level, face, first, seen = got.offending
            return f"lift is irregular at level {level}: face {face_key(face)} has degree {seen}, earlier faces {first}"
        if got.degrees != want:
            return f"lift profile {got.degrees} != expected {want}"
        return None

    def face_counts():
        want = expected_lift_counts(X.counts())
        got = X_hat.counts()
        for level, (a, b) in enumerate(zip(got, want)):
            if a != b:
                return f"level {level}: {a} faces, expected {b}"
        return None

    def link_structure():
        for level in range(-1, k - 1):
            for sh in X_hat.faces(level):
                check_link_structure(X, f, X_hat, sh)
        return None

    def spectrum_union():
        for sh in X_hat.faces(k - 2):
            sigma = projection(sh)
            base_graph = X.link(sigma).graph()
            g = induced_edge_signing(X, f, sh)
            lifted = measure_link(X_hat, sh)
            predicted = union_spectrum(base_graph, g)
            ok, bad = multiset_close(lifted.eigenvalues, predicted)
            if not ok:
                return f"link of {face_key(sh)}: eigenvalue {bad} is {lifted.eigenvalues[bad]:.12g}, union predicts {predicted[bad]:.12g}"
            predicted_lambda = report_from_eigenvalues(predicted).two_sided
            if abs(predicted_lambda - lifted.two_sided) > SPECTRAL_TOL:
                return f"link of {face_key(sh)}: lambda {lifted.two_sided:.12g} vs union {predicted_lambda:.12g}"
        return None

    def lower_links():
        for level in range(-1, k - 2):
            for sh in X_hat.faces(level):
                a = measure_link(X_hat, sh).two_sided
                b = measure_link(X, projection(sh)).two_sided
                if abs(a - b) > SPECTRAL_TOL:
                    return f"link of {face_key(sh)}: lambda {a:.12g} vs base {b:.12g}"
        return None

    table = {
        "invariants": invariants,
        "regularity": regularity,
        "face-counts": face_counts,
        "link-structure": link_structure,
        "spectrum-union": spectrum_union,
        "lower-link-spectra": lower_links,
    }
    structural_ok = True
    for name in chosen:
        if name in ("link-structure", "spectrum-union", "lower-link-spectra") and not structural_ok:
            results[name] = LawResult(name, False, "skipped: lift is not a valid complex")
            continue
        results[name] = _law(name, table[name])
        if name == "invariants" and not results[name].passed:
            structural_ok = False
    report = LiftReport(results)
    if certificates:
        report.base_cert = certify_hdx(X, threads)
        report.lift_cert = certify_hdx(X_hat, threads) if structural_ok else None
    return report


@dataclass
class FamilyReport:
    base_cert: HDXCertificate
    stages: list[LiftReport] = field(default_factory=list)
    vertex_counts: list[int] = field(default_factory=list)
    top_degrees: list[int | None] = field(default_factory=list)
    failed_stages: list[int] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failed_stages and len(set(self.top_degrees)) <= 1

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "vertex_counts": self.vertex_counts,
            "top_degrees": self.top_degrees,
            "failed_stages": self.failed_stages,
            "base_cert": self.base_cert.to_json(),
            "stages": [s.to_json() for s in self.stages],
        }


def certify_family(
    X0: SimplicialComplex,
    signings: Sequence,
    level_reports: bool = True,
    threads: int = 1,
) -> FamilyReport:
    """Fold :func:`local_lift` over ``signings`` and check the laws at every stage.

    Each signing may be a :class:`Signing` for its stage's complex or a plain
    ``{face_key: value}`` mapping.
    """
    report = FamilyReport(certify_hdx(X0, threads))
    X = X0
    report.vertex_counts.append(X.vertex_count)
    report.top_degrees.append(_top_degree(X))
    for stage, sg in enumerate(signings, start=1):
        f = _as_signing(X, sg, stage)
        X_hat = local_lift(X, f)
        lr = verify_lift_laws(X, f, X_hat, certificates=level_reports, threads=threads)
        report.stages.append(lr)
        if not lr.passed:
            report.failed_stages.append(stage)
        X = X_hat
        report.vertex_counts.append(X.vertex_count)
        report.top_degrees.append(_top_degree(X))
        if report.top_degrees[-1] != report.top_degrees[0] and stage not in report.failed_stages:
            report.failed_stages.append(stage)
    return report


def _top_degree(X: SimplicialComplex) -> int | None:
    p = X.regularity_profile()
    return p.degrees[-1] if p.regular and p.degrees else None


def _as_signing(X: SimplicialComplex, sg, stage: int) -> Signing:
    if isinstance(sg, Signing):
        if sg.complex != X:
            raise DomainError(f"stage {stage}: signing was built for a different complex")
        return sg
    try:
        return Signing.from_mapping(X, sg)
    except DomainError as exc:
        raise DomainError(f"stage {stage}: {exc}") from exc


@dataclass(frozen=True)
class LinkLiftAudit:
    max_norm: float
    max_norm_face: Face
    norm_failures: tuple[Face, ...]
    sparse_failures: tuple[tuple[Face, object], ...]
    union_failures: tuple[Face, ...]

    @property
    def passed(self) -> bool:
        return not (self.norm_failures or self.sparse_failures or self.union_failures)

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "max_norm": self.max_norm,
            "max_norm_face": face_key(self.max_norm_face),
            "norm_failures": [face_key(x) for x in self.norm_failures],
            "sparse_failures": [[face_key(x), w.to_json()] for x, w in self.sparse_failures],
            "union_failures": [face_key(x) for x in self.union_failures],
        }


def audit_link_lifts(
    X: SimplicialComplex,
    X_hat: SimplicialComplex,
    lambda_target: float,
    beta: float,
    t: int,
    tol: float = SPECTRAL_TOL,
    threads: int = 1,
) -> LinkLiftAudit:
    """Check every ``(k-2)``-link of the lift for signed norm and sparseness.

    The signed spectrum is what remains of the lifted link's spectrum once
    the base link's spectrum is removed, so the lift is measured directly.
    """

    def one(sh):
        lifted_graph = X_hat.link(sh).graph()
        lifted = eigenvalues(normalized_adjacency(lifted_graph))
        base = eigenvalues(normalized_adjacency(X.link(projection(sh)).graph()))
        new = _sub_multiset(lifted, base, tol)
        witness = is_sparse(lifted_graph, beta, t)
        norm = float(np.max(np.abs(new))) if new is not None and len(new) else math.nan
        return sh, new is not None, norm, witness

    results = _map(one, X_hat.faces(X.k - 2), threads)
    max_norm, max_face = -1.0, ()
    norm_fail, sparse_fail, union_fail = [], [], []
    for sh, matched, norm, witness in results:
        if not matched:
            union_fail.append(sh)
            continue
        if norm > max_norm:
            max_norm, max_face = norm, sh
        if norm > lambda_target + tol:
            norm_fail.append(sh)
        if witness is not None:
            sparse_fail.append((sh, witness))
    return LinkLiftAudit(max_norm, max_face, tuple(norm_fail), tuple(sparse_fail), tuple(union_fail))
