"""Graph 2-lifts from edge signings and local lifts of complexes.

Lifted vertex ``v^j`` (``j`` in ``{+1, -1}``) gets the dense id
``2*v + (1 - j)//2``, so ``v^+ = 2v`` and ``v^- = 2v + 1``.  Sorting lifted
ids therefore sorts by base vertex first, which keeps lifted faces in
canonical order without re-sorting.
"""

from __future__ import annotations

from itertools import product
from typing import Iterable, Mapping, Sequence

import numpy as np

from .complex import Face, SimplicialComplex, face_key, parse_face_key
from .errors import (
    DimensionError,
    DomainError,
    FaceNotFoundError,
    LevelError,
    PartialSigningError,
    SpectralViolation,
    StructureViolation,
)
from .graph import Graph
from .spectral import SPECTRAL_TOL, eigenvalues, multiset_close, signed_walk_operator, walk_operator


def lifted_id(v: int, j: int) -> int:
    return 2 * v + (1 - j) // 2


def base_vertex(x: int) -> int:
    return x // 2


def vertex_sign(x: int) -> int:
    return 1 - 2 * (x & 1)


def face_sign(face_hat: Iterable[int]) -> int:
    """Product of the sign coordinates of a lifted face."""
    s = 1
    for x in face_hat:
        s *= vertex_sign(x)
    return s


def projection(face_hat: Iterable[int]) -> Face:
    return tuple(sorted(base_vertex(x) for x in face_hat))


class Signing:
    """Values in ``{+1, -1, 0}`` on the top faces of a complex; ``0`` means unassigned.

    ``values[i]`` belongs to ``complex.top_faces[i]``.
    """

    def __init__(self, complex: SimplicialComplex, values=None):
        self.complex = complex
        n = len(complex.top_faces)
        if values is None:
            self.values = np.zeros(n, dtype=np.int8)
        else:
            v = np.array(values, dtype=np.int8)
            if v.shape != (n,):
                raise DomainError(f"signing has {v.size} values, complex has {n} top faces")
            if np.any((v != 1) & (v != -1) & (v != 0)):
                raise DomainError("signing values must be +1, -1 or 0")
            self.values = v

    @classmethod
    def constant(cls, complex: SimplicialComplex, value: int) -> "Signing":
        return cls(complex, np.full(len(complex.top_faces), value, dtype=np.int8))

    @classmethod
    def random(cls, complex: SimplicialComplex, rng: np.random.Generator) -> "Signing":
        draws = rng.integers(0, 2, size=len(complex.top_faces))
        return cls(complex, (2 * draws - 1).astype(np.int8))

    @classmethod
    def from_mapping(cls, complex: SimplicialComplex, faces: Mapping) -> "Signing":
        """Build from ``{face or face_key: value}``; keys must be exactly ``X(k)``."""
        values = np.zeros(len(complex.top_faces), dtype=np.int8)
        seen = set()
        for key, value in faces.items():
            face = parse_face_key(key) if isinstance(key, str) else tuple(sorted(key))
            if len(face) != complex.k + 1 or face not in complex:
                raise DomainError(f"signing key {face_key(face)} is not a {complex.k}-face of the complex")
            values[complex.index(face)] = 0 if value is None else int(value)
            seen.add(face)
        if len(seen) != len(complex.top_faces):
            missing = next(f for f in complex.top_faces if f not in seen)
            raise DomainError(f"signing has no entry for face {face_key(missing)}")
        return cls(complex, values)

    @property
    def complete(self) -> bool:
        return bool(np.all(self.values != 0))

    def __getitem__(self, face: Sequence[int]) -> int:
        return int(self.values[self.complex.index(tuple(sorted(face)))])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Signing)
            and self.complex == other.complex
            and np.array_equal(self.values, other.values)
        )

    def as_mapping(self) -> dict[str, int]:
        return {face_key(f): int(v) for f, v in zip(self.complex.top_faces, self.values)}

    def copy(self) -> "Signing":
        return Signing(self.complex, self.values.copy())


def _edge_signs(graph: Graph, f) -> np.ndarray:
    if isinstance(f, Mapping):
        s = np.zeros(len(graph.edges), dtype=np.int8)
        for e, v in f.items():
            u, w = e
            s[graph.edge_id(u, w)] = v
        return s
    if np.isscalar(f):
        return np.full(len(graph.edges), int(f), dtype=np.int8)
    return np.asarray(f, dtype=np.int8)


def graph_induced_lift(graph: Graph, f) -> Graph:
    """The 2-lift of ``graph`` induced by edge signs ``f``.

    ``{v^j, u^i}`` is an edge iff ``{u, v}`` is an edge and ``i*j = f(uv)``.
    ``f`` may be an array aligned with ``graph.edges``, a mapping, or a scalar.
    """
    s = _edge_signs(graph, f)
    if s.shape != (len(graph.edges),):
        raise PartialSigningError(f"expected {len(graph.edges)} edge signs, got {s.size}")
    if np.any(s == 0):
        e = graph.edges[int(np.flatnonzero(s == 0)[0])]
        raise PartialSigningError(f"edge {e} has no sign")
    edges = []
    for (u, v), sign in zip(graph.edges, s.tolist()):
        if sign == 1:
            edges.append((2 * u, 2 * v))
            edges.append((2 * u + 1, 2 * v + 1))
        else:
            edges.append((2 * u, 2 * v + 1))
            edges.append((2 * u + 1, 2 * v))
    return Graph(2 * graph.n, edges)


def local_lift(X: SimplicialComplex, f: Signing) -> SimplicialComplex:
    """The ``f``-local lift: sign-blind below the top level, ``prod j = f`` on top."""
    if X.k == 0:
        raise DimensionError("local lifts need dimension k >= 1")
    if f.complex is not X and f.complex != X:
        raise DomainError("signing belongs to a different complex")
    if not f.complete:
        i = int(np.flatnonzero(f.values == 0)[0])
        raise PartialSigningError(f"face {face_key(X.top_faces[i])} has no sign")
    levels: list[list[Face]] = []
    for level in range(X.k):
        out = []
        for face in X.faces(level):
            for bits in product((0, 1), repeat=level + 1):
                out.append(tuple(2 * v + b for v, b in zip(face, bits)))
        levels.append(out)
    top = []
    for face, value in zip(X.top_faces, f.values.tolist()):
        want = 0 if value == 1 else 1
        for bits in product((0, 1), repeat=X.k + 1):
            if sum(bits) & 1 == want:
                top.append(tuple(2 * v + b for v, b in zip(face, bits)))
    levels.append(top)
    return SimplicialComplex(X.k, 2 * X.vertex_count, levels)


def link_edge_signing(X: SimplicialComplex, f: Signing, sigma: Sequence[int]) -> np.ndarray:
    """``f_sigma(e) = f(sigma + e)`` on the edges of the link of a ``(k-2)``-face.

    Aligned with ``X.link(sigma).graph().edges``; unassigned stays ``0``.
    """
    s = tuple(sorted(sigma))
    if len(s) != X.k - 1 or s not in X:
        raise FaceNotFoundError(f"{face_key(s) or '(empty)'} is not a {X.k - 2}-face")
    view = X.link(s)
    g = view.graph()
    out = np.empty(len(g.edges), dtype=np.int8)
    for i, e in enumerate(g.edges):
        out[i] = f.values[X.index(tuple(sorted(s + view.to_parent(e))))]
    return out


def induced_edge_signing(X: SimplicialComplex, f: Signing, sigma_hat: Sequence[int]) -> np.ndarray:
    """``sign(sigma_hat) * f_sigma`` for a lifted ``(k-2)``-face ``sigma_hat``."""
    return face_sign(sigma_hat) * link_edge_signing(X, f, projection(sigma_hat))


def _lift_link_edges(X_hat: SimplicialComplex, sigma_hat: Face) -> tuple[set[int], set[tuple[int, int]]]:
    view = X_hat.link(sigma_hat)
    verts = set(view.vertex_map)
    edges = {view.to_parent(e) for e in view.graph().edges}
    return verts, edges


def _first_difference(expected: set, actual: set):
    missing = sorted(expected - actual)
    extra = sorted(actual - expected)
    if missing and (not extra or missing[0] <= extra[0]):
        return missing[0], "missing"
    return extra[0], "unexpected"


def check_link_structure(
    X: SimplicialComplex,
    f: Signing,
    X_hat: SimplicialComplex,
    sigma_hat: Sequence[int],
) -> bool:
    """Check the link of ``sigma_hat`` in ``X_hat`` against its predicted shape.

    Codimension-2 faces must have the ``f_sigma_hat``-induced lift of the base
    link as their link (identity on ``u^i``); lower faces must have the base
    link's 1-skeleton tensored with the looped two-vertex complete graph.
    Raises :class:`StructureViolation` with the first differing edge.
    """
    sh = tuple(sorted(sigma_hat))
    if sh not in X_hat:
        raise FaceNotFoundError(f"{face_key(sh)} is not a face of the lift")
    dim = len(sh) - 1
    if dim > X.k - 2:
        raise LevelError(f"link structure is described for faces of dimension <= {X.k - 2}, got {dim}")
    sigma = projection(sh)
    if len(set(sigma)) != len(sigma) or sigma not in X:
        raise StructureViolation(f"projection {sigma} of {sh} is not a face of the base")
    base = X.link(sigma)
    bg = base.graph()
    expected_verts = {2 * v + b for v in base.vertex_map for b in (0, 1)}
    if dim == X.k - 2:
        lifted = graph_induced_lift(bg, induced_edge_signing(X, f, sh))
        vm = base.vertex_map
        expected_edges = {
            tuple(sorted((2 * vm[a // 2] + (a & 1), 2 * vm[b // 2] + (b & 1)))) for a, b in lifted.edges
        }
    else:
        expected_edges = set()
        for a, b in bg.edges:
            u, v = base.vertex_map[a], base.vertex_map[b]
            for i, j in product((0, 1), repeat=2):
                expected_edges.add(tuple(sorted((2 * u + i, 2 * v + j))))
    verts, edges = _lift_link_edges(X_hat, sh)
    if verts != expected_verts:
        odd = sorted(verts ^ expected_verts)[0]
        raise StructureViolation(f"link of {face_key(sh)}: vertex {odd} does not match", edge=(odd,))
    if edges != expected_edges:
        edge, kind = _first_difference(expected_edges, edges)
        raise StructureViolation(f"link of {face_key(sh)}: {kind} edge {edge}", edge=edge)
    return True


def union_spectrum(graph: Graph, f) -> np.ndarray:
    """``spec(A)`` joined with ``spec(A^f)``, descending."""
    s = _edge_signs(graph, f)
    both = np.concatenate([eigenvalues(walk_operator(graph).entries), eigenvalues(signed_walk_operator(graph, s).entries)])
    return np.sort(both)[::-1]


def spectrum_union_check(graph: Graph, f, tol: float = SPECTRAL_TOL) -> bool:
    """Eigenvalues of the 2-lift are those of ``A`` together with those of ``A^f``."""
    lift = graph_induced_lift(graph, f)
    lhs = eigenvalues(walk_operator(lift).entries)
    rhs = union_spectrum(graph, f)
    ok, bad = multiset_close(lhs, rhs, tol)
    if not ok:
        raise SpectralViolation(
            f"eigenvalue {bad} differs: lift {lhs[bad]:.12g} vs union {rhs[bad]:.12g}",
            index=bad,
            expected=float(rhs[bad]),
            observed=float(lhs[bad]),
        )
    return True
