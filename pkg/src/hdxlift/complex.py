"""Pure simplicial complexes stored by levels of canonically ordered faces.

A face is a strictly increasing tuple of vertex ids.  Level ``l`` holds the
faces with ``l + 1`` vertices; level ``-1`` is the single empty face, which
makes ``link(X, ())`` and the ``k = 1`` case of the lifting algorithms work
without special-casing.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .errors import (
    DimensionError,
    FaceNotFoundError,
    LevelError,
    MultifaceError,
    PurityError,
    SelfLoopError,
)
from .graph import Graph

Face = tuple[int, ...]


def face_key(face: Iterable[int]) -> str:
    """Dash-joined canonical key used in every JSON map (``"0-3-7"``)."""
    return "-".join(str(v) for v in sorted(face))


def parse_face_key(key: str) -> Face:
    if key == "":
        return ()
    return tuple(sorted(int(x) for x in key.split("-")))


@dataclass(frozen=True)
class RegularityProfile:
    """Degrees ``(d_0, .., d_{k-1})``, or the first face breaking regularity.

    When irregular, ``degrees`` is ``None`` and ``offending`` holds
    ``(level, face, degree_seen_first, degree_of_face)``.
    """

    degrees: tuple[int, ...] | None
    offending: tuple | None = None

    @property
    def regular(self) -> bool:
        return self.degrees is not None

    def __getitem__(self, i):
        if self.degrees is None:
            raise LevelError("irregular complex has no degree profile")
        return self.degrees[i]


class SimplicialComplex:
    """Immutable pure ``k``-dimensional simplicial complex."""

    def __init__(
        self,
        k: int,
        vertex_count: int,
        faces_by_level: Sequence[Iterable[Face]],
        labels: Sequence | None = None,
        validate: bool = True,
    ):
        if k < 0:
            raise DimensionError(f"dimension must be >= 0, got {k}")
        if len(faces_by_level) != k + 1:
            raise DimensionError(f"expected {k + 1} levels, got {len(faces_by_level)}")
        self.k = int(k)
        self.vertex_count = int(vertex_count)
        self.faces_by_level: tuple[tuple[Face, ...], ...] = tuple(
            tuple(sorted(tuple(f) for f in level)) for level in faces_by_level
        )
        self.face_index: tuple[dict[Face, int], ...] = tuple(
            {f: i for i, f in enumerate(level)} for level in self.faces_by_level
        )
        self.labels = tuple(labels) if labels is not None else None
        self._vertex_tops: list[list[int]] | None = None
        self._profile: RegularityProfile | None = None
        self._link_cache: dict[Face, LinkView] = {}
        if validate:
            self.validate()

    # -- access -----------------------------------------------------------

    def faces(self, level: int) -> tuple[Face, ...]:
        if level == -1:
            return ((),)
        if not 0 <= level <= self.k:
            raise LevelError(f"level {level} outside -1..{self.k}")
        return self.faces_by_level[level]

    def index(self, face: Sequence[int]) -> int:
        f = tuple(face)
        level = len(f) - 1
        if level == -1:
            return 0
        if not 0 <= level <= self.k or f not in self.face_index[level]:
            raise FaceNotFoundError(f"face {face_key(f) or '(empty)'} not in complex")
        return self.face_index[level][f]

    def __contains__(self, face) -> bool:
        f = tuple(face)
        if not f:
            return True
        level = len(f) - 1
        return level <= self.k and f in self.face_index[level]

    @property
    def top_faces(self) -> tuple[Face, ...]:
        return self.faces_by_level[self.k]

    def counts(self) -> tuple[int, ...]:
        return tuple(len(level) for level in self.faces_by_level)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SimplicialComplex)
            and self.k == other.k
            and self.vertex_count == other.vertex_count
            and self.faces_by_level == other.faces_by_level
        )

    def __hash__(self) -> int:
        return hash((self.k, self.vertex_count, self.top_faces))

    def __repr__(self) -> str:
        return f"SimplicialComplex(k={self.k}, counts={self.counts()})"

    # -- validation -------------------------------------------------------

    def validate(self) -> None:
        """Check canonical form, downward closure and purity; raise on failure."""
        for level, faces in enumerate(self.faces_by_level):
            seen = set()
            for f in faces:
                if len(f) != level + 1:
                    raise DimensionError(f"face {face_key(f)} listed at level {level}")
                if len(set(f)) != len(f):
                    raise SelfLoopError(f"face {f} repeats a vertex")
                if any(f[i] >= f[i + 1] for i in range(len(f) - 1)):
                    raise SelfLoopError(f"face {f} is not strictly increasing")
                if f[0] < 0 or f[-1] >= self.vertex_count:
                    raise DimensionError(f"face {face_key(f)} uses a vertex outside 0..{self.vertex_count - 1}")
                if f in seen:
                    raise MultifaceError(f"face {face_key(f)} listed twice")
                seen.add(f)
        for level in range(1, self.k + 1):
            below = self.face_index[level - 1]
            for f in self.faces_by_level[level]:
                for sub in combinations(f, level):
                    if sub not in below:
                        raise PurityError(
                            f"face {face_key(f)} is missing its subface {face_key(sub)}"
                        )
        if len(self.faces_by_level[0]) != self.vertex_count:
            present = {f[0] for f in self.faces_by_level[0]}
            missing = [v for v in range(self.vertex_count) if v not in present]
            raise PurityError(f"vertex {missing[0] if missing else '?'} is not a 0-face")
        for level in range(self.k):
            above = self.faces_by_level[level + 1]
            covered = set()
            for f in above:
                covered.update(combinations(f, level + 1))
            for f in self.faces_by_level[level]:
                if f not in covered:
                    raise PurityError(f"face {face_key(f)} is not contained in any {self.k}-face")

    # -- degrees ----------------------------------------------------------

    def degree(self, sigma: Sequence[int]) -> int:
        """Number of faces one level up that contain ``sigma``."""
        s = tuple(sorted(sigma))
        if s and s not in self:
            raise FaceNotFoundError(f"face {face_key(s)} not in complex")
        level = len(s) - 1
        if level >= self.k:
            if level > self.k:
                raise LevelError(f"level {level} outside -1..{self.k}")
            return 0
        if level == -1:
            return len(self.faces_by_level[0])
        tops = self._tops_containing(s)
        # each coface at level+1 is s plus one extra vertex of some top face
        extra = set()
        for t in tops:
            extra.update(v for v in self.top_faces[t] if v not in s)
        return len(extra)

    def regularity_profile(self) -> RegularityProfile:
        if self._profile is None:
            self._profile = self._compute_profile()
        return self._profile

    def _compute_profile(self) -> RegularityProfile:
        degrees = []
        for level in range(self.k):
            counts = dict.fromkeys(self.faces_by_level[level], 0)
            for f in self.faces_by_level[level + 1]:
                for sub in combinations(f, level + 1):
                    counts[sub] += 1
            values = iter(counts.items())
            first_face, first = next(values)
            for face, c in values:
                if c != first:
                    return RegularityProfile(None, (level, face, first, c))
            degrees.append(first)
        return RegularityProfile(tuple(degrees))

    def is_regular(self) -> bool:
        return self.regularity_profile().regular

    def level_degree(self, level: int) -> int:
        """``d_level`` of a regular complex; ``d_{-1}`` is the vertex count."""
        if level == -1:
            return len(self.faces_by_level[0])
        return self.regularity_profile()[level]

    # -- links and skeletons ---------------------------------------------

    def _tops_containing(self, sigma: Face) -> list[int]:
        if self._vertex_tops is None:
            vt: list[list[int]] = [[] for _ in range(self.vertex_count)]
            for i, t in enumerate(self.top_faces):
                for v in t:
                    vt[v].append(i)
            self._vertex_tops = vt
        if not sigma:
            return list(range(len(self.top_faces)))
        lists = sorted((self._vertex_tops[v] for v in sigma), key=len)
        rest = set(sigma)
        return [i for i in lists[0] if rest.issubset(self.top_faces[i])]

    def tops_containing(self, sigma: Sequence[int]) -> list[int]:
        """Indices into ``X(k)`` of the top faces containing ``sigma``."""
        s = tuple(sorted(sigma))
        if s not in self:
            raise FaceNotFoundError(f"face {face_key(s)} not in complex")
        return self._tops_containing(s)

    def link(self, sigma: Sequence[int]) -> "LinkView":
        s = tuple(sorted(sigma))
        cached = self._link_cache.get(s)
        if cached is not None:
            return cached
        if s not in self:
            raise FaceNotFoundError(f"face {face_key(s)} not in complex")
        if not s:
            view = LinkView(self, (), self, tuple(range(self.vertex_count)))
        else:
            inner = set(s)
            tops = [tuple(v for v in self.top_faces[i] if v not in inner) for i in self._tops_containing(s)]
            verts = sorted({v for t in tops for v in t})
            remap = {v: i for i, v in enumerate(verts)}
            dim = self.k - len(s)
            local = [tuple(remap[v] for v in t) for t in tops]
            view = LinkView(self, s, _closure(dim, len(verts), local), tuple(verts))
        self._link_cache[s] = view
        return view

    def skeleton(self, j: int) -> "SimplicialComplex":
        if not 0 <= j <= self.k:
            raise LevelError(f"skeleton level {j} outside 0..{self.k}")
        return SimplicialComplex(j, self.vertex_count, self.faces_by_level[: j + 1], self.labels)

    def graph(self) -> Graph:
        """The 1-skeleton as a :class:`Graph`."""
        edges = self.faces_by_level[1] if self.k >= 1 else ()
        return Graph(self.vertex_count, edges)


@dataclass(frozen=True)
class LinkView:
    """Link of ``sigma`` in ``base``; ``vertex_map[i]`` is the parent id of link vertex ``i``."""

    base: SimplicialComplex
    sigma: Face
    complex: SimplicialComplex
    vertex_map: tuple[int, ...]

    def to_parent(self, face: Iterable[int]) -> Face:
        return tuple(sorted(self.vertex_map[v] for v in face))

    def local_index(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.vertex_map)}

    def graph(self) -> Graph:
        return self.complex.graph()


def _closure(k: int, n: int, tops: Iterable[Face], labels=None) -> SimplicialComplex:
    top_set = {tuple(sorted(t)) for t in tops}
    levels = [set() for _ in range(k + 1)]
    levels[k] = top_set
    for level in range(k - 1, -1, -1):
        acc = levels[level]
        for f in levels[level + 1]:
            acc.update(combinations(f, level + 1))
    return SimplicialComplex(k, n, levels, labels, validate=False)


def build_from_top_faces(
    k: int,
    top_faces: Iterable[Sequence[int]],
    vertices: int | None = None,
    labels: Sequence | None = None,
) -> SimplicialComplex:
    """Downward closure of ``top_faces``.

    Listed faces smaller than ``k + 1`` vertices are accepted only when they
    already lie inside a listed top face; otherwise the input is not pure.
    """
    if k < 0:
        raise DimensionError(f"dimension must be >= 0, got {k}")
    tops: list[Face] = []
    small: list[Face] = []
    seen = set()
    for raw in top_faces:
        f = tuple(int(v) for v in raw)
        if any(v < 0 for v in f):
            raise DimensionError(f"negative vertex id in face {list(raw)}")
        if len(set(f)) != len(f):
            raise SelfLoopError(f"face {list(raw)} repeats a vertex")
        f = tuple(sorted(f))
        if len(f) > k + 1:
            raise DimensionError(f"face {face_key(f)} has {len(f)} vertices, more than k+1={k + 1}")
        if len(f) < k + 1:
            small.append(f)
            continue
        if f in seen:
            raise MultifaceError(f"top face {face_key(f)} listed twice")
        seen.add(f)
        tops.append(f)
    if not tops:
        raise DimensionError("a complex needs at least one top face")
    for f in small:
        if not any(set(f).issubset(t) for t in tops):
            raise PurityError(f"face {face_key(f)} is not contained in any {k}-face")
    n = max(max(t) for t in tops) + 1
    if vertices is not None:
        if vertices < n:
            raise DimensionError(f"declared {vertices} vertices but ids reach {n - 1}")
        n = vertices
    used = {v for t in tops for v in t}
    for v in range(n):
        if v not in used:
            raise PurityError(f"vertex {v} is not contained in any {k}-face")
    cx = _closure(k, n, tops, labels)
    cx.validate()
    return cx


def complete_complex(n: int, k: int) -> SimplicialComplex:
    """All ``(l+1)``-subsets of ``{0..n-1}`` for ``l <= k``."""
    if k < 0 or n <= k:
        raise DimensionError(f"complete complex needs n >= k+1, got n={n}, k={k}")
    levels = [list(combinations(range(n), level + 1)) for level in range(k + 1)]
    return SimplicialComplex(k, n, levels)
