"""Small undirected simple graphs on dense vertex ids.

Graphs here are the 1-skeletons of complexes and links, and the 2-lifts
built from them.  Edges are stored canonically as ``(u, v)`` with
``u < v`` and the edge list is sorted lexicographically, so an edge
signing can be carried as an array aligned with :attr:`Graph.edges`.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Sequence

import numpy as np

from .errors import OperatorError, SelfLoopError


class Graph:
    """Immutable simple graph on vertices ``0 .. n-1``."""

    __slots__ = ("n", "edges", "adj", "edge_index", "_regular")

    def __init__(self, n: int, edges: Iterable[Sequence[int]]):
        canon = set()
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise SelfLoopError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise OperatorError(f"edge {(u, v)} outside vertex range 0..{n - 1}")
            canon.add((u, v) if u < v else (v, u))
        self.n = int(n)
        self.edges: tuple[tuple[int, int], ...] = tuple(sorted(canon))
        self.edge_index = {e: i for i, e in enumerate(self.edges)}
        nbrs: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        self.adj: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(x)) for x in nbrs)
        degs = {len(x) for x in self.adj}
        self._regular = degs.pop() if len(degs) == 1 else None

    @classmethod
    def from_networkx(cls, g) -> "Graph":
        nodes = sorted(g.nodes())
        index = {v: i for i, v in enumerate(nodes)}
        return cls(len(nodes), [(index[u], index[v]) for u, v in g.edges()])

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={len(self.edges)})"

    @property
    def degree(self) -> int | None:
        """Common degree if the graph is regular, else ``None``."""
        return self._regular

    def is_regular(self) -> bool:
        return self._regular is not None

    def edge_id(self, u: int, v: int) -> int:
        return self.edge_index[(u, v) if u < v else (v, u)]

    def adjacency_matrix(self, signs=None) -> np.ndarray:
        """Dense integer adjacency, optionally multiplied entrywise by ``signs``."""
        a = np.zeros((self.n, self.n), dtype=np.int64)
        if not self.edges:
            return a
        idx = np.asarray(self.edges, dtype=np.int64)
        w = np.ones(len(self.edges), dtype=np.int64) if signs is None else np.asarray(signs, dtype=np.int64)
        a[idx[:, 0], idx[:, 1]] = w
        a[idx[:, 1], idx[:, 0]] = w
        return a

    def neighbor_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """``(nbr, eid)`` arrays of shape ``(n, d)`` for a d-regular graph."""
        d = self._regular
        if d is None:
            raise OperatorError("neighbor arrays need a regular graph")
        nbr = np.zeros((self.n, d), dtype=np.int64)
        eid = np.zeros((self.n, d), dtype=np.int64)
        for u in range(self.n):
            for j, v in enumerate(self.adj[u]):
                nbr[u, j] = v
                eid[u, j] = self.edge_id(u, v)
        return nbr, eid

    def components(self) -> list[list[int]]:
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            comp = [s]
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for v in self.adj[u]:
                    if not seen[v]:
                        seen[v] = True
                        comp.append(v)
                        queue.append(v)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def eccentricity(self, s: int) -> float:
        dist = [-1] * self.n
        dist[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in self.adj[u]:
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    queue.append(v)
        if min(dist) < 0:
            return float("inf")
        return max(dist)

    def diameter(self) -> float:
        """BFS diameter; ``inf`` for a disconnected graph."""
        if self.n == 0:
            return 0
        return max(self.eccentricity(s) for s in range(self.n))

    def induced_connected(self, vertices: Iterable[int]) -> bool:
        vs = set(vertices)
        if len(vs) <= 1:
            return True
        start = next(iter(vs))
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for v in self.adj[u]:
                if v in vs and v not in seen:
                    seen.add(v)
                    stack.append(v)
        return len(seen) == len(vs)


def complete_graph(n: int) -> Graph:
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def cycle_graph(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])
