"""Pure-Python reference versions of the hot kernels.

``_ckernels.pyx`` implements the same two functions with the same
enumeration order; :mod:`hdxlift.kernels` picks one at import time.
"""

from __future__ import annotations

import math

import numpy as np

TOL = 1e-12


def feasible_sizes(t: int, beta: float, d: int, prune: bool = True) -> tuple[list[list[bool]], int]:
    """Which ``(|S|+|T|, |T|)`` size pairs can possibly exceed the bound.

    ``|sum of weights over E(S,T)| <= min(|S||T|, |S|d, |T|d)`` for a graph of
    maximum degree ``d``, so size pairs whose ceiling sits under
    ``beta * sqrt(|S||T|)`` never produce a witness.  Returns the table and the
    largest union size still worth enumerating.
    """
    table = [[False] * (t + 1) for _ in range(t + 1)]
    top = 0
    for u in range(2, t + 1):
        for s in range(1, u):
            a, b = u - s, s
            if prune:
                ceiling = min(a * b, a * d, b * d) / d
                ok = ceiling > beta * math.sqrt(a * b) + TOL
            else:
                ok = True
            table[u][s] = ok
            if ok:
                top = u
    return table, top


def first_sparse_violation(adj, weights, t: int, beta: float, d: int, prune: bool = True):
    """First ``(S, T, value)`` in canonical order breaking ``|form| <= beta sqrt(|S||T|)``.

    ``adj`` are sorted neighbour tuples, ``weights`` an integer matrix whose
    ``(u, v)`` entry is the (signed) edge weight, ``d`` the normalising
    degree.  Unions ``U = S + T`` range over connected vertex sets with
    ``2 <= |U| <= t``, grown by extension-set search anchored at ``min(U)``.
    """
    n = len(adj)
    table, top = feasible_sizes(t, beta, d, prune)
    if top < 2:
        return None
    w = np.asarray(weights)
    wl = w.tolist()
    cover = [0] * n
    sub: list[int] = []

    def check():
        u = len(sub)
        us = sorted(sub)
        row = table[u]
        for tmask in range(1, 1 << (u - 1)):
            tsz = bin(tmask).count("1")
            if not row[tsz]:
                continue
            T = [us[i + 1] for i in range(u - 1) if tmask >> i & 1]
            S = [us[0]] + [us[i + 1] for i in range(u - 1) if not tmask >> i & 1]
            total = 0
            for a in S:
                ra = wl[a]
                for b in T:
                    total += ra[b]
            value = total / d
            if abs(value) > beta * math.sqrt(len(S) * len(T)) + TOL:
                return tuple(S), tuple(T), value
        return None

    def extend(ext, anchor):
        if len(sub) >= 2:
            hit = check()
            if hit is not None:
                return hit
        if len(sub) == top:
            return None
        for idx, x in enumerate(ext):
            excl = [y for y in adj[x] if y > anchor and cover[y] == 0]
            cover[x] += 1
            for y in adj[x]:
                cover[y] += 1
            sub.append(x)
            hit = extend(sorted(set(ext[idx + 1:]).union(excl)), anchor)
            sub.pop()
            cover[x] -= 1
            for y in adj[x]:
                cover[y] -= 1
            if hit is not None:
                return hit
        return None

    for a in range(n):
        sub.append(a)
        cover[a] += 1
        for y in adj[a]:
            cover[y] += 1
        hit = extend([y for y in adj[a] if y > a], a)
        sub.pop()
        cover[a] -= 1
        for y in adj[a]:
            cover[y] -= 1
        if hit is not None:
            return hit
    return None


def closed_walk_numerator(nbr, eid, sign, r: int) -> int:
    """Signed count of rooted closed walks of length ``r`` that survive averaging.

    A walk contributes the product of the assigned signs it uses (with
    multiplicity) when every unassigned edge (``sign == 0``) appears an even
    number of times, and zero otherwise.
    """
    nbr = np.asarray(nbr).tolist()
    eid = np.asarray(eid).tolist()
    sg = np.asarray(sign).tolist()
    parity = [0] * len(sg)
    total = 0

    def walk(v, start, left, odd, prod):
        nonlocal total
        if odd > left:
            return
        if left == 0:
            if v == start:
                total += prod
            return
        left -= 1
        nv = nbr[v]
        ne = eid[v]
        for j in range(len(nv)):
            e = ne[j]
            s = sg[e]
            if s == 0:
                if parity[e]:
                    parity[e] = 0
                    walk(nv[j], start, left, odd - 1, prod)
                    parity[e] = 1
                else:
                    parity[e] = 1
                    walk(nv[j], start, left, odd + 1, prod)
                    parity[e] = 0
            else:
                walk(nv[j], start, left, odd, prod * s)

    for v in range(len(nbr)):
        walk(v, v, r, 0, 1)
    return total


def connected_subsets(adj, max_size: int):
    """Yield every connected vertex set of size ``1 .. max_size`` exactly once.

    Sets come out (as insertion-ordered lists) in the same order the
    sparseness scan visits them.
    """
    n = len(adj)
    cover = [0] * n
    sub: list[int] = []

    def extend(ext, anchor):
        yield list(sub)
        if len(sub) == max_size:
            return
        for idx, x in enumerate(ext):
            excl = [y for y in adj[x] if y > anchor and cover[y] == 0]
            cover[x] += 1
            for y in adj[x]:
                cover[y] += 1
            sub.append(x)
            yield from extend(sorted(set(ext[idx + 1:]).union(excl)), anchor)
            sub.pop()
            cover[x] -= 1
            for y in adj[x]:
                cover[y] -= 1

    for a in range(n):
        sub.append(a)
        cover[a] += 1
        for y in adj[a]:
            cover[y] += 1
        yield from extend([y for y in adj[a] if y > a], a)
        sub.pop()
        cover[a] -= 1
        for y in adj[a]:
            cover[y] -= 1
