# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_pykernels``.

Same inputs, same enumeration order, same results.
"""

from libc.math cimport sqrt, fabs

import numpy as np

from ._pykernels import feasible_sizes

cdef double TOL = 1e-12


cdef struct SparseCtx:
    int n
    int top
    int d
    double beta
    const long long* adj      # n x maxdeg, padded with -1
    const int* deg
    int maxdeg
    const long long* w        # n x n weights
    const unsigned char* feas # (t+1) x (t+1)
    int tdim
    int* cover
    int* sub
    int nsub
    unsigned char* ext        # (top+1) x n masks, one row per depth
    int found
    int ws[64]
    int wsz
    int wt[64]
    int wtz
    double wvalue


cdef int _check(SparseCtx* c) noexcept nogil:
    cdef int u = c.nsub
    cdef int us[64]
    cdef int i, j, a, tmask, tsz, ns, nt
    cdef long long total
    cdef double value
    cdef int S[64]
    cdef int T[64]
    for i in range(u):
        us[i] = c.sub[i]
    # insertion sort, u is tiny
    for i in range(1, u):
        a = us[i]
        j = i - 1
        while j >= 0 and us[j] > a:
            us[j + 1] = us[j]
            j -= 1
        us[j + 1] = a
    for tmask in range(1, 1 << (u - 1)):
        tsz = 0
        for i in range(u - 1):
            if (tmask >> i) & 1:
                tsz += 1
        if not c.feas[u * c.tdim + tsz]:
            continue
        ns = 1
        nt = 0
        S[0] = us[0]
        for i in range(u - 1):
            if (tmask >> i) & 1:
                T[nt] = us[i + 1]
                nt += 1
            else:
                S[ns] = us[i + 1]
                ns += 1
        total = 0
        for i in range(ns):
            for j in range(nt):
                total += c.w[S[i] * c.n + T[j]]
        value = <double>total / c.d
        if fabs(value) > c.beta * sqrt(<double>(ns * nt)) + TOL:
            c.wsz = ns
            for i in range(ns):
                c.ws[i] = S[i]
            c.wtz = nt
            for i in range(nt):
                c.wt[i] = T[i]
            c.wvalue = value
            c.found = 1
            return 1
    return 0


cdef void _touch(SparseCtx* c, int x, int delta) noexcept nogil:
    cdef int j
    cdef long long y
    c.cover[x] += delta
    for j in range(c.deg[x]):
        y = c.adj[x * c.maxdeg + j]
        c.cover[y] += delta


cdef int _extend(SparseCtx* c, int depth, int anchor) noexcept nogil:
    cdef unsigned char* ext = c.ext + depth * c.n
    cdef unsigned char* child
    cdef int x, y, j, i
    if c.nsub >= 2:
        if _check(c):
            return 1
    if c.nsub == c.top:
        return 0
    child = c.ext + (depth + 1) * c.n
    for x in range(c.n):
        if not ext[x]:
            continue
        for i in range(c.n):
            child[i] = ext[i] if i > x else 0
        for j in range(c.deg[x]):
            y = <int>c.adj[x * c.maxdeg + j]
            if y > anchor and c.cover[y] == 0:
                child[y] = 1
        _touch(c, x, 1)
        c.sub[c.nsub] = x
        c.nsub += 1
        if _extend(c, depth + 1, anchor):
            return 1
        c.nsub -= 1
        _touch(c, x, -1)
    return 0


def first_sparse_violation(adj, weights, int t, double beta, int d, bint prune=True):
    table, top = feasible_sizes(t, beta, d, prune)
    if top < 2:
        return None
    if top > 60:
        raise ValueError("union size limit exceeded")
    cdef int n = len(adj)
    cdef int maxdeg = max([len(row) for row in adj] + [1])
    pad = np.full((n, maxdeg), -1, dtype=np.int64)
    degs = np.zeros(n, dtype=np.int32)
    for i, row in enumerate(adj):
        degs[i] = len(row)
        pad[i, : len(row)] = row
    cdef long long[:, ::1] adj_v = pad
    cdef int[::1] deg_v = degs
    cdef long long[:, ::1] w_v = np.ascontiguousarray(weights, dtype=np.int64)
    feas = np.zeros((t + 1, t + 1), dtype=np.uint8)
    for u in range(t + 1):
        for s in range(t + 1):
            feas[u, s] = table[u][s]
    cdef unsigned char[:, ::1] feas_v = feas
    cover = np.zeros(n, dtype=np.int32)
    sub = np.zeros(top + 1, dtype=np.int32)
    ext = np.zeros((top + 2, n), dtype=np.uint8)
    cdef int[::1] cover_v = cover
    cdef int[::1] sub_v = sub
    cdef unsigned char[:, ::1] ext_v = ext

    cdef SparseCtx c
    c.n = n
    c.top = top
    c.d = d
    c.beta = beta
    c.adj = &adj_v[0, 0]
    c.deg = &deg_v[0]
    c.maxdeg = maxdeg
    c.w = &w_v[0, 0]
    c.feas = &feas_v[0, 0]
    c.tdim = t + 1
    c.cover = &cover_v[0]
    c.sub = &sub_v[0]
    c.nsub = 0
    c.ext = &ext_v[0, 0]
    c.found = 0

    cdef int a, j, y
    with nogil:
        for a in range(n):
            c.sub[0] = a
            c.nsub = 1
            _touch(&c, a, 1)
            for j in range(n):
                c.ext[j] = 0
            for j in range(c.deg[a]):
                y = <int>c.adj[a * maxdeg + j]
                if y > a:
                    c.ext[y] = 1
            if _extend(&c, 0, a):
                break
            _touch(&c, a, -1)
    if not c.found:
        return None
    return (tuple(c.ws[i] for i in range(c.wsz)),
            tuple(c.wt[i] for i in range(c.wtz)),
            c.wvalue)


cdef struct WalkCtx:
    int d
    const long long* nbr
    const long long* eid
    const signed char* sign
    unsigned char* parity
    long long total


cdef void _walk(WalkCtx* c, int v, int start, int left, int odd, int prod) noexcept nogil:
    cdef int j, e, s
    if odd > left:
        return
    if left == 0:
        if v == start:
            c.total += prod
        return
    left -= 1
    for j in range(c.d):
        e = <int>c.eid[v * c.d + j]
        s = c.sign[e]
        if s == 0:
            if c.parity[e]:
                c.parity[e] = 0
                _walk(c, <int>c.nbr[v * c.d + j], start, left, odd - 1, prod)
                c.parity[e] = 1
            else:
                c.parity[e] = 1
                _walk(c, <int>c.nbr[v * c.d + j], start, left, odd + 1, prod)
                c.parity[e] = 0
        else:
            _walk(c, <int>c.nbr[v * c.d + j], start, left, odd, prod * s)


def closed_walk_numerator(nbr, eid, sign, int r):
    cdef long long[:, ::1] nbr_v = np.ascontiguousarray(nbr, dtype=np.int64)
    cdef long long[:, ::1] eid_v = np.ascontiguousarray(eid, dtype=np.int64)
    sg = np.ascontiguousarray(sign, dtype=np.int8)
    cdef signed char[::1] sign_v = sg
    par = np.zeros(max(len(sg), 1), dtype=np.uint8)
    cdef unsigned char[::1] par_v = par
    cdef int m = nbr_v.shape[0]
    cdef WalkCtx c
    cdef int v
    if m == 0:
        return 0
    c.d = nbr_v.shape[1]
    if c.d == 0:
        return 0
    c.nbr = &nbr_v[0, 0]
    c.eid = &eid_v[0, 0]
    c.sign = &sign_v[0] if len(sg) else NULL
    c.parity = &par_v[0]
    c.total = 0
    with nogil:
        for v in range(m):
            _walk(&c, v, v, r, 0, 1)
    return int(c.total)
