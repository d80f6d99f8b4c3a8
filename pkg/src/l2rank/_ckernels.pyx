# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled coset-enumeration and word-tracing kernels.

Same contract as ``l2rank._pykernels``; the table is a flat C array of
``max_cosets * ncols`` ints with union-find parents kept alongside.
"""
from libc.stdlib cimport malloc, realloc, free

BACKEND = "cython"


cdef struct Enum:
    int ncols
    int ncoset
    int cap
    int max_cosets
    int overflow
    int *table
    int *parent
    int *queue
    int qcap


cdef int _grow(Enum *e) except -1:
    cdef int newcap = e.cap * 2
    if newcap > e.max_cosets:
        newcap = e.max_cosets
    cdef int *t = <int *> realloc(e.table, <size_t> newcap * e.ncols * sizeof(int))
    if t == NULL:
        raise MemoryError()
    e.table = t
    cdef int *p = <int *> realloc(e.parent, <size_t> newcap * sizeof(int))
    if p == NULL:
        raise MemoryError()
    e.parent = p
    e.cap = newcap
    return 0


cdef inline int _rep(Enum *e, int c) noexcept nogil:
    cdef int r = c, nxt
    while e.parent[r] != r:
        r = e.parent[r]
    while e.parent[c] != r:
        nxt = e.parent[c]
        e.parent[c] = r
        c = nxt
    return r


cdef int _define(Enum *e, int c, int x) except -2:
    cdef int d, k
    if e.ncoset >= e.max_cosets:
        e.overflow = 1
        return -1
    if e.ncoset >= e.cap:
        _grow(e)
    d = e.ncoset
    e.ncoset += 1
    for k in range(e.ncols):
        e.table[d * e.ncols + k] = -1
    e.parent[d] = d
    e.table[c * e.ncols + x] = d
    e.table[d * e.ncols + (x ^ 1)] = c
    return d


cdef int _push(Enum *e, int *qlen, int b) except -1:
    cdef int *q
    if qlen[0] >= e.qcap:
        e.qcap = e.qcap * 2 + 16
        q = <int *> realloc(e.queue, <size_t> e.qcap * sizeof(int))
        if q == NULL:
            raise MemoryError()
        e.queue = q
    e.queue[qlen[0]] = b
    qlen[0] += 1
    return 0


cdef int _merge(Enum *e, int a, int b, int *qlen) except -1:
    cdef int t
    a = _rep(e, a)
    b = _rep(e, b)
    if a == b:
        return 0
    if a > b:
        t = a
        a = b
        b = t
    e.parent[b] = a
    _push(e, qlen, b)
    return 0


cdef int _coincidence(Enum *e, int a, int b) except -1:
    cdef int qlen = 0, i = 0, g, x, xi, d, mu, nu, n = e.ncols
    cdef int *T
    _merge(e, a, b, &qlen)
    while i < qlen:
        g = e.queue[i]
        i += 1
        for x in range(n):
            T = e.table
            d = T[g * n + x]
            if d < 0:
                continue
            xi = x ^ 1
            if T[d * n + xi] == g:
                T[d * n + xi] = -1
            mu = _rep(e, g)
            nu = _rep(e, d)
            if T[mu * n + x] >= 0:
                _merge(e, nu, T[mu * n + x], &qlen)
            elif T[nu * n + xi] >= 0:
                _merge(e, mu, T[nu * n + xi], &qlen)
            else:
                T[mu * n + x] = nu
                T[nu * n + xi] = mu
    return 0


cdef int _scan_and_fill(Enum *e, int a, int *w, int wlen) except -1:
    cdef int f = a, b = a, i = 0, j = wlen - 1, n = e.ncols, nxt
    while True:
        while i <= j:
            nxt = e.table[f * n + w[i]]
            if nxt < 0:
                break
            f = nxt
            i += 1
        if i > j:
            if f != a:
                _coincidence(e, f, a)
            return 0
        while j >= i:
            nxt = e.table[b * n + (w[j] ^ 1)]
            if nxt < 0:
                break
            b = nxt
            j -= 1
        if j < i:
            _coincidence(e, f, b)
            return 0
        if i == j:
            e.table[f * n + w[i]] = b
            e.table[b * n + (w[i] ^ 1)] = f
            return 0
        if _define(e, f, w[i]) < 0:
            return 0


cdef int *_pack(list words, int **lens, int *count) except NULL:
    cdef int total = 0, k = 0, i
    cdef int m = len(words)
    for w in words:
        total += len(w)
    cdef int *buf = <int *> malloc(<size_t> (total + 1) * sizeof(int))
    cdef int *ls = <int *> malloc(<size_t> (m + 1) * sizeof(int))
    if buf == NULL or ls == NULL:
        raise MemoryError()
    for i in range(m):
        w = words[i]
        ls[i] = len(w)
        for x in w:
            buf[k] = x
            k += 1
    lens[0] = ls
    count[0] = m
    return buf


def enumerate_cosets(int ncols, list relators, list subgroup, int max_cosets):
    cdef Enum e
    cdef int *rbuf
    cdef int *rlens
    cdef int nrel, off, a, k, x, c, d, nlive
    cdef int *sbuf
    cdef int *slens
    cdef int nsub
    e.ncols = ncols
    e.max_cosets = max_cosets if max_cosets > 1 else 1
    e.cap = 64 if e.max_cosets > 64 else e.max_cosets
    e.table = <int *> malloc(<size_t> e.cap * ncols * sizeof(int) + sizeof(int))
    e.parent = <int *> malloc(<size_t> e.cap * sizeof(int))
    e.qcap = 64
    e.queue = <int *> malloc(<size_t> e.qcap * sizeof(int))
    e.overflow = 0
    e.ncoset = 1
    rbuf = _pack(relators, &rlens, &nrel)
    sbuf = _pack(subgroup, &slens, &nsub)
    try:
        for k in range(ncols):
            e.table[k] = -1
        e.parent[0] = 0
        off = 0
        for k in range(nsub):
            if slens[k] > 0 and not e.overflow:
                _scan_and_fill(&e, 0, sbuf + off, slens[k])
            off += slens[k]
        a = 0
        while a < e.ncoset and not e.overflow:
            if e.parent[a] == a:
                off = 0
                for k in range(nrel):
                    if e.parent[a] != a or e.overflow:
                        break
                    _scan_and_fill(&e, a, rbuf + off, rlens[k])
                    off += rlens[k]
                if e.parent[a] == a and not e.overflow:
                    for x in range(ncols):
                        if e.table[a * ncols + x] < 0:
                            if _define(&e, a, x) < 0:
                                break
            a += 1

        newid = [-1] * e.ncoset
        nlive = 0
        for c in range(e.ncoset):
            if e.parent[c] == c:
                newid[c] = nlive
                nlive += 1
        action = [[-1] * nlive for _ in range(ncols)]
        for c in range(e.ncoset):
            if e.parent[c] != c:
                continue
            for x in range(ncols):
                d = e.table[c * ncols + x]
                if d >= 0:
                    action[x][newid[c]] = newid[_rep(&e, d)]
        return (not e.overflow), action, e.ncoset
    finally:
        free(e.table)
        free(e.parent)
        free(e.queue)
        free(rbuf)
        free(rlens)
        free(sbuf)
        free(slens)


def word_images(list action, word, int npoints):
    cdef int p, s, k, x
    cdef list w = list(word)
    cdef int wl = len(w)
    cdef list out = [0] * npoints
    cdef list col
    for s in range(npoints):
        p = s
        for k in range(wl):
            col = <list> action[<int> w[k]]
            p = <int> col[p]
            if p < 0:
                break
        out[s] = p
    return out


def trace(list action, word, int start):
    cdef int p = start
    cdef list col
    for x in word:
        col = <list> action[<int> x]
        p = <int> col[p]
        if p < 0:
            return -1
    return p


def cycle_length(list action, word, int start):
    cdef int p = trace(action, word, start)
    cdef int k = 1
    while p != start:
        if p < 0:
            return -1
        p = trace(action, word, p)
        k += 1
    return k
