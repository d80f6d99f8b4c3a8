"""Pure-Python implementations of the permutation/coset kernels.

Letters are column codes: generator ``j`` is ``2j`` and its inverse ``2j+1``,
so ``code ^ 1`` inverts a letter. Tables are returned column-major:
``action[code][coset]`` with ``-1`` for an undefined entry.
"""
from __future__ import annotations

BACKEND = "python"


class _Overflow(Exception):
    pass


def enumerate_cosets(ncols, relators, subgroup, max_cosets):
    """HLT coset enumeration over the subgroup generated by ``subgroup``.

    Returns ``(closed, action, defined)`` where ``action`` covers the live
    cosets renumbered in increasing order (coset 0 stays 0) and ``defined``
    counts every coset ever created.
    """
    table = [[-1] * ncols]
    parent = [0]
    live = [True]
    state = {"defined": 1}

    def rep(c):
        r = c
        while parent[r] != r:
            r = parent[r]
        while parent[c] != r:
            parent[c], c = r, parent[c]
        return r

    def define(c, x):
        if state["defined"] >= max_cosets:
            raise _Overflow
        d = len(table)
        table.append([-1] * ncols)
        parent.append(d)
        live.append(True)
        state["defined"] += 1
        table[c][x] = d
        table[d][x ^ 1] = c
        return d

    def merge(a, b, queue):
        a, b = rep(a), rep(b)
        if a == b:
            return
        if a > b:
            a, b = b, a
        parent[b] = a
        live[b] = False
        queue.append(b)

    def coincidence(a, b):
        queue = []
        merge(a, b, queue)
        i = 0
        while i < len(queue):
            g = queue[i]
            i += 1
            row = table[g]
            for x in range(ncols):
                d = row[x]
                if d < 0:
                    continue
                xi = x ^ 1
                if table[d][xi] == g:
                    table[d][xi] = -1
                mu, nu = rep(g), rep(d)
                if table[mu][x] >= 0:
                    merge(nu, table[mu][x], queue)
                elif table[nu][xi] >= 0:
                    merge(mu, table[nu][xi], queue)
                else:
                    table[mu][x] = nu
                    table[nu][xi] = mu

    def scan_and_fill(a, w):
        n = len(w)
        f, b = a, a
        i, j = 0, n - 1
        while True:
            while i <= j and table[f][w[i]] >= 0:
                f = table[f][w[i]]
                i += 1
            if i > j:
                if f != a:
                    coincidence(f, a)
                return
            while j >= i and table[b][w[j] ^ 1] >= 0:
                b = table[b][w[j] ^ 1]
                j -= 1
            if j < i:
                coincidence(f, b)
                return
            if i == j:
                table[f][w[i]] = b
                table[b][w[i] ^ 1] = f
                return
            define(f, w[i])

    closed = True
    try:
        for w in subgroup:
            if w:
                scan_and_fill(0, w)
        a = 0
        while a < len(table):
            if live[a]:
                for w in relators:
                    if not live[a]:
                        break
                    scan_and_fill(a, w)
                if live[a]:
                    for x in range(ncols):
                        if table[a][x] < 0:
                            define(a, x)
            a += 1
    except _Overflow:
        closed = False

    order = [c for c in range(len(table)) if live[c]]
    new = {c: i for i, c in enumerate(order)}
    action = [[-1] * len(order) for _ in range(ncols)]
    for c in order:
        row = table[c]
        k = new[c]
        for x in range(ncols):
            d = row[x]
            if d >= 0:
                action[x][k] = new.get(rep(d), -1)
    return closed, action, state["defined"]


def word_images(action, word, npoints):
    """Image of every point under ``word``; ``-1`` where the trace breaks."""
    out = []
    for p in range(npoints):
        for x in word:
            p = action[x][p]
            if p < 0:
                break
        out.append(p)
    return out


def trace(action, word, start):
    p = start
    for x in word:
        p = action[x][p]
        if p < 0:
            return -1
    return p


def cycle_length(action, word, start):
    """Smallest ``k >= 1`` with ``start * word**k == start``, or -1."""
    p = trace(action, word, start)
    k = 1
    while p != start:
        if p < 0:
            return -1
        p = trace(action, word, p)
        k += 1
    return k
