"""Exact integer linear algebra: Smith normal form, ranks, first Betti numbers."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .foxcalc import augmented_jacobian_rows
from .presentations import Presentation

IntegerMatrix = list[list[int]]


@dataclass(frozen=True)
class SNFResult:
    diagonal: tuple[int, ...]
    rank: int
    torsion: tuple[int, ...]


def _sparse_rows(m) -> tuple[list[dict[int, int]], int]:
    if m and isinstance(m[0], Mapping):
        rows = [{c: int(v) for c, v in r.items() if v} for r in m]
        ncols = 1 + max((c for r in rows for c in r), default=-1)
        return rows, ncols
    rows = [{c: int(v) for c, v in enumerate(r) if v} for r in m]
    return rows, (len(m[0]) if m else 0)


def _eliminate_unit_pivots(rows: list[dict[int, int]]) -> tuple[int, list[dict[int, int]]]:
    """Clear every +-1 pivot by row operations on a sparse matrix.

    A unit pivot at (r, c) lets row ops clear column c and column ops clear
    the rest of row r, contributing a diagonal 1 without changing the other
    invariant factors. Returns the number of such pivots and the leftover rows.
    """
    col_rows: dict[int, set[int]] = {}
    for i, r in enumerate(rows):
        for c in r:
            col_rows.setdefault(c, set()).add(i)
    active = {i for i, r in enumerate(rows) if r}
    ones = 0
    progress = True
    while progress:
        progress = False
        for i in sorted(active, key=lambda k: (len(rows[k]), k)):
            if i not in active:
                continue
            row = rows[i]
            units = [c for c, v in row.items() if v in (1, -1)]
            if not units:
                continue
            c = min(units, key=lambda k: (len(col_rows[k]), k))
            pv = row[c]
            for s in sorted(col_rows[c] - {i}):
                other = rows[s]
                f = other[c] * pv
                for cc, v in row.items():
                    nv = other.get(cc, 0) - f * v
                    if nv:
                        if cc not in other:
                            col_rows[cc].add(s)
                        other[cc] = nv
                    elif cc in other:
                        del other[cc]
                        col_rows[cc].discard(s)
                if not other:
                    active.discard(s)
            for cc in row:
                col_rows[cc].discard(i)
            active.discard(i)
            ones += 1
            progress = True
    return ones, [rows[i] for i in sorted(active)]


def _dense_snf(a: IntegerMatrix) -> list[int]:
    """Invariant factors of a dense integer matrix (mutates ``a``)."""
    m = len(a)
    n = len(a[0]) if m else 0
    diag = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            ai = a[i]
            for j in range(t, n):
                v = ai[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            p = a[t][t]
            clean = True
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // p
                    if q:
                        ai, at = a[i], a[t]
                        for j in range(t, n):
                            ai[j] -= q * at[j]
                    if a[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // p
                    if q:
                        for row in a[t:]:
                            row[j] -= q * row[t]
                    if a[t][j]:
                        clean = False
            if not clean:
                # smallest remainder in pivot row/column becomes the new pivot
                cand = [(abs(a[i][t]), i, t) for i in range(t + 1, m) if a[i][t]]
                cand += [(abs(a[t][j]), t, j) for j in range(t + 1, n) if a[t][j]]
                _, i, j = min(cand)
                if i != t:
                    a[t], a[i] = a[i], a[t]
                else:
                    for row in a:
                        row[t], row[j] = row[j], row[t]
                continue
            bad = next((i for i in range(t + 1, m)
                        if any(a[i][j] % p for j in range(t + 1, n))), None)
            if bad is None:
                break
            at, ab = a[t], a[bad]
            for j in range(t, n):
                at[j] += ab[j]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


def smith_normal_form(m) -> SNFResult:
    """Smith normal form of a dense (list of lists) or sparse (list of dicts) matrix."""
    rows, ncols = _sparse_rows(m)
    nrows = len(rows)
    ones, rest = _eliminate_unit_pivots([dict(r) for r in rows])
    cols = sorted({c for r in rest for c in r})
    pos = {c: k for k, c in enumerate(cols)}
    dense = [[0] * len(cols) for _ in rest]
    for i, r in enumerate(rest):
        for c, v in r.items():
            dense[i][pos[c]] = v
    nonzero = [1] * ones + _dense_snf(dense)
    size = min(nrows, ncols)
    diagonal = tuple(nonzero + [0] * (size - len(nonzero)))
    return SNFResult(diagonal, len(nonzero), tuple(d for d in nonzero if d > 1))


def rank_fraction_free(m: Sequence[Sequence[int]]) -> int:
    """Rank over Q by Bareiss fraction-free elimination."""
    a = [list(map(int, r)) for r in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    rank = 0
    prev = 1
    for c in range(cols):
        piv = next((i for i in range(rank, rows) if a[i][c]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][c]
        pr = a[rank]
        for i in range(rank + 1, rows):
            ai = a[i]
            f = ai[c]
            if f:
                for j in range(c + 1, cols):
                    ai[j] = (p * ai[j] - f * pr[j]) // prev
            else:
                for j in range(c + 1, cols):
                    ai[j] = (p * ai[j]) // prev
            ai[c] = 0
        prev = p
        rank += 1
        if rank == rows:
            break
    return rank


def _prime_powers(d: int) -> list[int]:
    out = []
    p = 2
    while p * p <= d:
        if d % p == 0:
            q = 1
            while d % p == 0:
                d //= p
                q *= p
            out.append(q)
        p += 1
    if d > 1:
        out.append(d)
    return out


def betti1(p: Presentation) -> tuple[int, list[int]]:
    """Free rank and torsion (as elementary divisors) of the abelianization."""
    snf = smith_normal_form(augmented_jacobian_rows(p)) if p.relators else SNFResult((), 0, ())
    torsion = sorted(q for d in snf.torsion for q in _prime_powers(d))
    return p.rank - snf.rank, torsion


def is_perfect(p: Presentation) -> bool:
    rank, torsion = betti1(p)
    return rank == 0 and not torsion
