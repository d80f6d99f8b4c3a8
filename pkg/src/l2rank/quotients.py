"""Finite quotients, nested kernel chains and the Lück ratio estimator."""
from __future__ import annotations

import itertools
import logging
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Hashable, Iterable, Sequence

from . import kernels
from .cosets import CosetTable, EnumerationStatus, subgroup_betti1
from .presentations import Presentation, Word, rational_str

log = logging.getLogger(__name__)

DEFAULT_ORDER_CAP = 5000
MAX_SEARCH_DEGREE = 12


class OrderCapExceeded(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class FiniteQuotient:
    """Surjection of ``source`` onto a finite group, kept as its right regular action.

    Elements are numbered 0..order-1 in breadth-first order from the identity
    (element 0) using the generators in presentation order; this numbering
    depends only on the kernel, so ``key`` identifies the kernel.
    ``regular_action[j][e]`` is the element ``e * g_j``.
    """

    source: Presentation
    order: int
    regular_action: tuple[tuple[int, ...], ...]
    element_words: tuple[Word, ...]
    generator_images: tuple[int, ...] = field(default=())

    @property
    def key(self) -> tuple[tuple[int, ...], ...]:
        return self.regular_action

    def __eq__(self, other):
        return (isinstance(other, FiniteQuotient) and self.source.rank == other.source.rank
                and self.key == other.key)

    def __hash__(self):
        return hash(self.key)

    @cached_property
    def columns(self) -> list[list[int]]:
        cols = []
        for perm in self.regular_action:
            inv = [0] * self.order
            for a, b in enumerate(perm):
                inv[b] = a
            cols += [list(perm), inv]
        return cols

    def evaluate(self, w: Word) -> int:
        """Element index of the image of ``w``."""
        if w.rank != self.source.rank:
            raise ValueError("word over a different alphabet")
        return kernels.trace(self.columns, w.codes(), 0)

    def element_order(self, w: Word) -> int:
        return kernels.cycle_length(self.columns, w.codes(), 0)

    def right_multiplication(self, w: Word) -> list[int]:
        """Permutation ``e -> e * image(w)`` of the elements."""
        return kernels.word_images(self.columns, w.codes(), self.order)

    @cached_property
    def multiplication_table(self) -> list[list[int]]:
        """``table[a][b]`` = index of ``a * b``."""
        by_b = [kernels.word_images(self.columns, self.element_words[b].codes(), self.order)
                for b in range(self.order)]
        return [[by_b[b][a] for b in range(self.order)] for a in range(self.order)]

    @cached_property
    def inverse(self) -> list[int]:
        inv = [0] * self.order
        for a, row in enumerate(self.multiplication_table):
            inv[a] = row.index(0)
        return inv

    def coset_table(self) -> CosetTable:
        """The regular action read as the coset table of the kernel."""
        cols = tuple(tuple(c) for c in self.columns)
        return CosetTable(self.order, cols, EnumerationStatus.CLOSED, self.order,
                          self.source.generators)

    def is_regular(self) -> bool:
        cols = self.columns
        if any(sorted(c) != list(range(self.order)) for c in cols):
            return False
        for e, w in enumerate(self.element_words):
            perm = self.right_multiplication(w)
            if e != 0 and any(perm[i] == i for i in range(self.order)):
                return False
            if perm[0] != e:
                return False
        return True

    def describe(self) -> str:
        imgs = ", ".join(f"{g}->{self.element_words[self.evaluate(Word.generator(self.source.rank, j))].format(self.source.generators)}"
                         for j, g in enumerate(self.source.generators))
        return f"quotient of order {self.order} ({imgs})"


def _regularize(p: Presentation, start: Hashable, step: Callable[[Hashable, int], Hashable],
                cap: int | None = None) -> FiniteQuotient:
    index = {start: 0}
    states = [start]
    words: list[tuple] = [()]
    queue = deque([0])
    while queue:
        e = queue.popleft()
        for j in range(p.rank):
            s = step(states[e], j)
            if s not in index:
                if cap is not None and len(states) >= cap:
                    raise OrderCapExceeded(f"quotient order exceeds cap {cap}")
                index[s] = len(states)
                states.append(s)
                words.append(words[e] + ((j, 1),))
                queue.append(index[s])
    action = tuple(tuple(index[step(s, j)] for s in states) for j in range(p.rank))
    gen_img = tuple(action[j][0] for j in range(p.rank))
    return FiniteQuotient(p, len(states), action, tuple(Word(p.rank, w) for w in words), gen_img)


def _perm_columns(perms: Sequence[Sequence[int]]) -> list[list[int]]:
    cols = []
    for g in perms:
        inv = [0] * len(g)
        for a, b in enumerate(g):
            inv[b] = a
        cols += [list(g), inv]
    return cols


def _satisfies(cols, relators: Iterable[Word], degree: int) -> bool:
    ident = list(range(degree))
    return all(kernels.word_images(cols, r.codes(), degree) == ident for r in relators)


def quotient_from_permutations(p: Presentation, perms: Sequence[Sequence[int]],
                               cap: int | None = None) -> FiniteQuotient:
    """Regular quotient given generator images as permutations of ``range(d)``."""
    if len(perms) != p.rank:
        raise ValueError("one permutation per generator required")
    degree = len(perms[0]) if perms else 0
    perms = [tuple(g) for g in perms]
    if any(sorted(g) != list(range(degree)) for g in perms):
        raise ValueError("images must be permutations of a common degree")
    if not _satisfies(_perm_columns(perms), p.relators, degree):
        raise ValueError("relators do not hold for these images")

    def step(e, j):
        g = perms[j]
        return tuple(g[i] for i in e)

    return _regularize(p, tuple(range(degree)), step, cap)


def _cycle_type_reps(d: int) -> list[tuple[int, ...]]:
    reps = []

    def partitions(n, largest):
        if n == 0:
            yield []
            return
        for k in range(min(n, largest), 0, -1):
            for rest in partitions(n - k, k):
                yield [k] + rest

    for part in partitions(d, d):
        perm = list(range(d))
        pos = 0
        for k in part:
            for i in range(k):
                perm[pos + i] = pos + (i + 1) % k
            pos += k
        reps.append(tuple(perm))
    return reps


def _search_branch(p: Presentation, degree: int, first: tuple[int, ...]) -> list[FiniteQuotient]:
    """All quotients at ``degree`` whose first generator maps to ``first``."""
    n = p.rank
    by_max: list[list[Word]] = [[] for _ in range(n)]
    for r in p.relators:
        by_max[max(g for g, _ in r.letters)].append(r)
    all_perms = list(itertools.permutations(range(degree)))
    found: dict = {}
    assigned: list[tuple[int, ...]] = [first]
    if not _satisfies(_perm_columns(assigned), by_max[0], degree):
        return []

    def rec(j):
        if j == n:
            q = quotient_from_permutations(p, assigned)
            found.setdefault(q.key, q)
            return
        for g in all_perms:
            assigned.append(g)
            if _satisfies(_perm_columns(assigned), by_max[j], degree):
                rec(j + 1)
            assigned.pop()

    if n == 0:
        return []
    rec(1)
    return list(found.values())


def search_finite_quotients(p: Presentation, max_degree: int = 5, max_count: int = 1000,
                            jobs: int = 1) -> list[FiniteQuotient]:
    """Distinct finite quotients with a permutation image of degree <= ``max_degree``.

    Backtracks over generator images in the symmetric group; the first
    generator ranges over cycle-type representatives only (conjugate
    homomorphisms share a kernel). Results are sorted by order, ties broken by
    the canonical regular table.
    """
    if max_degree > MAX_SEARCH_DEGREE:
        raise ValueError(f"max_degree is limited to {MAX_SEARCH_DEGREE}")
    if p.rank == 0:
        return []
    seen: dict = {}
    for d in range(1, max_degree + 1):
        reps = _cycle_type_reps(d)
        if jobs > 1 and len(reps) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as ex:
                branches = list(ex.map(_search_branch, [p] * len(reps), [d] * len(reps), reps))
        else:
            branches = [_search_branch(p, d, r) for r in reps]
        for branch in branches:
            for q in branch:
                seen.setdefault(q.key, q)
        if len(seen) >= max_count:
            break
    out = sorted(seen.values(), key=lambda q: (q.order, q.key))
    return out[:max_count]


def intersect_quotients(a: FiniteQuotient, b: FiniteQuotient,
                        cap: int = DEFAULT_ORDER_CAP) -> FiniteQuotient:
    """Regular quotient with kernel ``ker(a) & ker(b)`` (subdirect image in a x b)."""
    if a.source.rank != b.source.rank:
        raise ValueError("quotients of different presentations")
    ra, rb = a.regular_action, b.regular_action

    def step(e, j):
        return ra[j][e[0]], rb[j][e[1]]

    return _regularize(a.source, (0, 0), step, cap)


def kernel_contained(small: FiniteQuotient, big: FiniteQuotient) -> bool:
    """True iff ker(small) <= ker(big), i.e. ``big`` factors through ``small``."""
    return intersect_quotients(small, big, cap=small.order * big.order).order == small.order


@dataclass(frozen=True)
class QuotientChain:
    quotients: tuple[FiniteQuotient, ...]

    @property
    def indices(self) -> list[int]:
        return [q.order for q in self.quotients]

    def is_nested(self) -> bool:
        qs = self.quotients
        return all(kernel_contained(qs[i + 1], qs[i]) for i in range(len(qs) - 1))


def build_chain(p: Presentation, pool: Sequence[FiniteQuotient], length: int,
                cap: int = DEFAULT_ORDER_CAP, strict: bool = False) -> QuotientChain:
    """Cumulative intersections of the pool, keeping strictly growing indices.

    Trivial quotients are ignored. Intersections over ``cap`` are skipped, or
    raise :class:`OrderCapExceeded` when ``strict``.
    """
    if not pool:
        raise ValueError("empty quotient pool")
    chain: list[FiniteQuotient] = []
    for q in pool:
        if len(chain) >= length:
            break
        if q.order == 1:
            continue
        if not chain:
            if q.order > cap:
                if strict:
                    raise OrderCapExceeded(f"quotient order {q.order} exceeds cap {cap}")
                continue
            chain.append(q)
            continue
        try:
            nxt = intersect_quotients(chain[-1], q, cap)
        except OrderCapExceeded:
            if strict:
                raise
            log.info("skipping intersection over order cap %d", cap)
            continue
        if nxt.order > chain[-1].order:
            chain.append(nxt)
    return QuotientChain(tuple(chain))


@dataclass(frozen=True)
class BettiSample:
    index: int
    betti1: int

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.betti1, self.index)


@dataclass(frozen=True)
class BettiEstimate:
    """Sampled ratios b1(N_i)/[G:N_i] along a chain.

    The ratios are lower-bound evidence only: they bound the limsup from the
    sampled side and the chain's intersection is not certified trivial.
    ``limsup_lower_bound`` is the largest ratio over the tail half.
    """

    samples: tuple[BettiSample, ...]
    limsup_lower_bound: Fraction
    intersection_trivial_certified: bool = False

    @property
    def ratios(self) -> list[Fraction]:
        return [s.ratio for s in self.samples]

    @property
    def best_estimate(self) -> Fraction:
        return self.samples[-1].ratio

    def to_dict(self, presentation: str) -> dict:
        return {
            "presentation": presentation,
            "chain": [{"index": s.index, "betti1": s.betti1, "ratio": rational_str(s.ratio)}
                      for s in self.samples],
            "limsup_lower_bound": rational_str(self.limsup_lower_bound),
            "intersection_trivial_certified": self.intersection_trivial_certified,
        }


def kernel_betti1(q: FiniteQuotient) -> BettiSample:
    return BettiSample(q.order, subgroup_betti1(q.source, q.coset_table()))


def _map(fn, items, jobs):
    if jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]


def luck_estimate(p: Presentation, chain: QuotientChain, jobs: int = 1) -> BettiEstimate:
    if not chain.quotients:
        raise ValueError("empty chain")
    for q in chain.quotients:
        if q.source.rank != p.rank:
            raise ValueError("chain quotient over a different presentation")
    samples = tuple(_map(kernel_betti1, list(chain.quotients), jobs))
    tail = samples[len(samples) // 2:]
    return BettiEstimate(samples, max(s.ratio for s in tail))
