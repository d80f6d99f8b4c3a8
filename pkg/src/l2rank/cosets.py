"""Coset enumeration, triviality certificates and Reidemeister-Schreier rewriting."""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from . import kernels
from .presentations import Presentation, Word, cyclic_reduce
from .zlinalg import betti1


class EnumerationStatus(str, Enum):
    CLOSED = "closed"
    EXCEEDED_BUDGET = "exceeded_budget"


class TableNotClosed(ValueError):
    pass


@dataclass(frozen=True)
class CosetTable:
    """Coset action of a presentation's generators.

    ``action[2*j]`` maps coset -> coset under generator ``j`` and
    ``action[2*j+1]`` under its inverse (-1 = undefined). Coset 0 is the
    subgroup itself. For an exceeded budget the table is the partial state at
    the point of abandonment: every defined entry is still a valid consequence
    of the relators.
    """

    num_cosets: int
    action: tuple[tuple[int, ...], ...]
    status: EnumerationStatus
    defined: int = 0
    generator_names: tuple[str, ...] = ()

    @property
    def closed(self) -> bool:
        return self.status is EnumerationStatus.CLOSED

    @property
    def index(self) -> int:
        if not self.closed:
            raise TableNotClosed("enumeration did not close")
        return self.num_cosets

    def columns(self) -> list[list[int]]:
        return [list(c) for c in self.action]

    def image(self, word: Word, start: int = 0) -> int:
        return kernels.trace(self.columns(), word.codes(), start)

    def permutation(self, j: int) -> tuple[int, ...]:
        return self.action[2 * j]

    def to_json(self) -> str:
        if not self.closed:
            raise TableNotClosed("only closed tables are serialized")
        names = self.generator_names or tuple(f"x{j + 1}" for j in range(len(self.action) // 2))
        data = {
            "index": self.num_cosets,
            "action": {names[j]: [c + 1 for c in self.action[2 * j]] for j in range(len(names))},
        }
        return json.dumps(data, sort_keys=False)

    @classmethod
    def from_json(cls, text: str) -> CosetTable:
        data = json.loads(text)
        m = data["index"]
        cols = []
        names = tuple(data["action"])
        for name in names:
            img = [c - 1 for c in data["action"][name]]
            if sorted(img) != list(range(m)):
                raise ValueError(f"action of {name} is not a permutation of 1..{m}")
            inv = [0] * m
            for a, b in enumerate(img):
                inv[b] = a
            cols += [tuple(img), tuple(inv)]
        return cls(m, tuple(cols), EnumerationStatus.CLOSED, m, names)


def todd_coxeter(p: Presentation, subgroup_gens: Sequence[Word] = (), max_cosets: int = 100_000,
                 killed: Sequence[Word] = ()) -> CosetTable:
    """Enumerate cosets of ``<subgroup_gens>`` in ``p`` (HLT strategy).

    ``killed`` words are appended to the relators first, i.e. the enumeration
    runs in ``p / <<killed>>`` (normal-closure mode).
    """
    if max_cosets < 1:
        raise ValueError("max_cosets must be positive")
    rels = [r.codes() for r in p.relators]
    rels += [list(Word(p.rank, cyclic_reduce(w.letters)).codes()) for w in killed]
    rels = [r for r in rels if r]
    sub = [w.codes() for w in subgroup_gens]
    closed, action, defined = kernels.enumerate_cosets(2 * p.rank, rels, sub, max_cosets)
    status = EnumerationStatus.CLOSED if closed else EnumerationStatus.EXCEEDED_BUDGET
    num = len(action[0]) if action else 1
    return CosetTable(num, tuple(tuple(c) for c in action), status, defined, p.generators)


def verify_table(p: Presentation, t: CosetTable, subgroup_gens: Sequence[Word] = ()) -> bool:
    """Closed table is a permutation action satisfying all relators; subgroup fixes coset 0."""
    if not t.closed:
        return False
    cols = t.columns()
    m = t.num_cosets
    for j in range(p.rank):
        fwd, bwd = cols[2 * j], cols[2 * j + 1]
        if sorted(fwd) != list(range(m)) or any(bwd[fwd[c]] != c for c in range(m)):
            return False
    for r in p.relators:
        if kernels.word_images(cols, r.codes(), m) != list(range(m)):
            return False
    return all(kernels.trace(cols, w.codes(), 0) == 0 for w in subgroup_gens)


class TrivialityCheck(str, Enum):
    CERTIFIED_TRIVIAL = "certified_trivial"
    INCONCLUSIVE = "inconclusive"


def trivial_quotient_check(p: Presentation, killed: Sequence[Word],
                           max_cosets: int = 1000) -> TrivialityCheck:
    t = todd_coxeter(p, (), max_cosets, killed=killed)
    if t.closed and t.num_cosets == 1:
        return TrivialityCheck.CERTIFIED_TRIVIAL
    return TrivialityCheck.INCONCLUSIVE


def schreier_transversal(t: CosetTable) -> tuple[list[tuple[int, int] | None], set[tuple[int, int]]]:
    """BFS spanning tree of the coset graph.

    Returns, per coset, the ``(parent, code)`` edge used to reach it, and the
    set of ``(coset, generator)`` pairs whose Schreier generator is trivial.
    """
    if not t.closed:
        raise TableNotClosed("Reidemeister-Schreier needs a closed table")
    cols = t.columns()
    via: list[tuple[int, int] | None] = [None] * t.num_cosets
    seen = [False] * t.num_cosets
    seen[0] = True
    tree: set[tuple[int, int]] = set()
    queue = deque([0])
    while queue:
        c = queue.popleft()
        for x in range(len(cols)):
            d = cols[x][c]
            if not seen[d]:
                seen[d] = True
                via[d] = (c, x)
                queue.append(d)
                tree.add((c, x >> 1) if x % 2 == 0 else (d, x >> 1))
    return via, tree


def _rewrite(cols, relator_codes, start, gen_id):
    out = []
    c = start
    for x in relator_codes:
        j = x >> 1
        if x % 2 == 0:
            s = gen_id.get((c, j))
            if s is not None:
                out.append((s, 1))
            c = cols[x][c]
        else:
            c = cols[x][c]
            s = gen_id.get((c, j))
            if s is not None:
                out.append((s, -1))
    return out


def reidemeister_schreier(p: Presentation, t: CosetTable, simplify: bool = True) -> Presentation:
    """Presentation of the subgroup whose coset table is ``t``.

    Schreier generators are named ``<gen>_<coset>``; there are
    ``index * n - index + 1`` of them before simplification, and one rewritten
    relator per (coset, relator) pair (trivial rewrites are dropped). With
    ``simplify`` generators killed by length-one relators are removed.
    """
    _, tree = schreier_transversal(t)
    cols = t.columns()
    pairs = [(c, j) for c in range(t.num_cosets) for j in range(p.rank) if (c, j) not in tree]
    gen_id = {pc: k for k, pc in enumerate(pairs)}
    rels = []
    for c in range(t.num_cosets):
        for r in p.relators:
            rels.append(_rewrite(cols, r.codes(), c, gen_id))

    names = [f"{p.generators[j]}_{c}" for c, j in pairs]
    rank = len(names)
    words = [cyclic_reduce(r) for r in rels]
    words = [w for w in words if w]
    if simplify:
        words, keep = _drop_killed_generators(words, rank)
        renum = {g: k for k, g in enumerate(keep)}
        names = [names[g] for g in keep]
        rank = len(names)
        words = [tuple((renum[g], s) for g, s in w) for w in words]
    uniq = list(dict.fromkeys(words))
    return Presentation(tuple(names), tuple(Word(rank, w) for w in uniq))


def _drop_killed_generators(words, rank):
    dead: set[int] = set()
    while True:
        new = {w[0][0] for w in words if len(w) == 1}
        if not new:
            break
        dead |= new
        words = [cyclic_reduce([l for l in w if l[0] not in dead]) for w in words]
        words = [w for w in words if w]
    keep = [g for g in range(rank) if g not in dead]
    return words, keep


def subgroup_betti1(p: Presentation, t: CosetTable) -> int:
    return betti1(reidemeister_schreier(p, t))[0]
