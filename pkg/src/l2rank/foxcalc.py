"""Fox derivatives and presentation Jacobians.

Matrices are oriented rows = relators, columns = generators. For a reduced
word ``w = y_1 ... y_L`` the derivative with respect to ``x_j`` is

    sum over y_k == x_j      of  +y_1...y_{k-1}
    sum over y_k == x_j^-1   of  -y_1...y_k

which is what the product rule with d(x_j)/d(x_j) = 1 unrolls to. Every
evaluation here (in Z[F_n], under augmentation, or in a finite quotient) goes
through :func:`fox_terms`.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Sequence, TypeVar

from .presentations import (
    GroupRingElement,
    GroupRingMatrix,
    Presentation,
    Word,
    augmentation,
)

T = TypeVar("T")


def fox_terms(w: Word, j: int) -> Iterator[tuple[int, int]]:
    """Yield ``(sign, prefix length)`` pairs for the derivative of ``w`` by ``x_j``."""
    if not 0 <= j < w.rank:
        raise IndexError(f"generator index {j} out of range for rank {w.rank}")
    for k, (g, s) in enumerate(w.letters):
        if g == j:
            yield (1, k) if s > 0 else (-1, k + 1)


def fox_derivative(w: Word, j: int) -> GroupRingElement:
    terms: dict[Word, int] = {}
    for sign, k in fox_terms(w, j):
        prefix = Word(w.rank, w.letters[:k])
        terms[prefix] = terms.get(prefix, 0) + sign
    return GroupRingElement(w.rank, terms)


def fox_row(w: Word) -> list[GroupRingElement]:
    return [fox_derivative(w, j) for j in range(w.rank)]


def fox_jacobian(p: Presentation) -> GroupRingMatrix:
    return GroupRingMatrix.from_rows([fox_row(r) for r in p.relators], p.rank, cols=p.rank)


@dataclass(frozen=True)
class JacobianBundle:
    presentation: Presentation
    jacobian: GroupRingMatrix
    extension_words: tuple[Word, ...]
    extended: GroupRingMatrix


def extend_jacobian(p: Presentation, extra: Sequence[Word]) -> JacobianBundle:
    jac = fox_jacobian(p)
    for w in extra:
        if w.rank != p.rank:
            raise ValueError("extension word over a different alphabet")
    ext_rows = GroupRingMatrix.from_rows([fox_row(w) for w in extra], p.rank, cols=p.rank)
    return JacobianBundle(p, jac, tuple(extra), jac.stack(ext_rows))


def augment_matrix(m: GroupRingMatrix) -> list[list[int]]:
    return [[augmentation(e) for e in row] for row in m.entries]


def fox_image(w: Word, j: int, evaluate: Callable[[Word, int], T], zero: T) -> T:
    """Derivative of ``w`` by ``x_j`` pushed through a ring map on group elements.

    ``evaluate(w, k)`` returns the image of the length-``k`` prefix of ``w``;
    images must support ``+`` and ``-`` against ``zero``.
    """
    acc = zero
    for sign, k in fox_terms(w, j):
        img = evaluate(w, k)
        acc = acc + img if sign > 0 else acc - img
    return acc


def _unit(_w: Word, _k: int) -> int:
    return 1


def augmented_jacobian_rows(p: Presentation) -> list[dict[int, int]]:
    """Sparse rows ``{generator: entry}`` of the augmented Fox Jacobian."""
    rows = []
    for r in p.relators:
        row = {}
        for j in sorted({g for g, _ in r.letters}):
            v = fox_image(r, j, _unit, 0)
            if v:
                row[j] = v
        rows.append(row)
    return rows


def augmented_jacobian(p: Presentation) -> list[list[int]]:
    """Entrywise augmentation of the Fox Jacobian without building Z[F_n] entries."""
    out = []
    for row in augmented_jacobian_rows(p):
        dense = [0] * p.rank
        for j, v in row.items():
            dense[j] = v
        out.append(dense)
    return out
