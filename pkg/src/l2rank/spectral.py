"""Group-ring matrices evaluated in finite quotients: kernel dimensions and spectral measures.

A group element ``g`` of a quotient ``Q`` acts on R^Q by the permutation
matrix ``M_g[h, h*g] = 1``; ``g -> M_g`` is multiplicative, so a p x q matrix
over Z[F_n] induces a (p|Q|) x (q|Q|) integer block matrix. Dimensions are
normalized by |Q|, matching von Neumann dimension over the finite group.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .foxcalc import extend_jacobian, fox_jacobian
from .presentations import GroupRingElement, GroupRingMatrix, Presentation, Word, rational_str
from .quotients import FiniteQuotient
from .zlinalg import rank_fraction_free

EIG_TOL = 1e-9


class NotSelfAdjoint(ValueError):
    pass


def _check_alphabet(m: GroupRingMatrix, q: FiniteQuotient):
    if m.rank != q.source.rank:
        raise ValueError(f"matrix over rank {m.rank}, quotient of rank {q.source.rank}")


def induce_regular_matrix(m: GroupRingMatrix, q: FiniteQuotient) -> list[list[int]]:
    _check_alphabet(m, q)
    n = q.order
    out = [[0] * (m.cols * n) for _ in range(m.rows * n)]
    perms: dict[Word, list[int]] = {}
    for i, row in enumerate(m.entries):
        for j, entry in enumerate(row):
            for w, c in entry.terms.items():
                perm = perms.get(w)
                if perm is None:
                    perm = perms[w] = q.right_multiplication(w)
                for h in range(n):
                    out[i * n + h][j * n + perm[h]] += c
    return out


def normalized_kernel_dimension(m: GroupRingMatrix, q: FiniteQuotient) -> Fraction:
    big = induce_regular_matrix(m, q)
    return Fraction(m.cols * q.order - rank_fraction_free(big), q.order)


@dataclass(frozen=True)
class SpectralMeasure:
    """Atomic measure: (eigenvalue, mass) pairs with masses summing to the column count.

    ``squared`` records that the measure belongs to adjoint(m) @ m rather than m.
    """

    atoms: tuple[tuple[float, Fraction], ...]
    quotient_order: int
    squared: bool = False

    @property
    def total_mass(self) -> Fraction:
        return sum((a[1] for a in self.atoms), Fraction(0))

    @property
    def zero_mass(self) -> Fraction:
        return sum((mass for x, mass in self.atoms if x == 0.0), Fraction(0))

    def mass_below(self, eps: float) -> Fraction:
        """mu([0, eps)), counting eigenvalues within tolerance of 0 from below."""
        return sum((mass for x, mass in self.atoms if -EIG_TOL <= x < eps), Fraction(0))

    def moment(self, k: int) -> float:
        return float(sum(float(mass) * x ** k for x, mass in self.atoms))

    def to_dict(self) -> dict:
        return {
            "quotient_order": self.quotient_order,
            "squared": self.squared,
            "atoms": [[x, rational_str(mass)] for x, mass in self.atoms],
        }


def _is_symmetric(a: list[list[int]]) -> bool:
    n = len(a)
    return all(len(r) == n for r in a) and all(a[i][j] == a[j][i] for i in range(n) for j in range(i))


def spectral_measure(m: GroupRingMatrix, q: FiniteQuotient) -> SpectralMeasure:
    """Spectral measure of ``m`` in the regular representation of ``q``.

    Inputs that are not self-adjoint in ``q`` are replaced by adjoint(m) @ m.
    The atom at 0 is the exact rational nullity; other eigenvalues come from a
    dense symmetric eigensolver and are merged within ``EIG_TOL``.
    """
    big = induce_regular_matrix(m, q)
    squared = False
    if m.rows != m.cols or not _is_symmetric(big):
        m = m.adjoint() @ m
        big = induce_regular_matrix(m, q)
        squared = True
    n = q.order
    size = len(big)
    nullity = size - rank_fraction_free(big) if size else 0
    eigs = np.linalg.eigvalsh(np.array(big, dtype=float)) if size else np.zeros(0)
    # the `nullity` eigenvalues nearest 0 are the kernel
    drop = set(np.argsort(np.abs(eigs), kind="stable")[:nullity].tolist())
    rest = sorted(float(eigs[i]) for i in range(len(eigs)) if i not in drop)
    atoms: list[tuple[float, Fraction]] = []
    if nullity:
        atoms.append((0.0, Fraction(nullity, n)))
    k = 0
    while k < len(rest):
        group = [rest[k]]
        while k + len(group) < len(rest) and rest[k + len(group)] - group[0] <= EIG_TOL * max(1.0, abs(group[0])):
            group.append(rest[k + len(group)])
        atoms.append((sum(group) / len(group), Fraction(len(group), n)))
        k += len(group)
    atoms.sort(key=lambda a: a[0])
    return SpectralMeasure(tuple(atoms), n, squared)


def _to_quotient_ring(e: GroupRingElement, q: FiniteQuotient) -> dict[int, int]:
    out: dict[int, int] = {}
    for w, c in e.terms.items():
        g = q.evaluate(w)
        out[g] = out.get(g, 0) + c
    return {g: c for g, c in out.items() if c}


def _qr_mul(x: dict[int, int], y: dict[int, int], table) -> dict[int, int]:
    out: dict[int, int] = {}
    for a, ca in x.items():
        row = table[a]
        for b, cb in y.items():
            g = row[b]
            out[g] = out.get(g, 0) + ca * cb
    return {g: c for g, c in out.items() if c}


def symbolic_moments(m: GroupRingMatrix, q: FiniteQuotient, nmax: int) -> list[int]:
    """Canonical traces tau(m^k), k = 0..nmax, computed inside Z[Q].

    tau sums, over the diagonal, the coefficient of the identity element.
    """
    if m.rows != m.cols:
        raise ValueError("moments need a square matrix")
    table = q.multiplication_table
    base = [[_to_quotient_ring(e, q) for e in row] for row in m.entries]
    p = m.rows
    power = [[{0: 1} if i == j else {} for j in range(p)] for i in range(p)]
    out = []
    for k in range(nmax + 1):
        out.append(sum(power[i][i].get(0, 0) for i in range(p)))
        if k == nmax:
            break
        nxt = []
        for i in range(p):
            row = []
            for j in range(p):
                acc: dict[int, int] = {}
                for l in range(p):
                    for g, c in _qr_mul(power[i][l], base[l][j], table).items():
                        acc[g] = acc.get(g, 0) + c
                row.append({g: c for g, c in acc.items() if c})
            nxt.append(row)
        power = nxt
    return out


def is_self_adjoint_in(m: GroupRingMatrix, q: FiniteQuotient) -> bool:
    return m.rows == m.cols and _is_symmetric(induce_regular_matrix(m, q))


def moment_check(m: GroupRingMatrix, q: FiniteQuotient, n: int) -> tuple[Fraction, float]:
    """(symbolic trace of m^n in Z[Q], n-th moment of the spectral measure)."""
    if not is_self_adjoint_in(m, q):
        raise NotSelfAdjoint("moment_check needs a matrix self-adjoint in the quotient")
    symbolic = Fraction(symbolic_moments(m, q, n)[n])
    numeric = spectral_measure(m, q).moment(n)
    return symbolic, numeric


def moments_agree(symbolic: Fraction, numeric: float, rel: float = 1e-6) -> bool:
    return abs(float(symbolic) - numeric) <= rel * (1 + abs(float(symbolic)))


@dataclass(frozen=True)
class LogBoundRow:
    measure: int
    eps: float
    below: Fraction
    zero: Fraction
    rhs: float
    holds: bool


@dataclass(frozen=True)
class LogBoundReport:
    """mu([0, eps)) <= mu({0}) + C / |log eps| over a family of measures."""

    C: float
    min_C: float
    rows: tuple[LogBoundRow, ...]

    @property
    def violations(self) -> list[LogBoundRow]:
        return [r for r in self.rows if not r.holds]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["measure", "eps", "mass_below_eps", "mass_at_zero", "rhs", "holds"])
        for r in self.rows:
            w.writerow([r.measure, repr(r.eps), rational_str(r.below), rational_str(r.zero),
                        f"{r.rhs:.12g}", int(r.holds)])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "C": self.C,
            "min_C": self.min_C,
            "violations": len(self.violations),
            "rows": [{"measure": r.measure, "eps": r.eps, "mass_below_eps": rational_str(r.below),
                      "mass_at_zero": rational_str(r.zero), "rhs": r.rhs, "holds": r.holds}
                     for r in self.rows],
        }


def log_bound_report(measures: Sequence[SpectralMeasure], C: float,
                     eps_grid: Sequence[float]) -> LogBoundReport:
    for eps in eps_grid:
        if not 0 < eps < 1:
            raise ValueError("eps must lie in (0, 1)")
    rows = []
    min_c = 0.0
    for i, mu in enumerate(measures):
        zero = mu.zero_mass
        for eps in eps_grid:
            below = mu.mass_below(eps)
            scale = abs(math.log(eps))
            min_c = max(min_c, float(below - zero) * scale)
            rhs = float(zero) + C / scale
            # exact comparison on the rational part; C enters as a float
            holds = float(below - zero) * scale <= C * (1 + 1e-12)
            rows.append(LogBoundRow(i, eps, below, zero, rhs, holds))
    return LogBoundReport(C, min_c, tuple(rows))


@dataclass(frozen=True)
class Z1Estimate:
    """Normalized kernel dimension of the Fox matrix A* (and of B' when extended).

    Assumes an infinite group so that the zeroth L2-Betti number vanishes.
    """

    quotient_order: int
    kernel_dim_jacobian: Fraction
    kernel_dim_extended: Fraction | None

    def to_dict(self) -> dict:
        return {
            "quotient_order": self.quotient_order,
            "kernel_dim_jacobian": rational_str(self.kernel_dim_jacobian),
            "kernel_dim_extended": (None if self.kernel_dim_extended is None
                                    else rational_str(self.kernel_dim_extended)),
            "assumes_beta0_zero": True,
        }


def z1_dimension_estimate(p: Presentation, extension_words: Sequence[Word],
                          q: FiniteQuotient) -> Z1Estimate:
    if q.source.rank != p.rank:
        raise ValueError("quotient over a different alphabet")
    a = normalized_kernel_dimension(fox_jacobian(p), q)
    b = None
    if extension_words:
        b = normalized_kernel_dimension(extend_jacobian(p, extension_words).extended, q)
    return Z1Estimate(q.order, a, b)
