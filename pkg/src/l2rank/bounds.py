"""Certified bounds: torsion lower bounds, generator upper bound, normal-rank
witnesses, and the distance between marked groups."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import kernels
from .cosets import TrivialityCheck, todd_coxeter, trivial_quotient_check
from .presentations import Presentation, TorsionPresentation, Word, cyclic_reduce, rational_str
from .quotients import FiniteQuotient, search_finite_quotients


@dataclass
class BoundReport:
    """Bounds on ``quantity`` ("l2_betti1" or "nrk") with the evidence behind them."""

    quantity: str
    lower: Fraction | None = None
    upper: Fraction | None = None
    certified: bool = False
    certificates: list[dict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def inconclusive(self) -> bool:
        return not self.certified

    def to_dict(self) -> dict:
        return {
            "quantity": self.quantity,
            "lower": None if self.lower is None else rational_str(self.lower),
            "upper": None if self.upper is None else rational_str(self.upper),
            "certified": self.certified,
            "certificates": self.certificates,
            "notes": self.notes,
        }


def sigma(tp: TorsionPresentation) -> Fraction:
    return sum((Fraction(1, n) for n in tp.exponents), Fraction(0))


@dataclass(frozen=True)
class RelatorOrder:
    relator: int
    exponent: int
    certified: bool
    witness_order: int | None = None
    image_order: int | None = None


def check_irreducibility(tp: TorsionPresentation,
                         quotients: Sequence[FiniteQuotient]) -> list[RelatorOrder]:
    """Certify that each root R_i has order exactly n_i.

    The relator forces ord(R_i) | n_i, so a quotient where the image of R_i
    has order n_i certifies it. Absence of a witness never refutes.
    """
    out = []
    for i, (root, n) in enumerate(zip(tp.roots, tp.exponents)):
        status = RelatorOrder(i, n, n == 1)
        for q in quotients:
            if q.source.rank != tp.rank:
                raise ValueError("quotient over a different alphabet")
            o = q.element_order(root)
            if o == n:
                status = RelatorOrder(i, n, True, q.order, o)
                break
            if status.image_order is None or o > status.image_order:
                status = RelatorOrder(i, n, status.certified, q.order, o)
        out.append(status)
    return out


def pt_lower_bound(tp: TorsionPresentation,
                   certificate: FiniteQuotient | Sequence[FiniteQuotient] | None = None) -> BoundReport:
    """Lower bound |X| - 1 - sigma for an irreducible torsion presentation."""
    lower = tp.rank - 1 - sigma(tp)
    quotients = [] if certificate is None else (
        [certificate] if isinstance(certificate, FiniteQuotient) else list(certificate))
    orders = check_irreducibility(tp, quotients)
    rep = BoundReport("l2_betti1", lower=lower, certified=all(o.certified for o in orders))
    for o in orders:
        rep.certificates.append({
            "kind": "relator_order",
            "relator": tp.roots[o.relator].format(tp.generators),
            "exponent": o.exponent,
            "certified": o.certified,
            "quotient_order": o.witness_order,
            "image_order": o.image_order,
        })
    if lower <= 0:
        rep.notes.append("vacuous: bound is not positive")
    if not rep.certified:
        rep.notes.append("irreducibility not witnessed for every relator; bound uncertified")
    return rep


def generator_bound(p: Presentation) -> BoundReport:
    rep = BoundReport("l2_betti1", upper=Fraction(p.rank - 1), certified=True)
    rep.certificates.append({"kind": "generator_count", "generators": p.rank})
    rep.notes.append("uses d(G) <= number of presentation generators, not d(G) itself")
    return rep


def normal_rank_witness(p: Presentation, witnesses: Sequence[Word], budget: int = 1000,
                        l2_lower: BoundReport | None = None) -> BoundReport:
    """nrk(G) <= |witnesses| when killing the witnesses collapses the group."""
    if budget < 1:
        raise ValueError("budget must be positive")
    check = trivial_quotient_check(p, witnesses, budget)
    rep = BoundReport("nrk")
    names = [w.format(p.generators) for w in witnesses]
    rep.certificates.append({"kind": "trivial_quotient", "killed": names,
                             "max_cosets": budget, "result": check.value})
    if check is TrivialityCheck.CERTIFIED_TRIVIAL:
        rep.upper = Fraction(len(witnesses))
        rep.certified = True
    else:
        rep.notes.append("coset enumeration did not close on a single coset; inconclusive")
    if l2_lower is not None and l2_lower.lower is not None and rep.upper is not None:
        gap = l2_lower.lower - (rep.upper - 1)
        rep.certificates.append({"kind": "l2_contrast", "l2_lower": rational_str(l2_lower.lower),
                                 "l2_lower_certified": l2_lower.certified})
        if gap > 0:
            rep.notes.append("L2-Betti lower bound exceeds nrk - 1: the naive inequality fails "
                             "here (allowed only because the group has torsion)")
        else:
            rep.notes.append("consistent with b1^(2) <= nrk - 1; nothing is proved")
    return rep


# --- marked groups ---------------------------------------------------------------

@dataclass(frozen=True)
class MarkedGroup:
    """Normal closure of ``relators`` in the free group of rank ``n``."""

    n: int
    relators: tuple[Word, ...] = ()
    membership_budget: int = 2000
    quotient_degree: int = 5

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need at least one generator")
        object.__setattr__(self, "relators", tuple(self.relators))

    @classmethod
    def from_presentation(cls, p: Presentation, **kw) -> MarkedGroup:
        return cls(p.rank, p.relators, **kw)

    def presentation(self) -> Presentation:
        names = tuple(f"x{i + 1}" for i in range(self.n))
        rels = [Word(self.n, cyclic_reduce(r.letters)) for r in self.relators]
        return Presentation(names, tuple(r for r in rels if r.letters))


class _Membership:
    """Semidecision of ``w in N``.

    Positive: ``w`` traces back to coset 0 in a (possibly partial) coset
    enumeration over the trivial subgroup; every identification such an
    enumeration makes is a consequence of the relators. Negative: some finite
    quotient of the group sends ``w`` to a nontrivial element.
    """

    def __init__(self, g: MarkedGroup):
        self.p = g.presentation()
        self.table = todd_coxeter(self.p, (), g.membership_budget)
        self.cols = self.table.columns()
        self.quotients = [] if self.table.closed else search_finite_quotients(
            self.p, g.quotient_degree)

    def decide(self, w: Word) -> bool | None:
        end = kernels.trace(self.cols, w.codes(), 0)
        if end == 0:
            return True
        if self.table.closed:
            return False
        for q in self.quotients:
            if q.evaluate(w) != 0:
                return False
        return None


def reduced_words(n: int, length: int):
    if length == 0:
        yield Word.identity(n)
        return
    letters = [(g, s) for g in range(n) for s in (1, -1)]

    def rec(prefix):
        if len(prefix) == length:
            yield Word(n, tuple(prefix))
            return
        for l in letters:
            if prefix and prefix[-1] == (l[0], -l[1]):
                continue
            prefix.append(l)
            yield from rec(prefix)
            prefix.pop()

    yield from rec([])


@dataclass(frozen=True)
class DistanceReport:
    """``kind``: "zero" (same normal subgroup), "exact", "interval" or "agreement".

    For "agreement" the balls agree through ``radius`` so the distance is at
    most 2^-radius; this is not a proof that the subgroups are equal.
    """

    kind: str
    lower: Fraction
    upper: Fraction
    radius: int
    witness: Word | None = None
    undecided: tuple[Word, ...] = ()

    @property
    def value(self) -> Fraction | None:
        return self.lower if self.lower == self.upper else None

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "distance": None if self.value is None else rational_str(self.value),
            "lower": rational_str(self.lower),
            "upper": rational_str(self.upper),
            "radius": self.radius,
            "witness": None if self.witness is None else str(self.witness),
            "undecided": [str(w) for w in self.undecided],
        }


def _pow2(k: int) -> Fraction:
    return Fraction(1, 2 ** k) if k >= 0 else Fraction(2 ** -k)


def marked_distance(a: MarkedGroup, b: MarkedGroup, max_radius: int = 6) -> DistanceReport:
    """d(N1, N2) = inf 2^-k over radii k where the balls of radius k agree."""
    if a.n != b.n:
        raise ValueError("marked groups on different free groups")
    ra = {Word(a.n, cyclic_reduce(r.letters)) for r in a.relators}
    rb = {Word(b.n, cyclic_reduce(r.letters)) for r in b.relators}
    if ra == rb:
        return DistanceReport("zero", Fraction(0), Fraction(0), max_radius)
    ma, mb = _Membership(a), _Membership(b)
    undecided: list[Word] = []
    first_open: int | None = None
    for k in range(1, max_radius + 1):
        for w in reduced_words(a.n, k):
            x, y = ma.decide(w), mb.decide(w)
            if x is None or y is None:
                undecided.append(w)
                if first_open is None:
                    first_open = k
                continue
            if x != y:
                hi = _pow2(k - 1) if first_open is None else _pow2(first_open - 1)
                kind = "exact" if first_open is None else "interval"
                return DistanceReport(kind, _pow2(k - 1), hi, k, w, tuple(undecided))
    if first_open is None:
        return DistanceReport("agreement", Fraction(0), _pow2(max_radius), max_radius)
    return DistanceReport("interval", Fraction(0), _pow2(first_open - 1), max_radius,
                          None, tuple(undecided))
