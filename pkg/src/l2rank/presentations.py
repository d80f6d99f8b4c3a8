"""Free-group words, finite presentations and the integral group ring Z[F_n].

A word is stored as a tuple of ``(generator index, sign)`` letters over an
alphabet of fixed rank. Group-ring elements are finite maps from words to
nonzero Python integers.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

Letter = tuple[int, int]


class AlphabetMismatch(ValueError):
    pass


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


def free_reduce(letters: Iterable[Letter]) -> tuple[Letter, ...]:
    out: list[Letter] = []
    for g, s in letters:
        if out and out[-1][0] == g and out[-1][1] == -s:
            out.pop()
        else:
            out.append((g, s))
    return tuple(out)


def cyclic_reduce(letters: Sequence[Letter]) -> tuple[Letter, ...]:
    letters = free_reduce(letters)
    i, j = 0, len(letters) - 1
    while i < j and letters[i][0] == letters[j][0] and letters[i][1] == -letters[j][1]:
        i += 1
        j -= 1
    return tuple(letters[i:j + 1])


@dataclass(frozen=True, order=True)
class Word:
    """Freely reduced element of the free group of rank ``rank``."""

    rank: int
    letters: tuple[Letter, ...] = ()

    def __post_init__(self):
        letters = free_reduce(self.letters)
        for g, s in letters:
            if not 0 <= g < self.rank or s not in (1, -1):
                raise ValueError(f"bad letter {(g, s)} for rank {self.rank}")
        object.__setattr__(self, "letters", letters)

    @classmethod
    def identity(cls, rank: int) -> Word:
        return cls(rank, ())

    @classmethod
    def generator(cls, rank: int, index: int, power: int = 1) -> Word:
        s = 1 if power >= 0 else -1
        return cls(rank, ((index, s),) * abs(power))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __mul__(self, other: Word) -> Word:
        return multiply_words(self, other)

    def __pow__(self, k: int) -> Word:
        base = self if k >= 0 else invert_word(self)
        return Word(self.rank, base.letters * abs(k))

    def inverse(self) -> Word:
        return invert_word(self)

    def is_identity(self) -> bool:
        return not self.letters

    def exponent_sum(self, j: int) -> int:
        return sum(s for g, s in self.letters if g == j)

    def codes(self) -> list[int]:
        """Column codes used by the permutation kernels: ``2j`` or ``2j+1``."""
        return [2 * g + (0 if s > 0 else 1) for g, s in self.letters]

    def format(self, names: Sequence[str] | None = None) -> str:
        if not self.letters:
            return "1"
        names = names or [f"x{i + 1}" for i in range(self.rank)]
        parts = []
        i = 0
        while i < len(self.letters):
            g, s = self.letters[i]
            k = i
            while k < len(self.letters) and self.letters[k] == (g, s):
                k += 1
            e = (k - i) * s
            parts.append(names[g] if e == 1 else f"{names[g]}^{e}")
            i = k
        return "*".join(parts)

    def __str__(self) -> str:
        return self.format()


def multiply_words(u: Word, v: Word) -> Word:
    if u.rank != v.rank:
        raise AlphabetMismatch(f"rank {u.rank} vs {v.rank}")
    return Word(u.rank, u.letters + v.letters)


def invert_word(u: Word) -> Word:
    return Word(u.rank, tuple((g, -s) for g, s in reversed(u.letters)))


def primitive_root(letters: tuple[Letter, ...]) -> tuple[tuple[Letter, ...], int]:
    """Split ``letters`` as ``root ** k`` with ``k`` maximal (syntactic)."""
    n = len(letters)
    for d in range(1, n + 1):
        if n % d == 0 and letters == letters[:d] * (n // d):
            return letters[:d], n // d
    return letters, 1


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "relators", tuple(self.relators))
        if len(set(self.generators)) != len(self.generators):
            raise ValueError("duplicate generator name")
        for r in self.relators:
            if r.rank != self.rank:
                raise AlphabetMismatch("relator over a different alphabet")
            if not r.letters:
                raise ValueError("empty relator")
            if cyclic_reduce(r.letters) != r.letters:
                raise ValueError(f"relator {r} is not cyclically reduced")

    @property
    def rank(self) -> int:
        return len(self.generators)

    def word(self, text: str) -> Word:
        """Parse a single word over this presentation's generators."""
        return parse_word(text, self.generators)

    def with_relators(self, extra: Iterable[Word]) -> Presentation:
        extra = [Word(self.rank, cyclic_reduce(w.letters)) for w in extra]
        return Presentation(self.generators, self.relators + tuple(w for w in extra if w.letters))

    def format(self) -> str:
        rels = ", ".join(r.format(self.generators) for r in self.relators)
        return f"< {', '.join(self.generators)} | {rels} >" if rels else f"< {', '.join(self.generators)} | >"

    def __str__(self) -> str:
        return self.format()


@dataclass(frozen=True)
class TorsionPresentation(Presentation):
    """Presentation whose relators are written ``R_i ** n_i``.

    ``relators`` holds the expanded powers, so the object can be used wherever
    a plain :class:`Presentation` is expected.
    """

    roots: tuple[Word, ...] = ()
    exponents: tuple[int, ...] = ()

    @classmethod
    def from_roots(cls, generators: Sequence[str], roots: Sequence[Word],
                   exponents: Sequence[int]) -> TorsionPresentation:
        rank = len(generators)
        norm_roots, norm_exps = [], []
        for r, n in zip(roots, exponents, strict=True):
            if n < 1:
                raise ValueError("torsion exponent must be positive")
            base, k = primitive_root(cyclic_reduce(r.letters))
            if not base:
                raise ValueError("empty relator root")
            norm_roots.append(Word(rank, base))
            norm_exps.append(n * k)
        relators = tuple(w ** n for w, n in zip(norm_roots, norm_exps))
        return cls(tuple(generators), relators, tuple(norm_roots), tuple(norm_exps))

    def __post_init__(self):
        super().__post_init__()
        object.__setattr__(self, "roots", tuple(self.roots))
        object.__setattr__(self, "exponents", tuple(self.exponents))
        if len(self.roots) != len(self.relators) or len(self.exponents) != len(self.relators):
            raise ValueError("one (root, exponent) pair per relator required")
        for r, n, rel in zip(self.roots, self.exponents, self.relators):
            if n < 1:
                raise ValueError("torsion exponent must be positive")
            if primitive_root(r.letters)[1] != 1:
                raise ValueError(f"root {r} is a proper power")
            if r ** n != rel:
                raise ValueError("relator does not match root ** exponent")

    def format(self) -> str:
        rels = []
        for r, n in zip(self.roots, self.exponents):
            body = r.format(self.generators)
            if len(r) > 1 or "^" in body:
                body = f"({body})"
            rels.append(body if n == 1 else f"{body}^{n}")
        return f"< {', '.join(self.generators)} | {', '.join(rels)} >"


# --- parsing -----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<int>[+-]?\d+)|(?P<op>[<>|,*^()]))")


class _Tokens:
    def __init__(self, text: str):
        self.text = text
        self.items: list[tuple[str, str, int]] = []
        pos = 0
        while True:
            m = _TOKEN.match(text, pos)
            if m is None:
                rest = text[pos:]
                if rest.strip():
                    raise self._error("unexpected character", pos + len(rest) - len(rest.lstrip()))
                break
            kind = m.lastgroup
            self.items.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.i = 0

    def _error(self, message: str, offset: int) -> ParseError:
        line = self.text.count("\n", 0, offset) + 1
        column = offset - (self.text.rfind("\n", 0, offset) + 1) + 1
        return ParseError(message, line, column)

    def peek(self) -> tuple[str, str, int] | None:
        return self.items[self.i] if self.i < len(self.items) else None

    def error(self, message: str) -> ParseError:
        tok = self.peek()
        return self._error(message, tok[2] if tok else len(self.text))

    def take(self, kind: str, value: str | None = None) -> str:
        tok = self.peek()
        if tok is None or tok[0] != kind or (value is not None and tok[1] != value):
            want = repr(value) if value else kind
            raise self.error(f"expected {want}")
        self.i += 1
        return tok[1]

    def at(self, value: str) -> bool:
        tok = self.peek()
        return tok is not None and tok[0] == "op" and tok[1] == value


def _parse_exponent(toks: _Tokens) -> int | None:
    if not toks.at("^"):
        return None
    toks.take("op", "^")
    return int(toks.take("int"))


def _parse_product(toks: _Tokens, index: Mapping[str, int]) -> list[tuple[list[Letter], int | None]]:
    """Parse ``term ("*" term)*`` into a list of (letters, explicit exponent)."""
    terms = []
    while True:
        if toks.at("("):
            toks.take("op", "(")
            inner = _parse_product(toks, index)
            toks.take("op", ")")
            letters = [l for body, e in inner for l in _power(body, 1 if e is None else e)]
        else:
            tok = toks.peek()
            name = toks.take("ident")
            if name not in index:
                raise toks._error(f"unknown generator {name!r}", tok[2])
            letters = [(index[name], 1)]
        terms.append((letters, _parse_exponent(toks)))
        if not toks.at("*"):
            return terms
        toks.take("op", "*")


def _power(letters: Sequence[Letter], e: int) -> list[Letter]:
    if e < 0:
        letters = [(g, -s) for g, s in reversed(letters)]
    return list(letters) * abs(e)


def parse_presentation(text: str) -> Presentation | TorsionPresentation:
    """Parse ``< gens | rels >``.

    A :class:`TorsionPresentation` is returned when there is at least one
    relator and every relator is a single term with an explicit positive
    exponent, e.g. ``a^2`` or ``(x1*x2)^3``.
    """
    toks = _Tokens(text)
    toks.take("op", "<")
    gens: list[str] = []
    index: dict[str, int] = {}
    while True:
        tok = toks.peek()
        name = toks.take("ident")
        if name in index:
            raise toks._error(f"duplicate generator {name!r}", tok[2])
        index[name] = len(gens)
        gens.append(name)
        if not toks.at(","):
            break
        toks.take("op", ",")
    toks.take("op", "|")
    rank = len(gens)
    relators: list[Word] = []
    torsion: list[tuple[Word, int]] | None = []
    if not toks.at(">"):
        while True:
            start = toks.peek()
            terms = _parse_product(toks, index)
            letters = [l for body, e in terms for l in _power(body, 1 if e is None else e)]
            reduced = cyclic_reduce(letters)
            if not reduced:
                raise toks._error("relator is trivial after reduction", start[2])
            relators.append(Word(rank, reduced))
            if torsion is not None and len(terms) == 1 and terms[0][1] is not None and terms[0][1] >= 1:
                torsion.append((Word(rank, terms[0][0]), terms[0][1]))
            else:
                torsion = None
            if not toks.at(","):
                break
            toks.take("op", ",")
    toks.take("op", ">")
    if toks.peek() is not None:
        raise toks.error("trailing input")
    if torsion and len(torsion) == len(relators):
        return TorsionPresentation.from_roots(gens, [r for r, _ in torsion], [n for _, n in torsion])
    return Presentation(tuple(gens), tuple(relators))


def parse_word(text: str, generators: Sequence[str]) -> Word:
    """Parse a word such as ``a*b^-1`` or ``1`` (the identity)."""
    rank = len(generators)
    if text.strip() in ("", "1", "e"):
        return Word.identity(rank)
    toks = _Tokens(text)
    index = {g: i for i, g in enumerate(generators)}
    terms = _parse_product(toks, index)
    if toks.peek() is not None:
        raise toks.error("trailing input")
    return Word(rank, tuple(l for body, e in terms for l in _power(body, 1 if e is None else e)))


# --- group ring ----------------------------------------------------------------

@dataclass(frozen=True)
class GroupRingElement:
    """Element of Z[F_n]: a finite integer combination of words."""

    rank: int
    terms: Mapping[Word, int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for w, c in self.terms.items():
            if w.rank != self.rank:
                raise AlphabetMismatch("term over a different alphabet")
            if c:
                clean[w] = clean.get(w, 0) + int(c)
        object.__setattr__(self, "terms", {w: c for w, c in sorted(clean.items()) if c})

    @classmethod
    def zero(cls, rank: int) -> GroupRingElement:
        return cls(rank, {})

    @classmethod
    def one(cls, rank: int) -> GroupRingElement:
        return cls(rank, {Word.identity(rank): 1})

    @classmethod
    def of(cls, w: Word, c: int = 1) -> GroupRingElement:
        return cls(w.rank, {w: c})

    def __hash__(self):
        return hash((self.rank, tuple(self.terms.items())))

    def __eq__(self, other):
        if isinstance(other, int):
            other = GroupRingElement(self.rank, {Word.identity(self.rank): other})
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        return self.rank == other.rank and self.terms == other.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def _coerce(self, other) -> GroupRingElement:
        if isinstance(other, int):
            return GroupRingElement(self.rank, {Word.identity(self.rank): other})
        if isinstance(other, Word):
            return GroupRingElement.of(other)
        if other.rank != self.rank:
            raise AlphabetMismatch(f"rank {self.rank} vs {other.rank}")
        return other

    def __add__(self, other) -> GroupRingElement:
        other = self._coerce(other)
        terms = dict(self.terms)
        for w, c in other.terms.items():
            terms[w] = terms.get(w, 0) + c
        return GroupRingElement(self.rank, terms)

    __radd__ = __add__

    def __neg__(self) -> GroupRingElement:
        return GroupRingElement(self.rank, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other) -> GroupRingElement:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> GroupRingElement:
        return self._coerce(other) - self

    def __mul__(self, other) -> GroupRingElement:
        if isinstance(other, int):
            return GroupRingElement(self.rank, {w: c * other for w, c in self.terms.items()})
        return ring_multiply(self, self._coerce(other))

    def __rmul__(self, other) -> GroupRingElement:
        if isinstance(other, int):
            return self * other
        return ring_multiply(self._coerce(other), self)

    def __pow__(self, k: int) -> GroupRingElement:
        out = GroupRingElement.one(self.rank)
        for _ in range(k):
            out = out * self
        return out

    def format(self, names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.terms.items():
            body = w.format(names)
            if body == "1":
                mono = str(abs(c))
            elif abs(c) == 1:
                mono = body
            else:
                mono = f"{abs(c)}*{body}"
            parts.append(("- " if c < 0 else "+ ") + mono)
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    def __str__(self) -> str:
        return self.format()


def ring_multiply(x: GroupRingElement, y: GroupRingElement) -> GroupRingElement:
    if x.rank != y.rank:
        raise AlphabetMismatch(f"rank {x.rank} vs {y.rank}")
    terms: dict[Word, int] = {}
    for u, a in x.terms.items():
        for v, b in y.terms.items():
            w = multiply_words(u, v)
            terms[w] = terms.get(w, 0) + a * b
    return GroupRingElement(x.rank, terms)


def adjoint(x: GroupRingElement) -> GroupRingElement:
    return GroupRingElement(x.rank, {invert_word(w): c for w, c in x.terms.items()})


def augmentation(x: GroupRingElement) -> int:
    return sum(x.terms.values())


def parse_ring_element(text: str, generators: Sequence[str]) -> GroupRingElement:
    """Parse ``2 + x - 3*x*y^-1`` style sums over the given generators."""
    rank = len(generators)
    src = text.replace(" ", "")
    if not src:
        raise ParseError("empty group-ring element", 1, 1)
    out = GroupRingElement.zero(rank)
    for m in re.finditer(r"([+-]?)((?:[^+\-^]|\^-?\d+)+)", src):
        sign = -1 if m.group(1) == "-" else 1
        body = m.group(2)
        coeff = 1
        cm = re.match(r"(\d+)(?:\*|$)", body)
        if cm:
            coeff = int(cm.group(1))
            body = body[cm.end():]
        word = parse_word(body, generators) if body else Word.identity(rank)
        out = out + GroupRingElement.of(word, sign * coeff)
    return out


@dataclass(frozen=True)
class GroupRingMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[GroupRingElement, ...], ...]
    rank: int

    def __post_init__(self):
        entries = tuple(tuple(r) for r in self.entries)
        if len(entries) != self.rows or any(len(r) != self.cols for r in entries):
            raise ValueError("inconsistent matrix dimensions")
        for row in entries:
            for e in row:
                if e.rank != self.rank:
                    raise AlphabetMismatch("entry over a different alphabet")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[GroupRingElement | int]], rank: int,
                  cols: int | None = None) -> GroupRingMatrix:
        conv = [[GroupRingElement(rank, {Word.identity(rank): e}) if isinstance(e, int) else e
                 for e in row] for row in rows]
        ncols = cols if cols is not None else (len(conv[0]) if conv else 0)
        return cls(len(conv), ncols, tuple(tuple(r) for r in conv), rank)

    @classmethod
    def zeros(cls, rows: int, cols: int, rank: int) -> GroupRingMatrix:
        z = GroupRingElement.zero(rank)
        return cls(rows, cols, tuple((z,) * cols for _ in range(rows)), rank)

    @classmethod
    def identity(cls, size: int, rank: int) -> GroupRingMatrix:
        return cls.from_rows([[1 if i == j else 0 for j in range(size)] for i in range(size)],
                             rank, cols=size)

    def __getitem__(self, ij: tuple[int, int]) -> GroupRingElement:
        return self.entries[ij[0]][ij[1]]

    def __matmul__(self, other: GroupRingMatrix) -> GroupRingMatrix:
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = GroupRingElement.zero(self.rank)
                for k in range(self.cols):
                    acc = acc + self.entries[i][k] * other.entries[k][j]
                row.append(acc)
            out.append(row)
        return GroupRingMatrix.from_rows(out, self.rank, cols=other.cols)

    def adjoint(self) -> GroupRingMatrix:
        """Conjugate transpose: entry (j, i) of the result is adjoint(entry (i, j))."""
        return GroupRingMatrix.from_rows(
            [[adjoint(self.entries[i][j]) for i in range(self.rows)] for j in range(self.cols)],
            self.rank, cols=self.rows)

    def stack(self, other: GroupRingMatrix) -> GroupRingMatrix:
        if self.cols != other.cols:
            raise ValueError("column mismatch")
        return GroupRingMatrix(self.rows + other.rows, self.cols, self.entries + other.entries,
                               self.rank)

    def format(self, names: Sequence[str] | None = None) -> str:
        return "; ".join(", ".join(e.format(names) for e in row) for row in self.entries)

    def __str__(self) -> str:
        return self.format()


def parse_ring_matrix(text: str, generators: Sequence[str]) -> GroupRingMatrix:
    """Rows separated by ``;``, entries by ``,``: ``"1 + x, 0; 0, 1 - y"``."""
    rows = [[parse_ring_element(e, generators) for e in row.split(",")]
            for row in text.split(";") if row.strip()]
    if len({len(r) for r in rows}) > 1:
        raise ParseError("ragged group-ring matrix", 1, 1)
    return GroupRingMatrix.from_rows(rows, len(generators))


def rational_str(q: Fraction | int) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"
