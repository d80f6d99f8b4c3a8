from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from l2rank.presentations import (
    GroupRingElement,
    GroupRingMatrix,
    ParseError,
    Presentation,
    TorsionPresentation,
    Word,
    adjoint,
    augmentation,
    cyclic_reduce,
    free_reduce,
    parse_presentation,
    parse_ring_matrix,
    parse_word,
    rational_str,
)

from conftest import ranked_words, words


def test_parse_pslz_is_torsion():
    p = parse_presentation("< a, b | a^2, b^3 >")
    assert isinstance(p, TorsionPresentation)
    assert p.generators == ("a", "b")
    assert p.exponents == (2, 3)
    assert [r.format(p.generators) for r in p.roots] == ["a", "b"]


def test_parse_kt_is_plain():
    p = parse_presentation("< y, z | z*y*z*y^-2, y*z*y*z^-6 >")
    assert not isinstance(p, TorsionPresentation)
    assert p.relators[0] == p.word("z*y*z*y^-2")
    assert len(p.relators[1]) == 9


def test_parse_free_group_has_no_relators():
    p = parse_presentation("< a, b | >")
    assert p.relators == () and p.rank == 2
    assert not isinstance(p, TorsionPresentation)


def test_parenthesized_power_becomes_torsion():
    p = parse_presentation("< x1, x2 | x1^2, (x1*x2)^3 >")
    assert isinstance(p, TorsionPresentation)
    assert p.exponents == (2, 3)
    assert p.relators[1] == p.word("x1*x2") ** 3


def test_proper_power_root_is_folded():
    p = parse_presentation("< a | (a*a)^3 >")
    assert p.exponents == (6,)
    assert p.roots == (p.word("a"),)


@pytest.mark.parametrize("text, col", [
    ("< a, b | a^ >", 13),
    ("< a, a | >", 6),
    ("< a | c >", 7),
    ("< a | a*a^-1 >", 7),
    ("< a | a > junk", 11),
])
def test_parse_errors_report_position(text, col):
    with pytest.raises(ParseError) as exc:
        parse_presentation(text)
    assert exc.value.line == 1
    assert exc.value.column == col


def test_parse_error_line_number():
    with pytest.raises(ParseError) as exc:
        parse_presentation("< a, b |\n  a^2, q >")
    assert exc.value.line == 2


def test_presentation_rejects_non_cyclically_reduced():
    w = Word(1, ((0, 1), (0, 1)))
    assert Presentation(("a",), (w,)).rank == 1
    with pytest.raises(ValueError):
        Presentation(("a", "b"), (Word(2, ((0, 1), (1, 1), (0, -1))),))


def test_word_identity_parsing():
    assert parse_word("1", ("a",)).is_identity()
    assert parse_word("a*a^-1", ("a",)).is_identity()


@given(ranked_words())
def test_free_reduce_idempotent(rw):
    _, w = rw
    assert free_reduce(w.letters) == w.letters
    c = cyclic_reduce(w.letters)
    assert cyclic_reduce(c) == c


@given(ranked_words())
def test_word_inverse(rw):
    rank, w = rw
    assert (w * w.inverse()).is_identity()
    assert w.inverse().inverse() == w


@given(ranked_words(), st.integers(0, 3))
def test_word_format_round_trip(rw, _):
    rank, w = rw
    names = tuple(f"g{i}" for i in range(rank))
    assert parse_word(w.format(names), names) == w


@st.composite
def ring_elements(draw, rank=2):
    ws = draw(st.lists(words(rank, 4), max_size=4))
    cs = draw(st.lists(st.integers(-3, 3), min_size=len(ws), max_size=len(ws)))
    return GroupRingElement(rank, dict(zip(ws, cs)))


@given(ring_elements(), ring_elements(), ring_elements())
def test_group_ring_associative_distributive(x, y, z):
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z


@given(ring_elements(), ring_elements())
def test_adjoint_antihomomorphism_and_augmentation(x, y):
    assert adjoint(x * y) == adjoint(y) * adjoint(x)
    assert adjoint(adjoint(x)) == x
    assert augmentation(x * y) == augmentation(x) * augmentation(y)


def test_ring_matrix_parse_and_adjoint():
    m = parse_ring_matrix("1 + x, 2*x^-1; 0, -y", ("x", "y"))
    assert m.rows == m.cols == 2
    a = m.adjoint()
    assert a[0, 1] == GroupRingElement.zero(2)
    assert a[1, 0] == GroupRingElement.of(Word(2, ((0, 1),)), 2)
    assert a[1, 1] == GroupRingElement.of(Word(2, ((1, -1),)), -1)


def test_ring_matrix_product_identity():
    m = parse_ring_matrix("1 + x, y", ("x", "y"))
    assert m @ GroupRingMatrix.identity(2, 2) == m


def test_rational_str_lowest_terms():
    assert rational_str(Fraction(4, 6)) == "2/3"
    assert rational_str(0) == "0/1"
    assert rational_str(Fraction(-3, 9)) == "-1/3"
