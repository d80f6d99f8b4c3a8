from fractions import Fraction

import pytest

from l2rank.bounds import (
    MarkedGroup,
    check_irreducibility,
    generator_bound,
    marked_distance,
    normal_rank_witness,
    pt_lower_bound,
    reduced_words,
    sigma,
)
from l2rank.fixtures import load_fixture
from l2rank.presentations import Word, parse_presentation
from l2rank.quotients import quotient_from_permutations, search_finite_quotients


def test_sigma():
    assert sigma(load_fixture("pslz")) == Fraction(5, 6)
    assert sigma(load_fixture("g0_3_5")) == Fraction(3, 5)


def test_pslz_lower_bound_certified_by_order_six():
    p = load_fixture("pslz")
    q6 = quotient_from_permutations(p, [(1, 0, 2), (1, 2, 0)])
    assert q6.order == 6
    rep = pt_lower_bound(p, q6)
    assert rep.lower == Fraction(1, 6)
    assert rep.certified
    assert all(c["quotient_order"] == 6 for c in rep.certificates)


def test_lower_bound_uncertified_without_witness():
    p = load_fixture("pslz")
    q2 = quotient_from_permutations(p, [(1, 0), (0, 1)])
    rep = pt_lower_bound(p, q2)
    assert not rep.certified
    assert rep.lower == Fraction(1, 6)


def test_vacuous_bound_is_noted():
    p = parse_presentation("< a | a^3 >")
    rep = pt_lower_bound(p, search_finite_quotients(p, 3))
    assert rep.lower < 0
    assert any("vacuous" in n for n in rep.notes)


def test_h3_irreducibility_via_s3():
    h3 = load_fixture("hn_3")
    # x1, x2, x3 -> (01), (12), (01): roots x_i have order 2, x1*x2 order 3,
    # x1*x3 maps to the identity so its order-5 claim stays unwitnessed here
    s3 = quotient_from_permutations(h3, [(1, 0, 2), (0, 2, 1), (1, 0, 2)])
    orders = check_irreducibility(h3, [s3])
    assert [o.certified for o in orders] == [True, True, True, True, False]


def test_generator_bound():
    rep = generator_bound(load_fixture("g0_3_5"))
    assert rep.upper == 2 and rep.certified


def test_normal_rank_witnesses():
    p = load_fixture("pslz")
    rep = normal_rank_witness(p, [p.word("a*b")], 200)
    assert rep.certified and rep.upper == 1
    h3 = load_fixture("hn_3")
    assert normal_rank_witness(h3, [h3.word("x1")], 200).certified


def test_normal_rank_inconclusive():
    p = load_fixture("pslz")
    rep = normal_rank_witness(p, [p.word("a")], 200)
    assert not rep.certified and rep.upper is None


def test_normal_rank_contrast_note():
    p = load_fixture("pslz")
    rep = normal_rank_witness(p, [p.word("a*b")], 200, l2_lower=pt_lower_bound(p))
    assert rep.certified
    assert any("exceeds" in n for n in rep.notes)


def test_reduced_word_counts():
    # 2n(2n-1)^(k-1) reduced words of length k in F_n
    for k in range(1, 5):
        assert len(list(reduced_words(2, k))) == 4 * 3 ** (k - 1)


def test_marked_distance_exact():
    a = MarkedGroup(2, (Word(2, ((0, 1),) * 2), Word(2, ((1, 1),) * 3)))
    b = MarkedGroup(2, (Word(2, ((0, 1),) * 2), Word(2, ((1, 1),) * 4)))
    for r in (3, 4, 5, 6):
        rep = marked_distance(a, b, r)
        assert rep.kind == "exact"
        assert rep.value == Fraction(1, 4)


def test_marked_distance_symmetric():
    a = MarkedGroup(2, (Word(2, ((0, 1),)),))
    b = MarkedGroup(2, (Word(2, ((1, 1),)),))
    assert marked_distance(a, b, 3).value == marked_distance(b, a, 3).value == 1


def test_marked_distance_identical():
    a = MarkedGroup(2, (Word(2, ((0, 1),) * 2),))
    assert marked_distance(a, a).value == 0


def test_marked_distance_rank_mismatch():
    with pytest.raises(ValueError):
        marked_distance(MarkedGroup(1), MarkedGroup(2))
