from collections import Counter
from fractions import Fraction

import pytest

from l2rank.fixtures import load_fixture
from l2rank.presentations import parse_presentation
from l2rank.quotients import (
    OrderCapExceeded,
    build_chain,
    intersect_quotients,
    kernel_betti1,
    kernel_contained,
    luck_estimate,
    quotient_from_permutations,
    search_finite_quotients,
)


def test_free_group_quotient_counts():
    # kernels onto G number |Epi(F_2, G)| / |Aut(G)|:
    # Z2: 3, Z3: 4, S3: 3, Z4: 6, V4: 1, D4: 3, A4: 4, S4: 9
    qs = search_finite_quotients(load_fixture("free_2"), 4)
    counts = Counter(q.order for q in qs)
    assert counts == {1: 1, 2: 3, 3: 4, 4: 7, 6: 3, 8: 3, 12: 4, 24: 9}
    assert all(q.is_regular() for q in qs)


def test_cyclic_quotients_of_z():
    # Z/m embeds in S_5 exactly for m in 1..6
    qs = search_finite_quotients(load_fixture("free_1"), 5)
    assert [q.order for q in qs] == [1, 2, 3, 4, 5, 6]


def test_perfect_group_has_no_small_quotients():
    assert [q.order for q in search_finite_quotients(load_fixture("kt"), 5)] == [1]


def test_pslz_quotients_respect_relators():
    p = load_fixture("pslz")
    qs = search_finite_quotients(p, 5)
    for q in qs:
        for r in p.relators:
            assert q.evaluate(r) == 0
    assert 60 in [q.order for q in qs]


def test_search_is_deterministic_and_parallel_safe():
    p = load_fixture("pslz")
    a = search_finite_quotients(p, 4)
    b = search_finite_quotients(p, 4, jobs=2)
    assert [q.key for q in a] == [q.key for q in b]


def test_multiplication_table_is_a_group():
    p = parse_presentation("< a, b | a^2, b^3, (a*b)^2 >")
    q = quotient_from_permutations(p, [(1, 0, 2), (1, 2, 0)])
    assert q.order == 6
    t = q.multiplication_table
    for x in range(6):
        assert t[0][x] == t[x][0] == x
        assert t[x][q.inverse[x]] == 0
        for y in range(6):
            for z in range(6):
                assert t[t[x][y]][z] == t[x][t[y][z]]


def test_quotient_rejects_bad_images():
    p = load_fixture("pslz")
    with pytest.raises(ValueError):
        quotient_from_permutations(p, [(1, 2, 0), (0, 1, 2)])


def test_order_cap():
    p = load_fixture("free_2")
    with pytest.raises(OrderCapExceeded):
        quotient_from_permutations(p, [(1, 0, 2, 3, 4), (1, 2, 3, 4, 0)], cap=50)


def test_intersection_and_nesting():
    p = load_fixture("free_1")
    z2 = quotient_from_permutations(p, [(1, 0)])
    z3 = quotient_from_permutations(p, [(1, 2, 0)])
    z6 = intersect_quotients(z2, z3)
    assert z6.order == 6
    assert kernel_contained(z6, z2) and kernel_contained(z6, z3)
    assert not kernel_contained(z2, z3)


def test_chain_is_nested_and_growing():
    p = load_fixture("pslz")
    chain = build_chain(p, search_finite_quotients(p, 5), 4)
    assert chain.indices == sorted(set(chain.indices))
    assert chain.is_nested()


def test_free_group_kernel_ratios():
    p = load_fixture("free_2")
    for q in search_finite_quotients(p, 3)[1:]:
        s = kernel_betti1(q)
        assert s.ratio == Fraction(1 + q.order, q.order)


def test_luck_estimate_tail_maximum():
    p = load_fixture("pslz")
    chain = build_chain(p, search_finite_quotients(p, 5), 3)
    est = luck_estimate(p, chain)
    assert est.ratios == [0, Fraction(1, 3), Fraction(2, 9)]
    assert est.limsup_lower_bound == Fraction(1, 3)
    assert not est.intersection_trivial_certified
