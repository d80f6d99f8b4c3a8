import pytest
from hypothesis import given, settings, strategies as st

from l2rank.fixtures import load_fixture
from l2rank.presentations import parse_presentation
from l2rank.zlinalg import betti1, is_perfect, rank_fraction_free, smith_normal_form

from oracles import determinantal_divisors

matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c),
                           min_size=r, max_size=r)))


@settings(max_examples=150)
@given(matrices)
def test_snf_matches_minors(m):
    res = smith_normal_form(m)
    divisors = determinantal_divisors(m)
    prod = 1
    for k, d in enumerate(res.diagonal):
        prod *= d
        assert prod == divisors[k]
    assert res.rank == rank_fraction_free(m)
    assert all(divisors[k] == 0 for k in range(res.rank, len(divisors)))


@given(matrices)
def test_snf_divisibility_chain(m):
    res = smith_normal_form(m)
    diag = res.diagonal[:res.rank]
    assert all(d > 0 for d in diag)
    assert all(d == 0 for d in res.diagonal[res.rank:])
    assert all(diag[i + 1] % diag[i] == 0 for i in range(len(diag) - 1))


def test_snf_small_example():
    res = smith_normal_form([[2, 0], [0, 3]])
    assert res.diagonal == (1, 6)
    assert list(res.torsion) == [6]


def test_snf_sparse_input_agrees_with_dense():
    dense = [[0, 2, 0], [1, 0, 0], [0, 0, 4]]
    sparse = [{1: 2}, {0: 1}, {2: 4}]
    assert smith_normal_form(sparse).diagonal == smith_normal_form(dense).diagonal


def test_empty_matrix():
    assert smith_normal_form([]).rank == 0


@pytest.mark.parametrize("name, expected", [
    ("pslz", (0, [2, 3])),
    ("kt", (0, [])),
    ("free_2", (2, [])),
    ("g0_3_5", (0, [5, 5, 5])),
    ("hn_3", (0, [2])),
])
def test_betti1_fixtures(name, expected):
    assert betti1(load_fixture(name)) == expected


def test_is_perfect():
    assert is_perfect(load_fixture("kt"))
    assert not is_perfect(load_fixture("pslz"))
    assert is_perfect(parse_presentation("< a | a >"))
